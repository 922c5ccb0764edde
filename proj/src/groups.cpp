#include "minwise/groups.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace minwise {

namespace {

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Rank-indexed view of S_n (lexicographic image order).
// Multiplication table uses uint16 ranks; n <= 7 keeps it under 52 MB.
struct SymContext {
    int n;
    int fact;
    std::vector<std::vector<int>> perms; // rank -> image
    std::vector<int> elem_order;         // rank -> element order
    std::vector<uint16_t> mult;          // mult[a*fact+b] = rank(a∘b)
    std::vector<uint16_t> inv;

    explicit SymContext(int n_) : n(n_), fact((int)factorial(n_)) {
        perms.reserve(fact);
        std::vector<int> img(n);
        std::iota(img.begin(), img.end(), 1);
        do {
            perms.push_back(img);
        } while (std::next_permutation(img.begin(), img.end()));
        elem_order.resize(fact);
        for (int r = 0; r < fact; ++r) elem_order[r] = order_of(perms[r]);
        mult.resize((size_t)fact * fact);
        std::vector<int> prod(n);
        for (int a = 0; a < fact; ++a)
            for (int b = 0; b < fact; ++b) {
                for (int i = 0; i < n; ++i) prod[i] = perms[a][perms[b][i] - 1];
                mult[(size_t)a * fact + b] = (uint16_t)rank_of(prod);
            }
        inv.resize(fact);
        for (int a = 0; a < fact; ++a) {
            for (int i = 0; i < n; ++i) prod[perms[a][i] - 1] = i + 1;
            inv[a] = (uint16_t)rank_of(prod);
        }
    }

    int rank_of(const std::vector<int>& img) const {
        // Lehmer code
        long long r = 0;
        long long f = factorial(n - 1);
        for (int i = 0; i < n; ++i) {
            int c = 0;
            for (int j = i + 1; j < n; ++j)
                if (img[j] < img[i]) ++c;
            r += c * f;
            if (i + 1 < n) f /= (n - 1 - i);
        }
        return (int)r;
    }

    static int order_of(const std::vector<int>& img) {
        int n = (int)img.size();
        std::vector<char> seen(n, 0);
        long long ord = 1;
        for (int i = 0; i < n; ++i) {
            if (seen[i]) continue;
            int len = 0, x = i;
            while (!seen[x]) {
                seen[x] = 1;
                x = img[x] - 1;
                ++len;
            }
            ord = std::lcm(ord, (long long)len);
        }
        return (int)ord;
    }

    int mul(int a, int b) const { return mult[(size_t)a * fact + b]; }
};

std::string key_of(const std::vector<int>& sorted_ranks) {
    std::string k((sorted_ranks.size()) * sizeof(int), '\0');
    std::memcpy(k.data(), sorted_ranks.data(), k.size());
    return k;
}

// closure under multiplication, sorted ranks; empty result = overflowed limit
std::vector<int> close_ranks(const SymContext& ctx, const std::vector<int>& gens,
                             long long limit) {
    std::vector<int> elems{0}; // identity has rank 0
    std::vector<char> in(ctx.fact, 0);
    in[0] = 1;
    size_t head = 0;
    for (int g : gens)
        if (!in[g]) {
            in[g] = 1;
            elems.push_back(g);
        }
    while (head < elems.size()) {
        int a = elems[head++];
        for (int g : gens) {
            int c = ctx.mul(a, g);
            if (!in[c]) {
                in[c] = 1;
                elems.push_back(c);
                if ((long long)elems.size() > limit) return {};
            }
        }
    }
    std::sort(elems.begin(), elems.end());
    return elems;
}

Subgroup make_subgroup(const SymContext& ctx, const std::vector<int>& sorted_ranks,
                       const std::vector<int>& gen_ranks) {
    Subgroup s;
    s.n = ctx.n;
    s.elements.reserve(sorted_ranks.size());
    for (int r : sorted_ranks) s.elements.emplace_back(ctx.perms[r]);
    for (int r : gen_ranks) s.generators.emplace_back(ctx.perms[r]);
    if (s.generators.empty()) s.generators.push_back(Perm::identity(ctx.n));
    return s;
}

} // namespace

std::string Subgroup::generators_str() const {
    std::string s;
    for (size_t i = 0; i < generators.size(); ++i) {
        if (i) s += "; ";
        s += generators[i].str();
    }
    return s;
}

Subgroup closure(int n, const std::vector<Perm>& gens) {
    if (n < 1 || n > 7) throw std::invalid_argument("closure: supported for 1 <= n <= 7");
    SymContext ctx(n);
    std::vector<int> gr;
    for (const Perm& g : gens) {
        if (g.n() != n) throw std::invalid_argument("closure: generator size != n");
        gr.push_back(ctx.rank_of(g.image()));
    }
    return make_subgroup(ctx, close_ranks(ctx, gr, ctx.fact), gr);
}

std::vector<Subgroup> subgroups_of_order(int n, long long q) {
    if (n < 1 || n > 7)
        throw std::invalid_argument(
            "subgroups_of_order: complete enumeration supported for 1 <= n <= 7; "
            "use a generator file beyond that");
    if (q < 1 || factorial(n) % q != 0)
        throw std::invalid_argument("subgroups_of_order: q must divide n!");
    SymContext ctx(n);

    std::vector<int> candidates; // elements whose order divides q
    for (int r = 1; r < ctx.fact; ++r)
        if (q % ctx.elem_order[r] == 0) candidates.push_back(r);

    struct Node {
        std::vector<int> elems; // sorted ranks
        std::vector<int> gens;
    };
    std::vector<Node> layer, all;
    std::unordered_set<std::string> seen;

    auto push = [&](std::vector<int> elems, std::vector<int> gens, std::vector<Node>& out) {
        std::string k = key_of(elems);
        if (seen.insert(std::move(k)).second)
            out.push_back(Node{std::move(elems), std::move(gens)});
    };

    push({0}, {}, layer); // trivial subgroup; first extension layer yields the cyclic ones

    std::vector<char> member(ctx.fact, 0);
    while (!layer.empty()) {
        all.insert(all.end(), layer.begin(), layer.end());
        std::vector<Node> next;
        for (const Node& node : layer) {
            if ((long long)node.elems.size() == q) continue; // no proper extension keeps order | q
            for (int r : node.elems) member[r] = 1;
            for (int x : candidates) {
                if (member[x]) continue;
                // canonical coset representative: skip x unless it is the
                // rank-minimal element of its left coset node∘x
                bool minimal = true;
                for (int s : node.elems)
                    if (ctx.mul(s, x) < x) {
                        minimal = false;
                        break;
                    }
                if (!minimal) continue;
                std::vector<int> gens = node.gens;
                gens.push_back(x);
                std::vector<int> ext = close_ranks(ctx, gens, q);
                if (ext.empty() || q % (long long)ext.size() != 0) continue;
                push(std::move(ext), std::move(gens), next);
            }
            for (int r : node.elems) member[r] = 0;
        }
        layer = std::move(next);
    }

    std::vector<Node> hits;
    for (Node& node : all)
        if ((long long)node.elems.size() == q) hits.push_back(std::move(node));
    std::sort(hits.begin(), hits.end(),
              [](const Node& a, const Node& b) { return a.elems < b.elems; });
    std::vector<Subgroup> out;
    out.reserve(hits.size());
    for (const Node& node : hits) out.push_back(make_subgroup(ctx, node.elems, node.gens));
    return out;
}

std::vector<SubgroupClass> conjugacy_classes(const std::vector<Subgroup>& subs, int n) {
    if (n < 1 || n > 7) throw std::invalid_argument("conjugacy_classes: supported for 1 <= n <= 7");
    SymContext ctx(n);
    std::vector<std::vector<int>> rank_sets;
    std::unordered_map<std::string, int> index;
    for (size_t i = 0; i < subs.size(); ++i) {
        std::vector<int> rs;
        for (const Perm& p : subs[i].elements) {
            if (p.n() != n) throw std::invalid_argument("conjugacy_classes: subgroup size != n");
            rs.push_back(ctx.rank_of(p.image()));
        }
        std::sort(rs.begin(), rs.end());
        rank_sets.push_back(rs);
        index.emplace(key_of(rs), (int)i);
    }
    // order by element list so class seeds (and thus representatives) are minimal
    std::vector<int> order((int)subs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return rank_sets[a] < rank_sets[b]; });

    std::vector<char> assigned(subs.size(), 0);
    std::vector<SubgroupClass> classes;
    for (int i : order) {
        if (assigned[i]) continue;
        std::unordered_set<std::string> orbit_keys;
        std::vector<int> found;
        std::vector<int> conj(rank_sets[i].size());
        for (int psi = 0; psi < ctx.fact; ++psi) {
            int psi_inv = ctx.inv[psi];
            for (size_t e = 0; e < rank_sets[i].size(); ++e)
                conj[e] = ctx.mul(ctx.mul(psi, rank_sets[i][e]), psi_inv);
            std::sort(conj.begin(), conj.end());
            std::string k = key_of(conj);
            if (!orbit_keys.insert(k).second) continue;
            auto it = index.find(k);
            if (it != index.end() && !assigned[it->second]) {
                assigned[it->second] = 1;
                found.push_back(it->second);
            }
        }
        std::sort(found.begin(), found.end(),
                  [&](int a, int b) { return rank_sets[a] < rank_sets[b]; });
        SubgroupClass cls;
        cls.representative = subs[found.front()];
        for (int f : found) cls.members.push_back(subs[f]);
        classes.push_back(std::move(cls));
    }
    return classes;
}

std::vector<Perm> parse_generator_list(const std::string& line, int n) {
    std::vector<Perm> gens;
    std::string part;
    std::istringstream in(line);
    while (std::getline(in, part, ';')) {
        std::istringstream ps(part);
        std::vector<int> img;
        int v;
        while (ps >> v) img.push_back(v);
        if (img.empty()) continue;
        if ((int)img.size() != n)
            throw std::invalid_argument("generator list: expected " + std::to_string(n) +
                                        " entries per permutation");
        gens.emplace_back(std::move(img));
    }
    return gens;
}

std::vector<Subgroup> read_group_file(std::istream& in, int n) {
    std::vector<Subgroup> out;
    std::string line;
    while (std::getline(in, line)) {
        size_t p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos || line[p] == '#') continue;
        std::vector<Perm> gens = parse_generator_list(line, n);
        if (gens.empty()) continue;
        out.push_back(closure(n, gens));
    }
    return out;
}

std::vector<Subgroup> read_group_file(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open group file: " + path);
    return read_group_file(in, n);
}

} // namespace minwise
