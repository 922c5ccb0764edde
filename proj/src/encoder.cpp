#include "minwise/encoder.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "minwise/patterns.hpp"

namespace minwise {

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::pure: return "pure";
        case Mode::left: return "left";
        case Mode::right: return "right";
    }
    throw std::logic_error("mode_name");
}

Mode mode_from_name(const std::string& s) {
    if (s == "pure") return Mode::pure;
    if (s == "left") return Mode::left;
    if (s == "right") return Mode::right;
    throw std::invalid_argument("unknown mode: " + s);
}

int default_prefix_len(int n) {
    // minimal comparisons to sort n items for n <= 8; full length past the table
    static const int table[9] = {0, 0, 1, 3, 5, 7, 10, 13, 16};
    if (n >= 1 && n <= 8) return table[n];
    return n * (n - 1) / 2;
}

namespace {

long long factorial_ll(int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

int resolved_prefix(const ModelConfig& cfg) {
    int full = cfg.n * (cfg.n - 1) / 2;
    int h = cfg.H < 0 ? default_prefix_len(cfg.n) : cfg.H;
    if (h > full) throw std::invalid_argument("H exceeds z_cat length n(n-1)/2");
    return h;
}

void validate(const ModelConfig& cfg, long long q) {
    if (cfg.n < 3 || cfg.k < 3 || cfg.k > cfg.n)
        throw std::invalid_argument("model: need 3 <= k <= n");
    if (cfg.d < 1) throw std::invalid_argument("model: need d >= 1");
    if (cfg.rankwise) {
        if (cfg.d % factorial_ll(cfg.k) != 0)
            throw std::invalid_argument("model: rankwise needs d divisible by k!");
    } else if (cfg.d % lcm_upto(cfg.k) != 0) {
        throw std::invalid_argument("model: d must be divisible by lcm(1..k)");
    }
    if (q < 1 || cfg.d % q != 0)
        throw std::invalid_argument("model: group order must divide d");
}

// One n x n grid of fresh variables per index, row-major, grid index outermost.
std::vector<std::vector<int>> alloc_grids(CnfFormula& f, int count, int n) {
    std::vector<std::vector<int>> grids(count);
    for (int g = 0; g < count; ++g) {
        grids[g].resize((size_t)n * n);
        for (int i = 0; i < n * n; ++i) grids[g][i] = f.new_var();
    }
    return grids;
}

Lit glit(const std::vector<int>& grid, int n, int i, int j) {
    return Lit::of_var(grid[(size_t)(i - 1) * n + (j - 1)]);
}

// strict total order axioms on one incidence grid
void emit_order_clauses(CnfFormula& f, const std::vector<int>& g, int n) {
    for (int i = 1; i <= n; ++i) f.add_clause({~glit(g, n, i, i)});
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            f.add_clause({~glit(g, n, i, j), ~glit(g, n, j, i)});
            f.add_clause({glit(g, n, i, j), glit(g, n, j, i)});
        }
    // x_ij & x_jh -> x_ih for j > i, any other h; with asymmetry and totality
    // this kills both orientations of every 3-cycle, so the order is total
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int h = 1; h <= n; ++h) {
                if (h == i || h == j) continue;
                f.add_clause({~glit(g, n, i, j), ~glit(g, n, j, h), glit(g, n, i, h)});
            }
}

// Upper cardinality bounds. lit_at(t, i, j) yields the incidence literal
// x_{i,j} of family member t (0-based); D = member count = cfg.d.
void emit_cardinality(CnfFormula& f, const ModelConfig& cfg,
                      const std::function<Lit(int, int, int)>& lit_at) {
    int D = cfg.d;
    std::vector<Lit> conj, members;
    auto bound_tuples = [&](const std::vector<std::vector<int>>& tuples, long long bound,
                            bool chain) {
        for (const auto& tup : tuples) {
            members.clear();
            for (int t = 0; t < D; ++t) {
                conj.clear();
                if (chain) { // consecutive comparisons v_1 < v_2 < ... < v_len
                    for (size_t h = 1; h < tup.size(); ++h)
                        conj.push_back(lit_at(t, tup[h - 1], tup[h]));
                } else { // distinguished first entry below all others
                    for (size_t h = 1; h < tup.size(); ++h)
                        conj.push_back(lit_at(t, tup[0], tup[h]));
                }
                members.push_back(define_conjunction(f, conj));
            }
            at_most(f, members, (int)bound);
        }
    };
    if (cfg.rankwise) {
        bound_tuples(enumerate_subperms(cfg.n, cfg.k), cfg.d / factorial_ll(cfg.k), true);
        return;
    }
    for (int j = 4; j <= cfg.k; ++j) {
        std::vector<std::vector<int>> tuples;
        for (const SemiPattern& sp : enumerate_sop(cfg.n, j)) tuples.push_back(sp.s);
        bound_tuples(tuples, cfg.d / j, false);
    }
    // orders of length 3 replace the j <= 3 pattern constraints
    bound_tuples(enumerate_subperms(cfg.n, 3), cfg.d / 6, true);
}

std::vector<Lit> z_cat_tuple(const std::vector<int>& grid, int n, int H) {
    std::vector<Lit> tup;
    tup.reserve(H);
    auto pos = z_cat_positions(n);
    for (int t = 0; t < H; ++t) tup.push_back(glit(grid, n, pos[t].first, pos[t].second));
    return tup;
}

// z_cat of grid[idx+1] lexicographically <= z_cat of grid[idx], truncated to H
void emit_lex_chain(CnfFormula& f, const std::vector<std::vector<int>>& grids, int n, int H) {
    if (H == 0) return;
    for (size_t m = 0; m + 1 < grids.size(); ++m)
        lex_leq(f, z_cat_tuple(grids[m + 1], n, H), z_cat_tuple(grids[m], n, H));
}

std::vector<Perm> group_elements_sorted(const Subgroup& g, int n) {
    if (g.n != n) throw std::invalid_argument("model: group acts on wrong n");
    std::vector<Perm> elems = g.elements;
    std::sort(elems.begin(), elems.end());
    if (elems.empty() || elems.front() != Perm::identity(n))
        throw std::invalid_argument("model: group must contain the identity");
    return elems;
}

DecodeMap base_map(const ModelConfig& cfg, long long q, const std::string& gens) {
    DecodeMap m;
    m.mode = cfg.mode;
    m.n = cfg.n;
    m.k = cfg.k;
    m.d = cfg.d;
    m.q = (int)q;
    m.H = resolved_prefix(cfg);
    m.fix_first = cfg.fix_first;
    m.rankwise = cfg.rankwise;
    m.literal_right = cfg.mode == Mode::right && cfg.paper_literal_right;
    m.group_generators = gens;
    return m;
}

} // namespace

BuildResult build_pure(const ModelConfig& cfg) {
    validate(cfg, 1);
    int n = cfg.n, d = cfg.d, H = resolved_prefix(cfg);
    BuildResult res;
    res.map = base_map(cfg, 1, "");
    CnfFormula& f = res.cnf;
    auto grids = alloc_grids(f, d, n);
    res.map.x_vars = grids;
    for (int m = 0; m < d; ++m) emit_order_clauses(f, grids[m], n);
    if (cfg.fix_first)
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) f.add_clause({glit(grids[0], n, i, j)});
    emit_cardinality(f, cfg, [&](int t, int i, int j) { return glit(grids[t], n, i, j); });
    emit_lex_chain(f, grids, n, H);
    return res;
}

BuildResult build_left(const ModelConfig& cfg, const Subgroup& g) {
    long long q = g.order();
    validate(cfg, q);
    int n = cfg.n, H = resolved_prefix(cfg);
    auto gamma = group_elements_sorted(g, n);
    int offsets = (int)(cfg.d / q);
    BuildResult res;
    res.map = base_map(cfg, q, g.generators_str());
    CnfFormula& f = res.cnf;
    auto grids = alloc_grids(f, offsets, n);
    res.map.x_vars = grids;
    for (int l = 0; l < offsets; ++l) emit_order_clauses(f, grids[l], n);
    // member t = (l, m), l outer: incidence of theta_l∘gamma_m at (i, j) is
    // the offset's incidence at (gamma_m(i), gamma_m(j))
    emit_cardinality(f, cfg, [&](int t, int i, int j) {
        int l = t / (int)q, m = t % (int)q;
        return glit(grids[l], n, gamma[m](i), gamma[m](j));
    });
    emit_lex_chain(f, grids, n, H);
    return res;
}

BuildResult build_right(const ModelConfig& cfg, const Subgroup& g) {
    long long q = g.order();
    validate(cfg, q);
    int n = cfg.n, H = resolved_prefix(cfg);
    auto gamma = group_elements_sorted(g, n);
    std::vector<Perm> gamma_inv;
    for (const Perm& p : gamma) gamma_inv.push_back(p.inverse());
    int offsets = (int)(cfg.d / q);
    BuildResult res;
    res.map = base_map(cfg, q, g.generators_str());
    CnfFormula& f = res.cnf;
    auto tg = alloc_grids(f, offsets, n);          // permutation matrices T
    auto xg = alloc_grids(f, cfg.d, n);            // derived incidence grids
    res.map.t_vars = tg;
    res.map.x_vars = xg;
    // bi-stochasticity
    for (int l = 0; l < offsets; ++l) {
        for (int i = 1; i <= n; ++i) {
            std::vector<Lit> row;
            for (int c = 1; c <= n; ++c) row.push_back(glit(tg[l], n, i, c));
            f.add_clause(row);
        }
        for (int i = 1; i <= n; ++i)
            for (int c1 = 1; c1 <= n; ++c1)
                for (int c2 = c1 + 1; c2 <= n; ++c2)
                    f.add_clause({~glit(tg[l], n, i, c1), ~glit(tg[l], n, i, c2)});
        for (int c = 1; c <= n; ++c)
            for (int i1 = 1; i1 <= n; ++i1)
                for (int i2 = i1 + 1; i2 <= n; ++i2)
                    f.add_clause({~glit(tg[l], n, i1, c), ~glit(tg[l], n, i2, c)});
    }
    if (cfg.fix_first)
        for (int i = 1; i <= n; ++i) f.add_clause({glit(tg[0], n, i, i)});
    // derived grids: x_{i,r} <-> (row r <= row i) under the member's column view.
    // Default view reorders columns by gamma^{-1} (rows of T^{gamma∘theta});
    // the literal variant permutes row indices instead (as printed).
    std::vector<Lit> a(n + 1), b(n + 1);
    for (int l = 0; l < offsets; ++l)
        for (int m = 0; m < (int)q; ++m) {
            const auto& xv = xg[(size_t)l * q + m];
            for (int i = 1; i <= n; ++i) f.add_clause({~glit(xv, n, i, i)});
            for (int i = 1; i <= n; ++i)
                for (int r = 1; r <= n; ++r) {
                    if (i == r) continue;
                    Lit x = glit(xv, n, i, r);
                    int row_r = cfg.paper_literal_right ? gamma[m](r) : r;
                    int row_i = cfg.paper_literal_right ? gamma[m](i) : i;
                    for (int j = 1; j <= n; ++j) {
                        int col = cfg.paper_literal_right ? j : gamma_inv[m](j);
                        a[j] = glit(tg[l], n, row_r, col);
                        b[j] = glit(tg[l], n, row_i, col);
                    }
                    a[0] = x;
                    b[0] = Lit::constant(true);
                    lex_leq(f, a, b);
                    a[0] = Lit::constant(false);
                    b[0] = x;
                    for (int j = 1; j <= n; ++j) {
                        a[j] = ~a[j];
                        b[j] = ~b[j];
                    }
                    lex_leq(f, a, b);
                }
        }
    emit_cardinality(f, cfg, [&](int t, int i, int j) { return glit(xg[t], n, i, j); });
    // chain over the gamma_1 = id view of consecutive offsets
    if (H > 0)
        for (int l = 0; l + 1 < offsets; ++l)
            lex_leq(f, z_cat_tuple(xg[(size_t)(l + 1) * q], n, H),
                    z_cat_tuple(xg[(size_t)l * q], n, H));
    return res;
}

BuildResult build(const ModelConfig& cfg, const Subgroup* g) {
    switch (cfg.mode) {
        case Mode::pure: return build_pure(cfg);
        case Mode::left:
            if (!g) throw std::invalid_argument("left mode needs a group");
            return build_left(cfg, *g);
        case Mode::right:
            if (!g) throw std::invalid_argument("right mode needs a group");
            return build_right(cfg, *g);
    }
    throw std::logic_error("build");
}

// ---- map sidecar

void write_map(std::ostream& out, const DecodeMap& m) {
    out << "map-format 1\n";
    out << "mode " << mode_name(m.mode) << '\n';
    out << "n " << m.n << '\n';
    out << "k " << m.k << '\n';
    out << "d " << m.d << '\n';
    out << "q " << m.q << '\n';
    out << "H " << m.H << '\n';
    out << "fix_first " << (m.fix_first ? 1 : 0) << '\n';
    out << "rankwise " << (m.rankwise ? 1 : 0) << '\n';
    out << "literal_right " << (m.literal_right ? 1 : 0) << '\n';
    if (!m.group_generators.empty()) out << "group " << m.group_generators << '\n';
    for (size_t g = 0; g < m.x_vars.size(); ++g)
        for (int i = 1; i <= m.n; ++i)
            for (int j = 1; j <= m.n; ++j)
                out << "x " << g + 1 << ' ' << i << ' ' << j << ' '
                    << m.x_vars[g][(size_t)(i - 1) * m.n + (j - 1)] << '\n';
    for (size_t g = 0; g < m.t_vars.size(); ++g)
        for (int i = 1; i <= m.n; ++i)
            for (int c = 1; c <= m.n; ++c)
                out << "t " << g + 1 << ' ' << i << ' ' << c << ' '
                    << m.t_vars[g][(size_t)(i - 1) * m.n + (c - 1)] << '\n';
}

DecodeMap read_map(std::istream& in) {
    DecodeMap m;
    std::string line;
    bool have_format = false;
    auto grids = [&](std::vector<std::vector<int>>& vs, int idx, int i, int j, int var) {
        if (idx < 1 || i < 1 || i > m.n || j < 1 || j > m.n || var < 1)
            throw std::invalid_argument("map: entry out of range");
        if ((int)vs.size() < idx) vs.resize(idx, std::vector<int>((size_t)m.n * m.n, 0));
        vs[idx - 1][(size_t)(i - 1) * m.n + (j - 1)] = var;
    };
    while (std::getline(in, line)) {
        size_t p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos || line[p] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "map-format") {
            int v;
            ls >> v;
            if (v != 1) throw std::invalid_argument("map: unsupported format version");
            have_format = true;
        } else if (key == "mode") {
            std::string s;
            ls >> s;
            m.mode = mode_from_name(s);
        } else if (key == "n") ls >> m.n;
        else if (key == "k") ls >> m.k;
        else if (key == "d") ls >> m.d;
        else if (key == "q") ls >> m.q;
        else if (key == "H") ls >> m.H;
        else if (key == "fix_first") { int v; ls >> v; m.fix_first = v != 0; }
        else if (key == "rankwise") { int v; ls >> v; m.rankwise = v != 0; }
        else if (key == "literal_right") { int v; ls >> v; m.literal_right = v != 0; }
        else if (key == "group") {
            std::string rest;
            std::getline(ls, rest);
            size_t s = rest.find_first_not_of(' ');
            m.group_generators = s == std::string::npos ? "" : rest.substr(s);
        } else if (key == "x" || key == "t") {
            int idx, i, j, var;
            if (!(ls >> idx >> i >> j >> var)) throw std::invalid_argument("map: bad entry line");
            grids(key == "x" ? m.x_vars : m.t_vars, idx, i, j, var);
        } else {
            throw std::invalid_argument("map: unknown line '" + key + "'");
        }
    }
    if (!have_format) throw std::invalid_argument("map: missing map-format header");
    for (const auto& g : m.x_vars)
        for (int v : g)
            if (v < 1) throw std::invalid_argument("map: incomplete x grid");
    for (const auto& g : m.t_vars)
        for (int v : g)
            if (v < 1) throw std::invalid_argument("map: incomplete t grid");
    return m;
}

void write_map_file(const std::string& path, const DecodeMap& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write map file: " + path);
    write_map(out, m);
}

DecodeMap read_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open map file: " + path);
    return read_map(in);
}

} // namespace minwise
