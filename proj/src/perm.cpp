#include "minwise/perm.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace minwise {

Perm::Perm(std::vector<int> image) : img_(std::move(image)) {
    int n = (int)img_.size();
    std::vector<char> seen(n + 1, 0);
    for (int v : img_) {
        if (v < 1 || v > n || seen[v])
            throw std::invalid_argument("not a permutation of {1..n}: " + str());
        seen[v] = 1;
    }
}

Perm Perm::identity(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = i + 1;
    return Perm(std::move(img));
}

Perm Perm::reversal(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = n - i;
    return Perm(std::move(img));
}

Perm Perm::compose(const Perm& other) const {
    if (n() != other.n())
        throw std::invalid_argument("compose: size mismatch");
    std::vector<int> img(n());
    for (int i = 1; i <= n(); ++i) img[i - 1] = img_[other(i) - 1];
    return Perm(std::move(img));
}

Perm Perm::inverse() const {
    std::vector<int> img(n());
    for (int i = 1; i <= n(); ++i) img[img_[i - 1] - 1] = i;
    return Perm(std::move(img));
}

std::string Perm::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < img_.size(); ++i) {
        if (i) os << ' ';
        os << img_[i];
    }
    return os.str();
}

IncidenceMatrix incidence(const Perm& p) {
    int n = p.n();
    IncidenceMatrix m;
    m.n = n;
    m.bits.assign((size_t)n * n, 0);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (p(i) < p(j)) m.set(i, j, true);
    return m;
}

Perm from_incidence(const IncidenceMatrix& m) {
    int n = m.n;
    if ((int)m.bits.size() != n * n)
        throw std::invalid_argument("incidence matrix: bad storage size");
    for (int i = 1; i <= n; ++i)
        if (m.at(i, i)) throw std::invalid_argument("incidence matrix: not irreflexive");
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            if (m.at(i, j) && m.at(j, i))
                throw std::invalid_argument("incidence matrix: not asymmetric");
            if (!m.at(i, j) && !m.at(j, i))
                throw std::invalid_argument("incidence matrix: not total");
        }
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int h = 1; h <= n; ++h)
                if (m.at(i, j) && m.at(j, h) && !m.at(i, h))
                    throw std::invalid_argument("incidence matrix: not transitive");
    std::vector<int> img(n);
    for (int j = 1; j <= n; ++j) {
        int s = 1;
        for (int i = 1; i <= n; ++i) s += m.at(i, j) ? 1 : 0;
        img[j - 1] = s;
    }
    return Perm(std::move(img)); // Perm ctor rejects non-bijective column sums
}

PermMatrix perm_matrix(const Perm& p) {
    int n = p.n();
    PermMatrix t;
    t.n = n;
    t.bits.assign((size_t)n * n, 0);
    for (int i = 1; i <= n; ++i) t.set(i, p(i), true);
    return t;
}

Perm from_perm_matrix(const PermMatrix& t) {
    int n = t.n;
    if ((int)t.bits.size() != n * n)
        throw std::invalid_argument("permutation matrix: bad storage size");
    std::vector<int> img(n, 0);
    for (int i = 1; i <= n; ++i) {
        int hits = 0;
        for (int c = 1; c <= n; ++c)
            if (t.at(i, c)) {
                ++hits;
                img[i - 1] = c;
            }
        if (hits != 1)
            throw std::invalid_argument("permutation matrix: row without exactly one 1");
    }
    return Perm(std::move(img)); // column condition follows from bijectivity
}

std::vector<std::pair<int, int>> z_cat_positions(int n) {
    std::vector<std::pair<int, int>> pos;
    pos.reserve((size_t)n * (n - 1) / 2);
    for (int j = 2; j <= n; ++j)
        for (int i = 0; i <= n - j; ++i)
            pos.emplace_back(i + 1, i + j);
    return pos;
}

std::string z_cat(const IncidenceMatrix& m) {
    std::string s;
    s.reserve((size_t)m.n * (m.n - 1) / 2);
    for (auto [i, j] : z_cat_positions(m.n)) s.push_back(m.at(i, j) ? '1' : '0');
    return s;
}

CycleForm cycle_form(const Perm& p) {
    int n = p.n();
    CycleForm cf;
    cf.n = n;
    std::vector<char> seen(n + 1, 0);
    for (int start = 1; start <= n; ++start) {
        if (seen[start]) continue;
        std::vector<int> cyc;
        int x = start;
        do {
            seen[x] = 1;
            cyc.push_back(x);
            x = p(x);
        } while (x != start);
        cf.cycles.push_back(std::move(cyc)); // smallest element first: start is minimal unseen
    }
    // leaders strictly decreasing left to right
    std::sort(cf.cycles.begin(), cf.cycles.end(),
              [](const auto& a, const auto& b) { return a[0] > b[0]; });
    return cf;
}

Perm linearize(const CycleForm& c) {
    std::vector<int> img;
    img.reserve(c.n);
    for (const auto& cyc : c.cycles)
        for (int v : cyc) img.push_back(v);
    if ((int)img.size() != c.n)
        throw std::invalid_argument("cycle form: cycles do not partition {1..n}");
    return Perm(std::move(img)); // ctor rejects repeated/missing symbols
}

std::string CycleForm::str() const {
    std::ostringstream os;
    bool wide = n > 9;
    for (const auto& cyc : cycles) {
        os << '(';
        for (size_t i = 0; i < cyc.size(); ++i) {
            if (i && wide) os << ' ';
            os << cyc[i];
        }
        os << ')';
    }
    return os.str();
}

} // namespace minwise
