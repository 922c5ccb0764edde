#include "minwise/family.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "minwise/patterns.hpp"

namespace minwise {

Family read_family(std::istream& in) {
    std::string line;
    auto next_data_line = [&](std::string& out) -> bool {
        while (std::getline(in, line)) {
            size_t p = line.find_first_not_of(" \t\r");
            if (p == std::string::npos || line[p] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };
    std::string data;
    if (!next_data_line(data)) throw std::invalid_argument("family: missing header line");
    std::istringstream hdr(data);
    int n = 0, d = 0;
    if (!(hdr >> n >> d) || n < 1 || d < 0)
        throw std::invalid_argument("family: header must be 'n d'");
    Family f;
    f.n = n;
    f.members.reserve(d);
    for (int m = 0; m < d; ++m) {
        if (!next_data_line(data))
            throw std::invalid_argument("family: expected " + std::to_string(d) + " members");
        std::istringstream row(data);
        std::vector<int> img(n);
        for (int i = 0; i < n; ++i)
            if (!(row >> img[i]))
                throw std::invalid_argument("family: member line with fewer than n entries");
        int extra;
        if (row >> extra) throw std::invalid_argument("family: member line with more than n entries");
        f.members.emplace_back(std::move(img));
    }
    return f;
}

void write_family(std::ostream& out, const Family& f) {
    out << f.n << ' ' << f.d() << '\n';
    for (const Perm& p : f.members) out << p.str() << '\n';
}

Family read_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open family file: " + path);
    return read_family(in);
}

void write_family_file(const std::string& path, const Family& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write family file: " + path);
    write_family(out, f);
}

std::string Witness::str() const {
    std::ostringstream os;
    os << kind;
    if (!tuple.empty()) {
        os << " (";
        for (size_t i = 0; i < tuple.size(); ++i) os << (i ? " " : "") << tuple[i];
        os << ")";
    }
    os << ": observed " << observed << ", required " << required;
    return os.str();
}

static void check_family(const Family& f) {
    for (const Perm& p : f.members)
        if (p.n() != f.n) throw std::invalid_argument("family: member size != n");
}

VerificationReport verify_minwise(const Family& f, int k) {
    check_family(f);
    if (k < 1 || k > f.n) throw std::invalid_argument("verify_minwise: need 1 <= k <= n");
    VerificationReport rep{"minwise", k, true, std::nullopt};
    long long d = f.d();
    long long l = lcm_upto(k);
    if (d % l != 0) {
        rep.holds = false;
        rep.witness = Witness{"divisibility", {}, d, l};
        return rep;
    }
    for (int j = 1; j <= k; ++j) {
        long long want = d / j;
        for (const SemiPattern& sp : enumerate_sop(f.n, j)) {
            long long cnt = 0;
            for (const Perm& p : f.members) {
                int v = p(sp.s[0]);
                bool low = true;
                for (size_t h = 1; h < sp.s.size() && low; ++h)
                    low = v < p(sp.s[h]);
                cnt += low ? 1 : 0;
            }
            if (cnt != want) {
                rep.holds = false;
                rep.witness = Witness{"pattern", sp.s, cnt, want};
                return rep;
            }
        }
    }
    return rep;
}

VerificationReport verify_rankwise(const Family& f, int k) {
    check_family(f);
    if (k < 1 || k > f.n) throw std::invalid_argument("verify_rankwise: need 1 <= k <= n");
    VerificationReport rep{"rankwise", k, true, std::nullopt};
    long long d = f.d();
    long long fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    if (d % fact != 0) {
        rep.holds = false;
        rep.witness = Witness{"divisibility", {}, d, fact};
        return rep;
    }
    long long want = d / fact;
    for (const auto& sig : enumerate_subperms(f.n, k)) {
        long long cnt = 0;
        for (const Perm& p : f.members) {
            bool inc = true;
            for (int h = 1; h < k && inc; ++h) inc = p(sig[h - 1]) < p(sig[h]);
            cnt += inc ? 1 : 0;
        }
        if (cnt != want) {
            rep.holds = false;
            rep.witness = Witness{"subperm", sig, cnt, want};
            return rep;
        }
    }
    return rep;
}

std::string Rational::str() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational min_collision_prob(const Family& f, const std::vector<int>& A,
                            const std::vector<int>& B) {
    check_family(f);
    if (A.empty() || B.empty())
        throw std::invalid_argument("min_collision_prob: empty set");
    for (int v : A)
        if (v < 1 || v > f.n) throw std::invalid_argument("min_collision_prob: A out of range");
    for (int v : B)
        if (v < 1 || v > f.n) throw std::invalid_argument("min_collision_prob: B out of range");
    if (f.d() == 0) throw std::invalid_argument("min_collision_prob: empty family");
    long long hits = 0;
    for (const Perm& p : f.members) {
        int ma = f.n + 1, mb = f.n + 1;
        for (int v : A) ma = std::min(ma, p(v));
        for (int v : B) mb = std::min(mb, p(v));
        hits += (ma == mb) ? 1 : 0;
    }
    long long g = std::gcd(hits, (long long)f.d());
    if (g == 0) g = 1;
    return Rational{hits / g, f.d() / g};
}

Family double_family(const Family& f, int k) {
    check_family(f);
    if (k < 3 || k % 2 == 0)
        throw std::invalid_argument("double_family: k must be odd and >= 3");
    Family out;
    out.n = f.n;
    out.members.reserve(2 * f.members.size());
    out.members = f.members; // gamma = id block
    Perm rev = Perm::reversal(f.n);
    for (const Perm& p : f.members) out.members.push_back(rev.compose(p));
    return out;
}

Family restrict_family(const Family& f, int n_tilde) {
    check_family(f);
    if (n_tilde < 1 || n_tilde > f.n)
        throw std::invalid_argument("restrict_family: need 1 <= n_tilde <= n");
    Family out;
    out.n = n_tilde;
    out.members.reserve(f.members.size());
    for (const Perm& p : f.members) {
        // rank-compress p(1..n_tilde) within itself
        std::vector<int> img(n_tilde);
        for (int i = 1; i <= n_tilde; ++i) {
            int r = 1;
            for (int h = 1; h <= n_tilde; ++h)
                if (p(h) < p(i)) ++r;
            img[i - 1] = r;
        }
        out.members.emplace_back(std::move(img));
    }
    return out;
}

Family normalize(const Family& f) {
    check_family(f);
    if (f.d() == 0) throw std::invalid_argument("normalize: empty family");
    Perm inv = f.members[0].inverse();
    std::vector<std::pair<std::string, Perm>> keyed;
    keyed.reserve(f.members.size());
    for (const Perm& p : f.members) {
        Perm q = p.compose(inv);
        keyed.emplace_back(z_cat(incidence(q)), std::move(q));
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    Family out;
    out.n = f.n;
    for (auto& [key, q] : keyed) out.members.push_back(std::move(q));
    return out;
}

// ---- bounds

static long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

static long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

long long lcm_upto(int k) {
    if (k < 1) throw std::invalid_argument("lcm_upto: need k >= 1");
    long long l = 1;
    for (int i = 2; i <= k; ++i) l = checked_mul(l / std::gcd(l, (long long)i), i);
    return l;
}

long long subfactorial(int m) {
    if (m < 0) throw std::invalid_argument("subfactorial: need m >= 0");
    // !m = m * !(m-1) + (-1)^m
    long long v = 1;
    for (int i = 1; i <= m; ++i)
        v = checked_add(checked_mul(v, i), (i % 2 == 0) ? 1 : -1);
    return v;
}

long long binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    long long v = 1;
    for (int i = 1; i <= r; ++i) v = checked_mul(v, n - r + i) / i;
    return v;
}

long long lower_bound_minwise(int n, int k) {
    if (n < 1 || k < 1 || k > n)
        throw std::invalid_argument("lower_bound_minwise: need 1 <= k <= n");
    return std::max((long long)n, lcm_upto(k));
}

long long upper_bound_minwise(int n, int k) {
    if (n < 1 || k < 1 || k > n)
        throw std::invalid_argument("upper_bound_minwise: need 1 <= k <= n");
    if (n == 1) return 1;
    long double v = powl((long double)n, k) * expl((long double)k) *
                    (long double)lcm_upto(k - 1);
    if (!(v < 9.0e18L)) throw std::overflow_error("upper_bound_minwise: overflow");
    return (long long)ceill(v);
}

long long bargachev_bound(int n, int k) {
    if (n < 1 || k < 1 || k > n)
        throw std::invalid_argument("bargachev_bound: need 1 <= k <= n");
    long long e = 0;
    for (int i = 0; i <= k / 2; ++i)
        e = checked_add(e, checked_mul(subfactorial(i), binomial(n, i)));
    if (k % 2 == 1)
        e = checked_add(e, checked_mul(subfactorial((k + 1) / 2), binomial(n - 1, k / 2)));
    return e;
}

} // namespace minwise
