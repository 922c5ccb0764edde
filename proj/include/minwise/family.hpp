#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "minwise/perm.hpp"

namespace minwise {

// Ordered multiset of permutations of {1..n}; duplicates allowed.
struct Family {
    int n = 0;
    std::vector<Perm> members;

    int d() const { return (int)members.size(); }
};

// Text format: first non-comment line "n d", then d lines of n integers
// (one-line notation, 1-based). '#' starts a comment line. ASCII, LF.
Family read_family(std::istream& in);
void write_family(std::ostream& out, const Family& f);
Family read_family_file(const std::string& path);
void write_family_file(const std::string& path, const Family& f);

struct Witness {
    std::string kind;        // "divisibility" | "pattern" | "subperm"
    std::vector<int> tuple;  // offending pattern/subperm; empty for divisibility
    long long observed = 0;
    long long required = 0;
    std::string str() const;
};

struct VerificationReport {
    std::string property; // "minwise" | "rankwise"
    int k = 0;
    bool holds = false;
    std::optional<Witness> witness; // first failure in enumeration order
};

// Checks: for every j in 1..k and every semiordered pattern (s_1..s_j),
// exactly d/j members put s_1 strictly below all of s_2..s_j.
// d not divisible by lcm(1..k) short-circuits to a divisibility witness.
VerificationReport verify_minwise(const Family& f, int k);

// Checks: every injective k-tuple is realized in increasing order by exactly
// d/k! members. Requires d divisible by k!.
VerificationReport verify_rankwise(const Family& f, int k);

// Exact rational, normalized, den > 0.
struct Rational {
    long long num = 0;
    long long den = 1;
    bool operator==(const Rational&) const = default;
    std::string str() const;
};

// Fraction of members with min p(A) == min p(B); A, B nonempty subsets of {1..n}.
Rational min_collision_prob(const Family& f, const std::vector<int>& A,
                            const std::vector<int>& B);

// (gamma∘theta : gamma in {id, reversal}, theta in f); the first d members are f
// itself. Intended for families verified at odd k >= 3; only the oddness of k
// is checked here, the caller vouches for the verification.
Family double_family(const Family& f, int k);

// Keep positions 1..n_tilde, rank-compress the values. Preserves the property
// for every k <= n_tilde.
Family restrict_family(const Family& f, int n_tilde);

// Right-compose every member with members[0]^{-1}, then sort so the z_cat
// strings are non-increasing. First member of the result is the identity.
// Idempotent; the verified property is invariant under this transformation.
Family normalize(const Family& f);

// ---- bounds (exact integer arithmetic, overflow throws std::overflow_error)

long long lcm_upto(int k);     // lcm(1..k)
long long subfactorial(int m); // !m, derangement count
long long binomial(int n, int r);

// max{n, lcm(1..k)}: no smaller family can satisfy the k-restricted property.
long long lower_bound_minwise(int n, int k);

// ceil(n^k * e^k * lcm(1..k-1)); equals n^((1+1/ln n)k) * lcm(1..k-1) since
// n^(1/ln n) = e. Evaluated in long double, rounded up (conservative as an
// upper bound). Informational only. n = 1 returns 1.
long long upper_bound_minwise(int n, int k);

// Rank-k independence lower bound:
//   sum_{i=0}^{floor(k/2)} !i * binom(n,i)   (+ !ceil(k/2) * binom(n-1, floor(k/2)) for odd k)
long long bargachev_bound(int n, int k);

} // namespace minwise
