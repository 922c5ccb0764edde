#pragma once

#include <compare>
#include <string>
#include <vector>

namespace minwise {

// Permutation of {1..n} in one-line notation. image()[i-1] = p(i).
class Perm {
public:
    Perm() = default;
    explicit Perm(std::vector<int> image);

    static Perm identity(int n);
    static Perm reversal(int n); // i -> n+1-i

    int n() const { return (int)img_.size(); }
    int operator()(int i) const { return img_[i - 1]; } // 1-based
    const std::vector<int>& image() const { return img_; }

    Perm compose(const Perm& other) const; // (this∘other)(i) = this(other(i))
    Perm inverse() const;

    bool operator==(const Perm&) const = default;
    auto operator<=>(const Perm&) const = default; // lex order on images

    std::string str() const; // "2 1 3 4"

private:
    std::vector<int> img_;
};

// Strict-order incidence matrix: bits(i,j) = (p(i) < p(j)).
// Invariants of a valid matrix: irreflexive, asymmetric, total, transitive.
struct IncidenceMatrix {
    int n = 0;
    std::vector<uint8_t> bits; // row-major n*n

    bool at(int i, int j) const { return bits[(i - 1) * n + (j - 1)] != 0; } // 1-based
    void set(int i, int j, bool v) { bits[(i - 1) * n + (j - 1)] = v ? 1 : 0; }
};

IncidenceMatrix incidence(const Perm& p);
// Recovers p(j) = 1 + sum_i bits(i,j); throws std::invalid_argument if the
// matrix violates the order invariants or the column sums are no permutation.
Perm from_incidence(const IncidenceMatrix& m);

// Permutation matrix: bits(i,c) = (p(i) == c).
struct PermMatrix {
    int n = 0;
    std::vector<uint8_t> bits;

    bool at(int i, int c) const { return bits[(i - 1) * n + (c - 1)] != 0; }
    void set(int i, int c, bool v) { bits[(i - 1) * n + (c - 1)] = v ? 1 : 0; }
};

PermMatrix perm_matrix(const Perm& p);
Perm from_perm_matrix(const PermMatrix& t); // throws if not bi-stochastic 0/1

// Above-diagonal side-diagonal concatenation, adjacent diagonal first:
// entries (i+1, i+j) for j = 2..n, i = 0..n-j; length n(n-1)/2.
// Returned as '0'/'1' string so lexicographic compares are plain string compares.
std::string z_cat(const IncidenceMatrix& m);
// Same traversal as index pairs (i, j), 1-based; shared by the SAT encoder.
std::vector<std::pair<int, int>> z_cat_positions(int n);

// Cycle form; canonical() puts the smallest element first in every cycle and
// orders cycles by strictly decreasing first element. Fixed points are kept.
struct CycleForm {
    int n = 0;
    std::vector<std::vector<int>> cycles;

    std::string str() const; // "(9)(78)(4)(3)(256)(1)" style with spaces for n > 9
};

CycleForm cycle_form(const Perm& p);
// Permutation sending i to the i-th entry of the concatenated cycles.
// Throws if the cycles are not a partition of {1..n}.
Perm linearize(const CycleForm& c);

} // namespace minwise
