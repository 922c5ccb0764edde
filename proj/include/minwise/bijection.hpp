#pragma once

#include <vector>

#include "minwise/perm.hpp"

namespace minwise {

// j < n is a waste index of p iff p(j) = min p(1..j) and p(j) > p(j+1);
// j = n is one iff p(n) = 1. Returned ascending.
std::vector<int> waste_indices(const Perm& p);

// Canonical cycle form (min-first cycles, strictly decreasing leaders) read
// off as one-line notation. Maps permutations with exactly k fixed points
// bijectively onto permutations with exactly k waste indices.
Perm phi(const Perm& p);

// Inverse: cut p before every prefix-minimum position, read blocks as cycles.
Perm phi_inverse(const Perm& p);

struct ClassCounts {
    int n = 0;
    std::vector<long long> fixed_points;  // [k] = #perms with exactly k fixed points
    std::vector<long long> waste;         // [k] = #perms with exactly k waste indices
};

// Exhaustive sweep of S_n; supported for n <= 9.
ClassCounts count_by_class(int n);

} // namespace minwise
