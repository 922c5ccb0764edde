#pragma once

#include <cstdint>
#include <vector>

namespace minwise {

// Semiordered pattern (s_1, s_2, ..., s_j) over {1..n}: s_2 < s_3 < ... < s_j,
// s_1 distinct from the rest. s_1 is the distinguished minimum candidate.
struct SemiPattern {
    std::vector<int> s; // s[0] = s_1
};

// All SOP(n, j), ordered by the sorted tail (s_2..s_j), then by s_1.
// Count: binom(n, j) * j.
std::vector<SemiPattern> enumerate_sop(int n, int j);

// Injective tuples (v_1..v_k) over {1..n} in lexicographic order; n!/(n-k)! many.
std::vector<std::vector<int>> enumerate_subperms(int n, int k);

} // namespace minwise
