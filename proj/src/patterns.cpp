#include "minwise/patterns.hpp"

#include <stdexcept>

namespace minwise {

std::vector<SemiPattern> enumerate_sop(int n, int j) {
    if (j < 1 || j > n) throw std::invalid_argument("enumerate_sop: need 1 <= j <= n");
    std::vector<SemiPattern> out;
    // tails = (j-1)-subsets of {1..n} in lexicographic order
    std::vector<int> tail(j - 1);
    for (int i = 0; i < j - 1; ++i) tail[i] = i + 1;
    while (true) {
        std::vector<char> used(n + 1, 0);
        for (int v : tail) used[v] = 1;
        for (int s1 = 1; s1 <= n; ++s1) {
            if (used[s1]) continue;
            SemiPattern p;
            p.s.reserve(j);
            p.s.push_back(s1);
            p.s.insert(p.s.end(), tail.begin(), tail.end());
            out.push_back(std::move(p));
        }
        // next subset
        int i = j - 2;
        while (i >= 0 && tail[i] == n - (j - 2 - i)) --i;
        if (i < 0) break;
        ++tail[i];
        for (int h = i + 1; h < j - 1; ++h) tail[h] = tail[h - 1] + 1;
    }
    return out;
}

std::vector<std::vector<int>> enumerate_subperms(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("enumerate_subperms: need 1 <= k <= n");
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::vector<char> used(n + 1, 0);
    // depth-first in value order = lexicographic output order
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == k) {
            out.push_back(cur);
            return;
        }
        for (int v = 1; v <= n; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            cur.push_back(v);
            self(self, depth + 1);
            cur.pop_back();
            used[v] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace minwise
