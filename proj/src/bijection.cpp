#include "minwise/bijection.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace minwise {

std::vector<int> waste_indices(const Perm& p) {
    int n = p.n();
    std::vector<int> out;
    int prefmin = n + 1;
    for (int j = 1; j <= n; ++j) {
        prefmin = std::min(prefmin, p(j));
        if (j < n) {
            if (p(j) == prefmin && p(j) > p(j + 1)) out.push_back(j);
        } else {
            if (p(n) == 1) out.push_back(n);
        }
    }
    return out;
}

Perm phi(const Perm& p) { return linearize(cycle_form(p)); }

Perm phi_inverse(const Perm& p) {
    int n = p.n();
    CycleForm cf;
    cf.n = n;
    // block boundaries at prefix-minimum positions; position 1 always is one
    int prefmin = n + 1;
    std::vector<int> starts;
    for (int j = 1; j <= n; ++j)
        if (p(j) < prefmin) {
            prefmin = p(j);
            starts.push_back(j);
        }
    for (size_t b = 0; b < starts.size(); ++b) {
        int lo = starts[b];
        int hi = (b + 1 < starts.size()) ? starts[b + 1] - 1 : n;
        std::vector<int> cyc;
        for (int j = lo; j <= hi; ++j) cyc.push_back(p(j));
        cf.cycles.push_back(std::move(cyc));
    }
    // read blocks as cycles: entry x maps to its cyclic successor
    std::vector<int> img(n, 0);
    for (const auto& cyc : cf.cycles)
        for (size_t i = 0; i < cyc.size(); ++i)
            img[cyc[i] - 1] = cyc[(i + 1) % cyc.size()];
    return Perm(std::move(img));
}

static int count_fixed(const Perm& p) {
    int c = 0;
    for (int i = 1; i <= p.n(); ++i)
        if (p(i) == i) ++c;
    return c;
}

ClassCounts count_by_class(int n) {
    if (n < 1 || n > 9) throw std::invalid_argument("count_by_class: supported for 1 <= n <= 9");
    ClassCounts cc;
    cc.n = n;
    cc.fixed_points.assign(n + 1, 0);
    cc.waste.assign(n + 1, 0);
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    do {
        Perm p{std::vector<int>(img)};
        cc.fixed_points[count_fixed(p)]++;
        cc.waste[waste_indices(p).size()]++;
    } while (std::next_permutation(img.begin(), img.end()));
    return cc;
}

} // namespace minwise
