#include "doctest.h"

#include <algorithm>

#include "minwise/bijection.hpp"
#include "minwise/family.hpp"

using namespace minwise;

namespace {

int fixed_points(const Perm& p) {
    int c = 0;
    for (int i = 1; i <= p.n(); ++i) c += p(i) == i;
    return c;
}

} // namespace

TEST_CASE("waste indices of the worked example") {
    Perm rho({1, 5, 3, 4, 6, 2, 8, 7, 9});
    CHECK(waste_indices(rho).empty());
    Perm img = phi(rho);
    CHECK(img == Perm({9, 7, 8, 4, 3, 2, 5, 6, 1}));
    CHECK(waste_indices(img) == std::vector<int>{1, 4, 5, 9});
    CHECK(phi_inverse(img) == rho);
}

TEST_CASE("final position holding value 1 is a waste index") {
    CHECK(waste_indices(Perm({2, 3, 1})) == std::vector<int>{3});
    // prefix minimum followed by a descent
    CHECK(waste_indices(Perm({2, 1, 3})) == std::vector<int>{1});
    // image of the identity: every index is a waste index
    CHECK(waste_indices(Perm({3, 2, 1})) == std::vector<int>{1, 2, 3});
    CHECK(phi(Perm::identity(3)) == Perm({3, 2, 1}));
}

TEST_CASE("phi maps j fixed points to j waste indices, bijectively, n <= 7") {
    for (int n = 1; n <= 7; ++n) {
        std::vector<int> img(n);
        for (int i = 0; i < n; ++i) img[i] = i + 1;
        std::vector<Perm> images;
        do {
            Perm p(img);
            Perm q = phi(p);
            CHECK(fixed_points(p) == (int)waste_indices(q).size());
            CHECK(phi_inverse(q) == p);
            images.push_back(q);
        } while (std::next_permutation(img.begin(), img.end()));
        std::sort(images.begin(), images.end());
        CHECK(std::adjacent_find(images.begin(), images.end()) == images.end());
    }
}

TEST_CASE("class counts agree with derangement numbers") {
    for (int n = 1; n <= 8; ++n) {
        ClassCounts cc = count_by_class(n);
        REQUIRE((int)cc.fixed_points.size() == n + 1);
        CHECK(cc.fixed_points == cc.waste);
        CHECK(cc.waste[0] == subfactorial(n));
        long long total = 0;
        for (long long v : cc.fixed_points) total += v;
        long long nf = 1;
        for (int i = 2; i <= n; ++i) nf *= i;
        CHECK(total == nf);
        // exactly one permutation with n fixed points, none with n-1
        CHECK(cc.fixed_points[n] == 1);
        if (n >= 2) CHECK(cc.fixed_points[n - 1] == 0);
    }
}

TEST_CASE("count_by_class rejects out-of-range n") {
    CHECK_THROWS_AS(count_by_class(0), std::invalid_argument);
    CHECK_THROWS_AS(count_by_class(10), std::invalid_argument);
}
