#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "minwise/family.hpp"

using namespace minwise;

namespace {

// six-member family over {1..4} that is 3-restricted minwise independent
Family sample_family() {
    Family f;
    f.n = 4;
    for (auto img : {std::vector<int>{2, 3, 1, 4}, {1, 4, 2, 3}, {4, 1, 2, 3},
                     {2, 3, 4, 1}, {2, 1, 4, 3}, {4, 3, 2, 1}})
        f.members.push_back(Perm(img));
    return f;
}

} // namespace

TEST_CASE("sample family is 3-minwise but not 4-minwise") {
    Family f = sample_family();
    CHECK(verify_minwise(f, 3).holds);
    CHECK(verify_minwise(f, 2).holds);
    CHECK(verify_minwise(f, 1).holds);
    VerificationReport r4 = verify_minwise(f, 4);
    CHECK_FALSE(r4.holds);
    REQUIRE(r4.witness.has_value());
    // d=6 not divisible by lcm(1..4)=12
    CHECK(r4.witness->kind == "divisibility");
}

TEST_CASE("3-minwise equals 3-rankwise on the sample family") {
    Family f = sample_family();
    CHECK(verify_rankwise(f, 3).holds);
}

TEST_CASE("verifier reports a counting witness") {
    Family f = sample_family();
    f.members[5] = Perm({1, 2, 3, 4}); // break it, keep d
    VerificationReport r = verify_minwise(f, 3);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->kind == "pattern");
    CHECK(r.witness->observed != r.witness->required);
    CHECK_FALSE(r.witness->str().empty());
}

TEST_CASE("identity-only family fails fast") {
    Family f;
    f.n = 4;
    for (int i = 0; i < 6; ++i) f.members.push_back(Perm::identity(4));
    CHECK_FALSE(verify_minwise(f, 3).holds);
}

TEST_CASE("collision probability is exact on the sample family") {
    Family f = sample_family();
    Rational r = min_collision_prob(f, {1, 2}, {2, 3});
    CHECK(r.num == 1);
    CHECK(r.den == 3);
    CHECK(r.str() == "1/3");
    Rational one = min_collision_prob(f, {2, 3}, {2, 3});
    CHECK(one.num == 1);
    CHECK(one.den == 1);
    Rational zero = min_collision_prob(f, {1}, {2});
    CHECK(zero.num == 0);
}

TEST_CASE("family files round-trip and reject malformed input") {
    Family f = sample_family();
    std::ostringstream out;
    write_family(out, f);
    std::istringstream in(out.str());
    Family g = read_family(in);
    CHECK(g.n == f.n);
    CHECK(g.members == f.members);

    std::istringstream short_in("4 2\n1 2 3 4\n");
    CHECK_THROWS_AS(read_family(short_in), std::invalid_argument);
    std::istringstream bad_perm("4 1\n1 2 3 3\n");
    CHECK_THROWS_AS(read_family(bad_perm), std::invalid_argument);
    std::istringstream comments("# header\n4 1\n# member\n2 1 3 4\n");
    CHECK(read_family(comments).members[0] == Perm({2, 1, 3, 4}));
}

TEST_CASE("doubling produces a (k+1)-minwise family") {
    Family f = sample_family();
    Family g = double_family(f, 3);
    REQUIRE(g.members.size() == 12);
    CHECK(g.n == 4);
    // first half is the original, second half is reversal-composed
    for (size_t i = 0; i < 6; ++i) {
        CHECK(g.members[i] == f.members[i]);
        CHECK(g.members[6 + i] == Perm::reversal(4).compose(f.members[i]));
    }
    CHECK(verify_minwise(g, 4).holds);
    CHECK_THROWS_AS(double_family(f, 4), std::invalid_argument); // even k
}

TEST_CASE("restriction drops symbols and re-verifies") {
    CHECK(restrict_family([] {
              Family f;
              f.n = 4;
              f.members.push_back(Perm({4, 1, 3, 2}));
              return f;
          }(), 3)
              .members[0] == Perm({3, 1, 2}));
    Family f = sample_family();
    Family g = restrict_family(f, 3);
    CHECK(g.n == 3);
    CHECK(g.members.size() == 6);
    CHECK(verify_minwise(g, 3).holds);
    CHECK_THROWS_AS(restrict_family(f, 0), std::invalid_argument);
    CHECK_THROWS_AS(restrict_family(f, 5), std::invalid_argument);
}

TEST_CASE("doubling then restricting keeps 4-minwise at n=3") {
    Family g = restrict_family(double_family(sample_family(), 3), 3);
    CHECK(verify_minwise(g, 3).holds);
    // k=4 patterns need 4 symbols; at n=3 only j<=3 constraints remain
    CHECK(verify_minwise(g, 3).k == 3);
}

TEST_CASE("normalize pins the first member to the identity") {
    Family f = sample_family();
    Family g = normalize(f);
    CHECK(g.members[0] == Perm::identity(4));
    CHECK(verify_minwise(g, 3).holds); // right-composition preserves the property
    // z_cat keys are non-increasing
    for (size_t i = 0; i + 1 < g.members.size(); ++i)
        CHECK(z_cat(incidence(g.members[i])) >= z_cat(incidence(g.members[i + 1])));
}

TEST_CASE("arithmetic helpers") {
    CHECK(lcm_upto(1) == 1);
    CHECK(lcm_upto(3) == 6);
    CHECK(lcm_upto(4) == 12);
    CHECK(lcm_upto(5) == 60);
    CHECK(lcm_upto(6) == 60);
    CHECK(subfactorial(0) == 1);
    CHECK(subfactorial(1) == 0);
    CHECK(subfactorial(4) == 9);
    CHECK(subfactorial(8) == 14833);
    CHECK(binomial(9, 4) == 126);
    CHECK(binomial(5, 0) == 1);
    CHECK_THROWS_AS(lcm_upto(200), std::overflow_error);
}

TEST_CASE("size bounds") {
    CHECK(lower_bound_minwise(4, 4) == 12);
    CHECK(lower_bound_minwise(20, 3) == 20);
    CHECK(lower_bound_minwise(5, 5) == 60);
    CHECK_THROWS_AS(lower_bound_minwise(4, 5), std::invalid_argument);
    // ceil(n^k e^k lcm(1..k-1))
    CHECK(upper_bound_minwise(4, 4) == 83863);
    CHECK(upper_bound_minwise(1, 1) == 1);
    CHECK_THROWS_AS(upper_bound_minwise(50, 20), std::overflow_error);
    CHECK(bargachev_bound(4, 4) == 7);
    CHECK(bargachev_bound(4, 3) == 4);
}
