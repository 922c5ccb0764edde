#include "doctest.h"

#include <set>
#include <sstream>

#include "minwise/groups.hpp"

using namespace minwise;

TEST_CASE("closure generates the expected groups") {
    Subgroup trivial = closure(4, {});
    CHECK(trivial.order() == 1);
    CHECK(trivial.elements[0] == Perm::identity(4));

    Subgroup c3 = closure(4, {Perm({2, 3, 1, 4})});
    CHECK(c3.order() == 3);

    Subgroup s4 = closure(4, {Perm({2, 1, 3, 4}), Perm({2, 3, 4, 1})});
    CHECK(s4.order() == 24);

    // elements come sorted and start with the identity
    CHECK(std::is_sorted(s4.elements.begin(), s4.elements.end()));
    CHECK(s4.elements[0] == Perm::identity(4));
}

TEST_CASE("subgroup counts by order in S_4") {
    CHECK(subgroups_of_order(4, 1).size() == 1);
    CHECK(subgroups_of_order(4, 2).size() == 9);
    CHECK(subgroups_of_order(4, 3).size() == 4);
    CHECK(subgroups_of_order(4, 4).size() == 7);
    CHECK(subgroups_of_order(4, 6).size() == 4);
    CHECK(subgroups_of_order(4, 8).size() == 3);
    CHECK(subgroups_of_order(4, 12).size() == 1);
    CHECK(subgroups_of_order(4, 24).size() == 1);
}

TEST_CASE("subgroup counts by order in S_5") {
    CHECK(subgroups_of_order(5, 2).size() == 25);
    CHECK(subgroups_of_order(5, 3).size() == 10);
    CHECK(subgroups_of_order(5, 4).size() == 35);
    CHECK(subgroups_of_order(5, 6).size() == 30);
    CHECK(subgroups_of_order(5, 12).size() == 15);
}

TEST_CASE("conjugacy class counts match known splittings") {
    auto classes_of = [](int n, long long q) {
        auto subs = subgroups_of_order(n, q);
        return conjugacy_classes(subs, n);
    };
    CHECK(classes_of(4, 2).size() == 2);
    CHECK(classes_of(4, 3).size() == 1);
    CHECK(classes_of(4, 4).size() == 3);
    CHECK(classes_of(4, 6).size() == 1);
    CHECK(classes_of(4, 12).size() == 1);
    CHECK(classes_of(5, 2).size() == 2);
    CHECK(classes_of(5, 3).size() == 1);
    CHECK(classes_of(5, 4).size() == 3);
    CHECK(classes_of(5, 6).size() == 3);
    CHECK(classes_of(5, 12).size() == 2);
}

TEST_CASE("classes partition the input and sizes divide the conjugator count") {
    auto subs = subgroups_of_order(4, 2);
    auto cls = conjugacy_classes(subs, 4);
    size_t covered = 0;
    std::set<std::string> seen;
    for (const auto& c : cls) {
        covered += c.members.size();
        for (const auto& g : c.members) CHECK(seen.insert(g.generators_str()).second);
        // representative is a member
        bool found = false;
        for (const auto& g : c.members) found |= g.elements == c.representative.elements;
        CHECK(found);
    }
    CHECK(covered == subs.size());
    // order-2 subgroups of S_4: 6 transposition groups + 3 double-transposition groups
    std::multiset<size_t> sizes;
    for (const auto& c : cls) sizes.insert(c.members.size());
    CHECK(sizes == std::multiset<size_t>{3, 6});
}

TEST_CASE("order must divide the group order") {
    CHECK_THROWS_AS(subgroups_of_order(4, 5), std::invalid_argument);
    CHECK_THROWS_AS(subgroups_of_order(4, 0), std::invalid_argument);
    CHECK_THROWS_AS(subgroups_of_order(8, 2), std::invalid_argument); // n > 7 refused
}

TEST_CASE("generator list parsing") {
    auto gens = parse_generator_list("2 1 3 4; 2 3 1 4", 4);
    REQUIRE(gens.size() == 2);
    CHECK(gens[0] == Perm({2, 1, 3, 4}));
    CHECK(gens[1] == Perm({2, 3, 1, 4}));
    CHECK(parse_generator_list("", 4).empty());
    CHECK_THROWS_AS(parse_generator_list("2 1 3", 4), std::invalid_argument);
    CHECK_THROWS_AS(parse_generator_list("1 1 2 3", 4), std::invalid_argument);
}

TEST_CASE("group files round-trip through generator strings") {
    auto subs = subgroups_of_order(4, 4);
    std::ostringstream out;
    for (const auto& s : subs) out << s.generators_str() << "\n";
    std::istringstream in(out.str());
    // re-closing the printed generators reproduces each subgroup
    std::string line;
    size_t idx = 0;
    while (std::getline(in, line)) {
        Subgroup g = closure(4, parse_generator_list(line, 4));
        CHECK(g.elements == subs[idx].elements);
        ++idx;
    }
    CHECK(idx == subs.size());
}
