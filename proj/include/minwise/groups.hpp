#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minwise/perm.hpp"

namespace minwise {

// Subgroup of S_n. elements are sorted by image (identity first); generators
// are the sequence that produced the subgroup, not necessarily minimal.
struct Subgroup {
    int n = 0;
    std::vector<Perm> elements;
    std::vector<Perm> generators;

    long long order() const { return (long long)elements.size(); }
    std::string generators_str() const; // "2 1 3 4; 2 3 1 4"
};

// Closure of the generated subgroup; empty generator list yields {id}.
Subgroup closure(int n, const std::vector<Perm>& gens);

// Every subgroup of S_n of order exactly q, sorted by their element lists.
// Layered cyclic-extension search: seed with cyclic subgroups whose order
// divides q, extend by single outside elements while the closure order still
// divides q. Complete for n <= 7; larger n are refused (use generator files).
std::vector<Subgroup> subgroups_of_order(int n, long long q);

struct SubgroupClass {
    Subgroup representative; // element-list-minimal member
    std::vector<Subgroup> members;
};

// Partition into S_n-conjugacy classes, ordered by representative.
std::vector<SubgroupClass> conjugacy_classes(const std::vector<Subgroup>& subs, int n);

// One subgroup per line, generators semicolon-separated: "2 1 3 4; 2 3 1 4".
// '#' starts a comment line. Each line is closed under closure().
std::vector<Subgroup> read_group_file(std::istream& in, int n);
std::vector<Subgroup> read_group_file(const std::string& path, int n);
std::vector<Perm> parse_generator_list(const std::string& line, int n);

} // namespace minwise
