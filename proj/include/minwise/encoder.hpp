#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minwise/cnf.hpp"
#include "minwise/family.hpp"
#include "minwise/groups.hpp"

namespace minwise {

enum class Mode { pure, left, right };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& s);

struct ModelConfig {
    int n = 0;
    int k = 0;
    int d = 0;
    Mode mode = Mode::pure;
    int H = -1;              // -1: default prefix length for n; 0 disables the chain
    bool fix_first = true;   // pin the first member (pure) / first offset (right) to id
    bool rankwise = false;   // demand k-rankwise independence instead
    bool paper_literal_right = false; // row-permuted extraction variant (right mode)
};

// Default symmetry-break prefix length: minimal comparison counts for sorting
// n items (0,1,3,5,7,10,13,16 for n = 1..8), full z_cat length beyond.
int default_prefix_len(int n);

// Variable map of one encoding run, sufficient to reconstruct the family from
// a model. x entries cover incidence grids (pure/left: one per offset; right:
// one per family member, derived), t entries cover permutation-matrix grids.
struct DecodeMap {
    Mode mode = Mode::pure;
    int n = 0, k = 0, d = 0, q = 1, H = 0;
    bool fix_first = true;
    bool rankwise = false;
    bool literal_right = false; // members are theta*gamma instead of gamma*theta
    std::string group_generators; // empty for pure mode

    std::vector<std::vector<int>> x_vars; // [idx][(i-1)*n+(j-1)] -> var
    std::vector<std::vector<int>> t_vars; // right mode: [offset][(i-1)*n+(c-1)] -> var
};

void write_map(std::ostream& out, const DecodeMap& m);
DecodeMap read_map(std::istream& in);
void write_map_file(const std::string& path, const DecodeMap& m);
DecodeMap read_map_file(const std::string& path);

struct BuildResult {
    CnfFormula cnf;
    DecodeMap map;
};

// Pure model: one incidence grid per member, order clauses, identity pin,
// upper cardinality bounds per pattern, z_cat lex chain.
BuildResult build_pure(const ModelConfig& cfg);

// Left-coset model over offsets theta_1..theta_{d/|G|}: members theta∘gamma.
BuildResult build_left(const ModelConfig& cfg, const Subgroup& g);

// Right-coset model: permutation-matrix offsets, derived incidence grids for
// gamma∘theta via sandwiched lex links, cardinality over derived grids.
BuildResult build_right(const ModelConfig& cfg, const Subgroup& g);

// Dispatch on cfg.mode; g ignored (may be null) for pure.
BuildResult build(const ModelConfig& cfg, const Subgroup* g);

} // namespace minwise
