#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "minwise/cnf.hpp"
#include "minwise/encoder.hpp"
#include "minwise/family.hpp"

namespace minwise {

enum class SolveStatus { sat, unsat, unknown, error };

std::string status_name(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::error;
    std::vector<int8_t> model; // 1-indexed truth values; nonempty iff status == sat
    double elapsed_s = 0.0;
    std::string solver_id;
    std::string message; // reason for unknown/error
};

// "p cnf <vars> <clauses>" then one 0-terminated clause per line. Byte-stable
// for a given formula.
void write_dimacs(std::ostream& out, const CnfFormula& f);
void write_dimacs_file(const std::string& path, const CnfFormula& f);
CnfFormula read_dimacs(std::istream& in);
CnfFormula read_dimacs_file(const std::string& path);

// Complete CDCL solver: two watched literals, first-UIP learning, VSIDS
// branching, phase saving, Luby restarts, learnt-clause reduction. Fully
// deterministic (no randomization; ties break on variable index).
// time_limit_s <= 0 means no limit; hitting the limit yields unknown.
// Instances over `internal_clause_limit` are refused with status error.
inline constexpr size_t internal_clause_limit = 200000;
SolveResult solve_internal(const CnfFormula& f, double time_limit_s = 0.0);

// Runs `command_template` via the shell, replacing "{}" with cnf_path (or
// appending the path if no placeholder). Expects competition-style output:
// "s SATISFIABLE|UNSATISFIABLE|UNKNOWN" and "v ... 0" model lines; exit codes
// 10/20 are accepted in lieu of an s-line. Timeout kills the process group
// and yields unknown. Anything malformed yields an explicit error result.
SolveResult run_external(const std::string& cnf_path, const std::string& command_template,
                         double time_limit_s = 0.0);

// Model -> family, per the map's mode. Pure/left read incidence grids and
// fail hard if any grid violates the order axioms; right reads permutation
// matrices. Coset modes expand offsets against the reconstructed group.
Family decode(const std::vector<int8_t>& model, const DecodeMap& map);

} // namespace minwise
