// Acceptance run: one PASS/FAIL line per criterion, wall-clock limits
// enforced where the criterion carries one. argv[1] is the CLI binary,
// needed by the determinism criterion. Exit 0 iff every line passes.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

#include "minwise/bijection.hpp"
#include "minwise/cnf.hpp"
#include "minwise/encoder.hpp"
#include "minwise/family.hpp"
#include "minwise/groups.hpp"
#include "minwise/patterns.hpp"
#include "minwise/perm.hpp"
#include "minwise/solver.hpp"

using namespace minwise;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> notes; // details printed under the current criterion line

void note(std::string s) { notes.push_back(std::move(s)); }

bool expect(bool ok, const std::string& what) {
    if (!ok) note("failed: " + what);
    return ok;
}

Family example_family() {
    Family f;
    f.n = 4;
    for (const auto& v : std::vector<std::vector<int>>{{2, 3, 1, 4},
                                                       {1, 4, 2, 3},
                                                       {4, 1, 2, 3},
                                                       {2, 3, 4, 1},
                                                       {2, 1, 4, 3},
                                                       {4, 3, 2, 1}})
        f.members.emplace_back(v);
    return f;
}

ModelConfig cfg_of(int d, int n, int k, Mode mode) {
    ModelConfig c;
    c.d = d;
    c.n = n;
    c.k = k;
    c.mode = mode;
    return c;
}

struct Outcome {
    SolveStatus status;
    Family family; // meaningful iff status == sat
};

// Build + solve + (on sat) decode and verify. Inconclusive solves and
// verification failures are hard errors, not acceptance data.
Outcome run_config(const ModelConfig& cfg, const Subgroup* g) {
    BuildResult b = build(cfg, g);
    SolveResult r = solve_internal(b.cnf, 540.0);
    if (r.status != SolveStatus::sat && r.status != SolveStatus::unsat)
        throw std::runtime_error("solver: " + status_name(r.status) + " " + r.message);
    Outcome o{r.status, {}};
    if (r.status == SolveStatus::sat) {
        o.family = decode(r.model, b.map);
        VerificationReport rep =
            cfg.rankwise ? verify_rankwise(o.family, cfg.k) : verify_minwise(o.family, cfg.k);
        if (!rep.holds)
            throw std::runtime_error("decoded family fails verification: " + rep.witness->str());
    }
    return o;
}

std::string picture(int d, int n, long long q) {
    return "(d=" + std::to_string(d) + ", n=" + std::to_string(n) + ") |G|=" + std::to_string(q);
}

// ---- 1: definitions

bool criterion_definitions() {
    bool ok = true;
    ok &= expect(verify_minwise(example_family(), 3).holds,
                 "worked example family is 3-restricted minwise independent");
    ok &= expect(enumerate_sop(4, 3).size() == 12, "12 semiordered patterns for n=4, j=3");
    ok &= expect(enumerate_sop(4, 2).size() == 12, "12 semiordered patterns for n=4, j=2");
    ok &= expect(enumerate_sop(4, 1).size() == 4, "4 semiordered patterns for n=4, j=1");
    return ok;
}

// ---- 2: derangement <-> waste-index bijection

bool criterion_bijection() {
    bool ok = true;
    Perm rho({1, 5, 3, 4, 6, 2, 8, 7, 9});
    ok &= expect(phi(rho) == Perm({9, 7, 8, 4, 3, 2, 5, 6, 1}), "phi of the worked example");

    for (int n = 1; n <= 7; ++n) {
        std::vector<int> img(n);
        std::iota(img.begin(), img.end(), 1);
        std::set<std::vector<int>> images;
        long long total = 0;
        bool level = true;
        do {
            Perm p(img);
            int fp = 0;
            for (int i = 1; i <= n; ++i) fp += p(i) == i;
            Perm q = phi(p);
            level &= (int)waste_indices(q).size() == fp;
            level &= phi_inverse(q) == p;
            std::vector<int> qi(n);
            for (int i = 1; i <= n; ++i) qi[i - 1] = q(i);
            images.insert(std::move(qi));
            ++total;
        } while (std::next_permutation(img.begin(), img.end()));
        level &= (long long)images.size() == total;
        ok &= expect(level, "phi is a class-preserving bijection on S_" + std::to_string(n));
    }

    for (int n = 1; n <= 8; ++n) {
        ClassCounts c = count_by_class(n);
        ok &= expect(c.waste[0] == subfactorial(n),
                     "derangement count matches zero-waste count at n = " + std::to_string(n));
        ok &= expect(c.waste == c.fixed_points,
                     "waste and fixed-point class counts agree at n = " + std::to_string(n));
    }
    return ok;
}

// ---- 3: subgroup enumeration

bool criterion_groups() {
    bool ok = true;
    auto check = [&ok](int n, long long q, size_t subs_want, size_t classes_want) {
        std::vector<Subgroup> subs = subgroups_of_order(n, q);
        std::vector<SubgroupClass> cls = conjugacy_classes(subs, n);
        ok &= expect(subs.size() == subs_want && cls.size() == classes_want,
                     "S_" + std::to_string(n) + " order " + std::to_string(q) + ": got " +
                         std::to_string(subs.size()) + " subgroups in " + std::to_string(cls.size()) +
                         " classes, want " + std::to_string(subs_want) + "/" +
                         std::to_string(classes_want));
    };
    check(4, 2, 9, 2);
    check(4, 3, 4, 1);
    check(4, 4, 7, 3);
    check(4, 6, 4, 1);
    check(4, 12, 1, 1);
    check(5, 2, 25, 2);
    check(5, 3, 10, 1);
    check(5, 4, 35, 3);
    check(5, 6, 30, 3);
    check(5, 12, 15, 2);
    check(6, 24, 90, 6);
    return ok;
}

// ---- 4: reference pure + left-coset results for k = 4

bool criterion_left_table() {
    bool ok = true;
    ok &= expect(run_config(cfg_of(6, 4, 3, Mode::pure), nullptr).status == SolveStatus::sat,
                 "(d=6, n=4, k=3) pure is satisfiable");
    ok &= expect(run_config(cfg_of(12, 4, 4, Mode::pure), nullptr).status == SolveStatus::sat,
                 "(d=12, n=4, k=4) pure is satisfiable");
    ok &= expect(run_config(cfg_of(12, 6, 4, Mode::pure), nullptr).status == SolveStatus::unsat,
                 "(d=12, n=6, k=4) pure is unsatisfiable");

    struct Row {
        int n;
        long long q;
        int classes, feasible;
    };
    for (Row r : std::vector<Row>{{4, 12, 1, 1},
                                  {4, 6, 1, 0},
                                  {5, 12, 2, 0},
                                  {5, 6, 3, 1},
                                  {5, 4, 3, 0},
                                  {5, 3, 1, 1},
                                  {5, 2, 2, 1}}) {
        std::vector<SubgroupClass> cls = conjugacy_classes(subgroups_of_order(r.n, r.q), r.n);
        int feasible = 0;
        for (const SubgroupClass& c : cls)
            feasible +=
                run_config(cfg_of(12, r.n, 4, Mode::left), &c.representative).status == SolveStatus::sat;
        ok &= expect((int)cls.size() == r.classes && feasible == r.feasible,
                     picture(12, r.n, r.q) + " left: " + std::to_string(feasible) + " of " +
                         std::to_string(cls.size()) + " classes feasible, want " +
                         std::to_string(r.feasible) + " of " + std::to_string(r.classes));
    }
    return ok;
}

// ---- 5: right-coset results for (d=12, n=4, k=4). Every sat decode already
// passes the verifier inside run_config, so a surplus over the reference
// feasible count is a verified fact about the open question, not a failure.
// A deficit would mean we miss a known-feasible group and does fail.

bool criterion_right_table() {
    bool ok = true;
    struct Row {
        long long q;
        int subgroups, reference;
    };
    for (Row r : std::vector<Row>{{12, 1, 1}, {6, 4, 0}, {4, 7, 2}, {3, 4, 3}, {2, 9, 0}}) {
        std::vector<Subgroup> subs = subgroups_of_order(4, r.q);
        ok &= expect((int)subs.size() == r.subgroups,
                     picture(12, 4, r.q) + ": subgroup count " + std::to_string(subs.size()));
        int feasible = 0;
        for (const Subgroup& g : subs)
            feasible += run_config(cfg_of(12, 4, 4, Mode::right), &g).status == SolveStatus::sat;
        if (feasible < r.reference) {
            ok &= expect(false, picture(12, 4, r.q) + " right: only " + std::to_string(feasible) +
                                    " feasible, reference count " + std::to_string(r.reference));
        } else if (feasible > r.reference) {
            note("finding: " + picture(12, 4, r.q) + " right has " + std::to_string(feasible) +
                 " feasible subgroups of " + std::to_string(r.subgroups) + ", reference count " +
                 std::to_string(r.reference) + "; every surplus family passes the verifier");
        }
    }
    return ok;
}

// ---- 6: doubling and restriction

bool criterion_constructions() {
    bool ok = true;
    Family f = example_family();
    Family dd = double_family(f, 3);
    ok &= expect(dd.d() == 12, "doubling the example family gives 12 members");
    ok &= expect(verify_minwise(dd, 4).holds, "doubled family is 4-restricted minwise independent");
    ok &= expect(verify_minwise(restrict_family(f, 3), 3).holds,
                 "example family restricted to 3 points re-verifies at k = 3");
    ok &= expect(verify_minwise(restrict_family(dd, 4), 4).holds,
                 "doubled family restricted to 4 points re-verifies at k = 4");

    // genuine shrink of a solver-found family: 5 points down to 4
    bool shrunk = false;
    for (const SubgroupClass& c : conjugacy_classes(subgroups_of_order(5, 6), 5)) {
        Outcome o = run_config(cfg_of(12, 5, 4, Mode::left), &c.representative);
        if (o.status == SolveStatus::sat) {
            ok &= expect(verify_minwise(restrict_family(o.family, 4), 4).holds,
                         "solver family on 5 points restricted to 4 re-verifies at k = 4");
            shrunk = true;
            break;
        }
    }
    ok &= expect(shrunk, "some order-6 class is feasible at (d=12, n=5)");
    return ok;
}

// ---- 7: encoding soundness against exhaustive oracles

bool inputs_satisfiable(const CnfFormula& base, const std::vector<Lit>& in, unsigned mask) {
    CnfFormula f = base;
    for (size_t i = 0; i < in.size(); ++i)
        f.add_clause({(mask >> i & 1u) ? in[i] : ~in[i]});
    return solve_internal(f, 30.0).status == SolveStatus::sat;
}

bool brute_force_family_exists(int n, int k, int d) {
    std::vector<Perm> all;
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    do
        all.emplace_back(img);
    while (std::next_permutation(img.begin(), img.end()));

    Family f;
    f.n = n;
    f.members.assign(d, all[0]);
    // multisets of size d as nondecreasing index tuples
    std::function<bool(int, int)> grow = [&](int pos, int lo) {
        if (pos == d) return verify_minwise(f, k).holds;
        for (int i = lo; i < (int)all.size(); ++i) {
            f.members[pos] = all[i];
            if (grow(pos + 1, i)) return true;
        }
        return false;
    };
    return grow(0, 0);
}

bool criterion_soundness() {
    bool ok = true;

    for (int m = 1; m <= 8; ++m) {
        bool level = true;
        for (int bound = 0; bound <= m; ++bound) {
            CnfFormula base;
            std::vector<Lit> in;
            for (int i = 0; i < m; ++i) in.push_back(base.new_lit());
            at_most(base, in, bound);
            for (unsigned mask = 0; mask < (1u << m); ++mask)
                level &= inputs_satisfiable(base, in, mask) == (std::popcount(mask) <= (unsigned)bound);
        }
        ok &= expect(level, "at_most matches popcount on " + std::to_string(m) + " literals");
    }

    for (int r = 1; r <= 5; ++r) {
        bool level = true;
        CnfFormula base;
        std::vector<Lit> a, b;
        for (int i = 0; i < r; ++i) a.push_back(base.new_lit());
        for (int i = 0; i < r; ++i) b.push_back(base.new_lit());
        lex_leq(base, a, b);
        std::vector<Lit> in = a;
        in.insert(in.end(), b.begin(), b.end());
        for (unsigned am = 0; am < (1u << r); ++am)
            for (unsigned bm = 0; bm < (1u << r); ++bm) {
                // index 0 is the most significant position
                unsigned ar = 0, br = 0;
                for (int i = 0; i < r; ++i) {
                    ar = ar << 1 | (am >> i & 1u);
                    br = br << 1 | (bm >> i & 1u);
                }
                level &= inputs_satisfiable(base, in, am | bm << r) == (ar <= br);
            }
        ok &= expect(level, "lex_leq matches the lexicographic order at r = " + std::to_string(r));
    }

    for (auto [n, k, d] : std::vector<std::array<int, 3>>{{3, 3, 6}, {4, 3, 6}}) {
        bool sat = run_config(cfg_of(d, n, k, Mode::pure), nullptr).status == SolveStatus::sat;
        ok &= expect(sat == brute_force_family_exists(n, k, d),
                     "pure model agrees with brute-force search at (d=" + std::to_string(d) +
                         ", n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }

    for (auto [n, k, d] : std::vector<std::array<int, 3>>{{4, 3, 6}, {4, 4, 12}, {6, 4, 12}, {5, 4, 12}}) {
        Subgroup trivial = closure(n, {});
        SolveStatus pure = run_config(cfg_of(d, n, k, Mode::pure), nullptr).status;
        SolveStatus left = run_config(cfg_of(d, n, k, Mode::left), &trivial).status;
        ok &= expect(pure == left, "trivial-group left model equisatisfiable with pure at (d=" +
                                       std::to_string(d) + ", n=" + std::to_string(n) +
                                       ", k=" + std::to_string(k) + ")");
    }
    return ok;
}

// ---- 8: byte-identical re-encoding through the CLI

bool criterion_determinism(const std::string& cli) {
    if (!expect(!cli.empty(), "CLI binary path passed as argv[1]")) return false;
    bool ok = true;
    fs::path dir = fs::temp_directory_path() / ("minwise-accept-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    struct Variant {
        const char* label;
        const char* args;
    };
    for (Variant v : {Variant{"pure", "--n 4 --k 4 --d 12 --mode pure"},
                      Variant{"left", "--n 4 --k 4 --d 12 --mode left --group '2 1 4 3; 3 4 1 2'"},
                      Variant{"right", "--n 4 --k 4 --d 12 --mode right --group '2 1 4 3; 3 4 1 2'"}}) {
        fs::path cnf[2], map[2];
        for (int round = 0; round < 2; ++round) {
            cnf[round] = dir / (std::string(v.label) + std::to_string(round) + ".cnf");
            map[round] = dir / (std::string(v.label) + std::to_string(round) + ".map");
            std::string cmd = "'" + cli + "' encode " + v.args + " --out '" + cnf[round].string() +
                              "' --map '" + map[round].string() + "' > /dev/null 2>&1";
            ok &= expect(std::system(cmd.c_str()) == 0,
                         std::string("encode exits 0 for the ") + v.label + " model");
        }
        std::string c0 = slurp(cnf[0]);
        ok &= expect(!c0.empty() && c0 == slurp(cnf[1]),
                     std::string("byte-identical DIMACS across runs, ") + v.label + " model");
        std::string m0 = slurp(map[0]);
        ok &= expect(!m0.empty() && m0 == slurp(map[1]),
                     std::string("byte-identical decode map across runs, ") + v.label + " model");
    }
    fs::remove_all(dir);
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";

    struct Criterion {
        const char* name;
        double limit_s; // 0: informational timing only
        std::function<bool()> fn;
    };
    std::vector<Criterion> suite = {
        {"definitions and pattern counts", 1.0, criterion_definitions},
        {"waste-index bijection", 30.0, criterion_bijection},
        {"subgroup enumeration", 300.0, criterion_groups},
        {"pure and left-coset reproduction", 600.0, criterion_left_table},
        {"right-coset reproduction", 0.0, criterion_right_table},
        {"doubling and restriction", 0.0, criterion_constructions},
        {"encoding soundness oracles", 0.0, criterion_soundness},
        {"deterministic re-encoding", 0.0, [&cli] { return criterion_determinism(cli); }},
    };

    bool all = true;
    for (size_t i = 0; i < suite.size(); ++i) {
        notes.clear();
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = suite[i].fn();
        } catch (const std::exception& e) {
            note(std::string("exception: ") + e.what());
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (suite[i].limit_s > 0 && dt > suite[i].limit_s) {
            ok = false;
            note("over the time limit");
        }
        std::printf("%s  %zu/%zu  %-34s %7.2fs", ok ? "PASS" : "FAIL", i + 1, suite.size(),
                    suite[i].name, dt);
        if (suite[i].limit_s > 0)
            std::printf("  (limit %.0fs)", suite[i].limit_s);
        std::printf("\n");
        for (const std::string& s : notes) std::printf("        %s\n", s.c_str());
        all &= ok;
    }
    return all ? 0 : 1;
}
