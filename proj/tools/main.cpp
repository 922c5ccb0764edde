#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "minwise/bijection.hpp"
#include "minwise/encoder.hpp"
#include "minwise/family.hpp"
#include "minwise/groups.hpp"
#include "minwise/patterns.hpp"
#include "minwise/solver.hpp"

using json = nlohmann::json;
using namespace minwise;

namespace {

// exit codes: 0 ok, 1 usage/config, 2 demanded property does not hold, 3 solver failure
constexpr int exit_ok = 0, exit_usage = 1, exit_infeasible = 2, exit_solver = 3;

Perm parse_perm(const std::string& s) {
    std::istringstream in(s);
    std::vector<int> img;
    int v;
    while (in >> v) img.push_back(v);
    return Perm(std::move(img));
}

struct GroupOpts {
    std::string generators; // inline "2 1 3 4; 2 3 1 4"
    std::string file;
    int index = 1; // 1-based line in file
};

std::optional<Subgroup> resolve_group(const GroupOpts& g, int n) {
    if (!g.generators.empty()) return closure(n, parse_generator_list(g.generators, n));
    if (!g.file.empty()) {
        auto subs = read_group_file(g.file, n);
        if (g.index < 1 || g.index > (int)subs.size())
            throw std::invalid_argument("--group-index out of range (file has " +
                                        std::to_string(subs.size()) + " groups)");
        return subs[g.index - 1];
    }
    return std::nullopt;
}

struct SolverOpts {
    std::string cmd;
    bool internal = false;
    double time_limit = 0.0;
};

SolveResult dispatch_solve(const CnfFormula& f, const SolverOpts& so) {
    std::string cmd = so.cmd;
    if (cmd.empty() && !so.internal) {
        const char* env = std::getenv("MINWISE_SOLVER_CMD");
        if (env && *env) cmd = env;
    }
    if (cmd.empty()) return solve_internal(f, so.time_limit);
    auto tmp = std::filesystem::temp_directory_path() /
               ("minwise-" + std::to_string(getpid()) + "-" +
                std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()) +
                ".cnf");
    write_dimacs_file(tmp.string(), f);
    SolveResult r = run_external(tmp.string(), cmd, so.time_limit);
    std::filesystem::remove(tmp);
    return r;
}

void print_report(const VerificationReport& rep) {
    std::cout << rep.property << " k=" << rep.k << ": " << (rep.holds ? "holds" : "FAILS");
    if (!rep.holds && rep.witness) std::cout << " at " << rep.witness->str();
    std::cout << "\n";
}

VerificationReport verify_for(const Family& fam, int k, bool rankwise) {
    return rankwise ? verify_rankwise(fam, k) : verify_minwise(fam, k);
}

// ---- sweep

struct SweepRow {
    long long order = 0;
    std::string mode;
    long long existing = 0;
    std::vector<std::pair<std::string, SolveResult>> runs; // generators, result
};

json row_json(const SweepRow& r) {
    json subs = json::array();
    long long feas = 0, infeas = 0, timeout = 0;
    double tf = 0, ti = 0;
    for (const auto& [gens, res] : r.runs) {
        json e{{"generators", gens},
               {"status", status_name(res.status)},
               {"time_s", res.elapsed_s}};
        subs.push_back(e);
        if (res.status == SolveStatus::sat) {
            ++feas;
            tf += res.elapsed_s;
        } else if (res.status == SolveStatus::unsat) {
            ++infeas;
            ti += res.elapsed_s;
        } else {
            ++timeout;
        }
    }
    json j{{"order", r.order},
           {"mode", r.mode},
           {"existing", r.existing},
           {"considered", (long long)r.runs.size()},
           {"feasible", feas},
           {"infeasible", infeas},
           {"timeout", timeout},
           {"subgroups", subs}};
    j["avg_feasible_s"] = feas ? json(tf / (double)feas) : json(nullptr);
    j["avg_infeasible_s"] = infeas ? json(ti / (double)infeas) : json(nullptr);
    return j;
}

std::string cell(long long v, bool run) { return run ? std::to_string(v) : "/"; }

void print_sweep_console(const std::vector<SweepRow>& rows, int d, int n) {
    std::vector<long long> orders;
    for (const auto& r : rows)
        if (orders.empty() || orders.back() != r.order) orders.push_back(r.order);
    printf("(d,n) = (%d,%d)\n", d, n);
    printf("%6s | %8s %8s %8s %8s | %8s %8s %8s %8s\n", "|G|", "#exst L", "#cnsd L",
           "#feas L", "#infs L", "#exst R", "#cnsd R", "#feas R", "#infs R");
    for (long long q : orders) {
        const SweepRow *L = nullptr, *R = nullptr;
        for (const auto& r : rows)
            if (r.order == q) {
                if (r.mode == "right") R = &r;
                else L = &r;
            }
        auto counts = [](const SweepRow* r, int which) -> long long {
            if (!r) return 0;
            long long feas = 0, infeas = 0;
            for (const auto& [g, res] : r->runs) {
                feas += res.status == SolveStatus::sat;
                infeas += res.status == SolveStatus::unsat;
            }
            switch (which) {
                case 0: return r->existing;
                case 1: return (long long)r->runs.size();
                case 2: return feas;
                default: return infeas;
            }
        };
        printf("%6lld | %8s %8s %8s %8s | %8s %8s %8s %8s\n", q,
               cell(counts(L, 0), L).c_str(), cell(counts(L, 1), L).c_str(),
               cell(counts(L, 2), L).c_str(), cell(counts(L, 3), L).c_str(),
               cell(counts(R, 0), R).c_str(), cell(counts(R, 1), R).c_str(),
               cell(counts(R, 2), R).c_str(), cell(counts(R, 3), R).c_str());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAT-based search and verification for k-restricted minwise and "
                 "rankwise independent permutation families"};
    app.require_subcommand(1);

    // shared option payloads
    int n = 0, k = 0, d = 0;
    std::string mode_s = "pure", H_s = "auto", out_path, map_path, report_path;
    bool rankwise = false, fix_first = true, paper_literal = false;
    GroupOpts gopt;
    SolverOpts sopt;

    auto add_model_opts = [&](CLI::App* c, bool need_d) {
        c->add_option("--n", n, "ground set size")->required();
        c->add_option("--k", k, "restriction parameter")->required();
        auto* od = c->add_option("--d", d, "family size");
        if (need_d) od->required();
        c->add_option("--mode", mode_s, "pure|left|right")->capture_default_str();
        c->add_option("--H", H_s, "lex chain prefix length: auto|off|<int>")
            ->capture_default_str();
        c->add_flag("--rankwise", rankwise, "demand k-rankwise independence");
        c->add_flag("!--no-fix-first", fix_first, "do not pin the first member/offset");
        c->add_flag("--paper-literal-right", paper_literal,
                    "row-permuted derived-grid variant in right mode");
        c->add_option("--group", gopt.generators, "inline generators 'p1; p2; ...'");
        c->add_option("--group-file", gopt.file, "group file, one generator list per line");
        c->add_option("--group-index", gopt.index, "1-based line in --group-file")
            ->capture_default_str();
    };
    auto add_solver_opts = [&](CLI::App* c) {
        c->add_option("--solver-cmd", sopt.cmd,
                      "external solver command, {} replaced by the cnf path");
        c->add_flag("--internal", sopt.internal, "force the internal solver");
        c->add_option("--time-limit", sopt.time_limit, "seconds per solve, 0 = none");
    };

    auto* c_encode = app.add_subcommand("encode", "write a DIMACS instance and its map");
    add_model_opts(c_encode, true);
    c_encode->add_option("--out", out_path, "cnf output path")->required();
    c_encode->add_option("--map", map_path, "decode map output path")->required();

    auto* c_solve = app.add_subcommand("solve", "encode (or load) an instance and solve it");
    add_model_opts(c_solve, true);
    std::string cnf_in, map_in;
    bool expect_sat = false;
    c_solve->add_option("--cnf", cnf_in, "solve this DIMACS file instead of encoding");
    c_solve->add_option("--map", map_in, "decode map for --cnf");
    c_solve->add_option("--out", out_path, "write the decoded family here");
    c_solve->add_flag("--expect-sat", expect_sat, "exit 2 on unsat, 3 on unknown");
    add_solver_opts(c_solve);
    // --cnf path does not need the model options
    for (auto* o : {c_solve->get_option("--n"), c_solve->get_option("--k"),
                    c_solve->get_option("--d")})
        o->required(false);

    auto* c_verify = app.add_subcommand("verify", "check a family file");
    std::string family_path;
    c_verify->add_option("--family", family_path, "family file")->required();
    c_verify->add_option("--k", k, "restriction parameter")->required();
    c_verify->add_flag("--rankwise", rankwise, "check k-rankwise independence");

    auto* c_groups = app.add_subcommand("groups", "enumerate subgroups of S_n by order");
    long long order_q = 0;
    bool classes_flag = false;
    c_groups->add_option("--n", n, "symmetric group degree")->required();
    c_groups->add_option("--order", order_q, "subgroup order")->required();
    c_groups->add_flag("--classes", classes_flag, "print conjugacy classes");
    c_groups->add_option("--out", out_path, "write a group file");

    auto* c_sweep = app.add_subcommand("sweep", "solve across subgroup orders, tabulate");
    add_model_opts(c_sweep, true);
    add_solver_opts(c_sweep);
    c_sweep->get_option("--mode")->description("pure|left|right|both");
    std::string orders_s = "all";
    c_sweep->add_option("--orders", orders_s, "all or comma list, e.g. 12,6,4")
        ->capture_default_str();
    c_sweep->add_option("--report", report_path, "write a JSON report");

    auto* c_bounds = app.add_subcommand("bounds", "family size bounds for (n, k)");
    c_bounds->add_option("--n", n, "ground set size")->required();
    c_bounds->add_option("--k", k, "restriction parameter")->required();

    auto* c_bij = app.add_subcommand("bijection", "fixed-point/waste-index bijection tools");
    std::string phi_s, phi_inv_s, waste_s;
    int counts_n = 0;
    c_bij->add_option("--phi", phi_s, "apply the bijection to a permutation");
    c_bij->add_option("--phi-inverse", phi_inv_s, "apply the inverse");
    c_bij->add_option("--waste", waste_s, "list waste indices of a permutation");
    c_bij->add_option("--counts", counts_n, "class size table for S_n (n <= 9)");

    auto* c_double = app.add_subcommand("double", "verify at odd k, then double the family");
    c_double->add_option("--family", family_path, "family file")->required();
    c_double->add_option("--k", k, "odd restriction parameter")->required();
    c_double->add_option("--out", out_path, "output family file")->required();

    auto* c_restrict = app.add_subcommand("restrict", "drop trailing symbols, rank-compress");
    int to_n = 0;
    c_restrict->add_option("--family", family_path, "family file")->required();
    c_restrict->add_option("--to", to_n, "target ground set size")->required();
    c_restrict->add_option("--out", out_path, "output family file")->required();

    auto* c_minhash = app.add_subcommand("minhash-check",
                                         "exact collision probabilities on small unions");
    c_minhash->add_option("--family", family_path, "family file")->required();
    c_minhash->add_option("--k", k, "check all A,B with |A u B| <= k")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        auto model_config = [&]() {
            ModelConfig cfg;
            cfg.n = n;
            cfg.k = k;
            cfg.d = d;
            cfg.mode = mode_from_name(mode_s);
            if (H_s == "auto") cfg.H = -1;
            else if (H_s == "off") cfg.H = 0;
            else cfg.H = std::stoi(H_s);
            cfg.fix_first = fix_first;
            cfg.rankwise = rankwise;
            cfg.paper_literal_right = paper_literal;
            return cfg;
        };
        auto build_from_opts = [&]() {
            ModelConfig cfg = model_config();
            std::optional<Subgroup> g = resolve_group(gopt, n);
            if (cfg.mode != Mode::pure && !g)
                throw std::invalid_argument("coset modes need --group or --group-file");
            return build(cfg, g ? &*g : nullptr);
        };

        if (c_encode->parsed()) {
            BuildResult br = build_from_opts();
            write_dimacs_file(out_path, br.cnf);
            write_map_file(map_path, br.map);
            std::cout << "wrote " << out_path << " (" << br.cnf.var_count << " vars, "
                      << br.cnf.clauses.size() << " clauses) and " << map_path << "\n";
            return exit_ok;
        }

        if (c_solve->parsed()) {
            CnfFormula cnf;
            DecodeMap map;
            if (!cnf_in.empty()) {
                if (map_in.empty())
                    throw std::invalid_argument("--cnf needs --map for decoding");
                cnf = read_dimacs_file(cnf_in);
                map = read_map_file(map_in);
            } else {
                BuildResult br = build_from_opts();
                cnf = std::move(br.cnf);
                map = std::move(br.map);
            }
            SolveResult res = dispatch_solve(cnf, sopt);
            std::cout << "status " << status_name(res.status) << " in " << res.elapsed_s
                      << "s\n";
            if (res.status == SolveStatus::error) {
                std::cerr << "solver error: " << res.message << "\n";
                return exit_solver;
            }
            if (res.status == SolveStatus::sat) {
                Family fam = decode(res.model, map);
                VerificationReport rep = verify_for(fam, map.k, map.rankwise);
                print_report(rep);
                if (!rep.holds) {
                    std::cerr << "decoded family failed verification: encoder bug\n";
                    return exit_solver;
                }
                write_family(std::cout, fam);
                if (!out_path.empty()) write_family_file(out_path, fam);
            }
            if (res.status == SolveStatus::unsat) return expect_sat ? exit_infeasible : exit_ok;
            if (res.status == SolveStatus::unknown) {
                std::cerr << "solver gave up: " << res.message << "\n";
                return expect_sat ? exit_solver : exit_ok;
            }
            return exit_ok;
        }

        if (c_verify->parsed()) {
            Family fam = read_family_file(family_path);
            VerificationReport rep = verify_for(fam, k, rankwise);
            print_report(rep);
            return rep.holds ? exit_ok : exit_infeasible;
        }

        if (c_groups->parsed()) {
            auto subs = subgroups_of_order(n, order_q);
            std::cout << subs.size() << " subgroups of S_" << n << " of order " << order_q
                      << "\n";
            if (classes_flag) {
                auto cls = conjugacy_classes(subs, n);
                std::cout << cls.size() << " conjugacy classes\n";
                for (const auto& c : cls)
                    std::cout << "  class of size " << c.members.size() << ", representative: "
                              << c.representative.generators_str() << "\n";
            } else {
                for (const auto& s : subs) std::cout << "  " << s.generators_str() << "\n";
            }
            if (!out_path.empty()) {
                std::ofstream out(out_path, std::ios::binary);
                if (!out) throw std::invalid_argument("cannot write " + out_path);
                for (const auto& s : subs) out << s.generators_str() << "\n";
                std::cout << "wrote " << out_path << "\n";
            }
            return exit_ok;
        }

        if (c_sweep->parsed()) {
            bool run_left = mode_s == "left" || mode_s == "both" || mode_s == "pure";
            bool run_right = mode_s == "right" || mode_s == "both";
            if (!run_left && !run_right)
                throw std::invalid_argument("sweep mode must be pure, left, right, or both");
            std::string sweep_mode = std::exchange(mode_s, "pure");
            ModelConfig cfg = model_config();
            mode_s = sweep_mode;
            std::vector<long long> orders;
            if (orders_s == "all") {
                long long nf = 1;
                for (int i = 2; i <= n; ++i) nf *= i;
                for (long long q = d; q >= 1; --q)
                    if (d % q == 0 && nf % q == 0) orders.push_back(q);
            } else {
                std::istringstream os(orders_s);
                std::string tok;
                while (std::getline(os, tok, ',')) orders.push_back(std::stoll(tok));
            }
            std::vector<Subgroup> file_groups;
            if (!gopt.file.empty()) file_groups = read_group_file(gopt.file, n);
            std::vector<SweepRow> rows;
            auto solve_one = [&](Mode m, const Subgroup* g) {
                ModelConfig c2 = cfg;
                c2.mode = m;
                SolveResult res = dispatch_solve(build(c2, g).cnf, sopt);
                if (res.status == SolveStatus::error)
                    throw std::runtime_error("solver failure: " + res.message);
                if (res.status == SolveStatus::sat) {
                    // re-encode to keep the map (cheap at these sizes)
                    BuildResult br = build(c2, g);
                    VerificationReport rep =
                        verify_for(decode(res.model, br.map), c2.k, c2.rankwise);
                    if (!rep.holds)
                        throw std::runtime_error("decoded family failed verification");
                }
                return res;
            };
            for (long long q : orders) {
                std::vector<Subgroup> subs;
                if (q > 1) {
                    if (!file_groups.empty()) {
                        for (const auto& s : file_groups)
                            if (s.order() == q) subs.push_back(s);
                    } else {
                        subs = subgroups_of_order(n, q);
                    }
                    if (subs.empty()) continue;
                }
                if (run_left) {
                    SweepRow row;
                    row.order = q;
                    if (q == 1) {
                        row.mode = "pure";
                        row.existing = 1;
                        row.runs.emplace_back("identity", solve_one(Mode::pure, nullptr));
                    } else {
                        row.mode = "left";
                        auto cls = conjugacy_classes(subs, n);
                        row.existing = (long long)cls.size();
                        for (const auto& c : cls)
                            row.runs.emplace_back(c.representative.generators_str(),
                                                  solve_one(Mode::left, &c.representative));
                    }
                    rows.push_back(std::move(row));
                }
                if (run_right && q > 1) {
                    SweepRow row;
                    row.order = q;
                    row.mode = "right";
                    row.existing = (long long)subs.size();
                    for (const auto& s : subs)
                        row.runs.emplace_back(s.generators_str(), solve_one(Mode::right, &s));
                    rows.push_back(std::move(row));
                }
            }
            print_sweep_console(rows, d, n);
            if (!report_path.empty()) {
                json rep{{"schema", "minwise-sweep/1"},
                         {"n", n},
                         {"k", k},
                         {"d", d},
                         {"rankwise", cfg.rankwise},
                         {"time_limit_s", sopt.time_limit},
                         {"rows", json::array()}};
                for (const auto& r : rows) rep["rows"].push_back(row_json(r));
                std::ofstream out(report_path, std::ios::binary);
                if (!out) throw std::invalid_argument("cannot write " + report_path);
                out << rep.dump(2) << "\n";
                std::cout << "wrote " << report_path << "\n";
            }
            return exit_ok;
        }

        if (c_bounds->parsed()) {
            std::cout << "lcm(1.." << k << ") = " << lcm_upto(k) << "\n";
            std::cout << "minwise lower bound max{n, lcm} = " << lower_bound_minwise(n, k)
                      << "\n";
            std::cout << "minwise upper bound ceil(n^k e^k lcm(1..k-1)) = "
                      << upper_bound_minwise(n, k) << "\n";
            std::cout << "rankwise lower bound = " << bargachev_bound(n, k) << "\n";
            return exit_ok;
        }

        if (c_bij->parsed()) {
            if (counts_n > 0) {
                ClassCounts cc = count_by_class(counts_n);
                std::cout << "k  #perms with k fixed points  #perms with k waste indices\n";
                for (int i = 0; i <= counts_n; ++i)
                    std::cout << i << "  " << cc.fixed_points[i] << "  " << cc.waste[i]
                              << "\n";
                return exit_ok;
            }
            if (!phi_s.empty()) {
                Perm p = parse_perm(phi_s);
                std::cout << "cycle form " << cycle_form(p).str() << "\n";
                std::cout << phi(p).str() << "\n";
                return exit_ok;
            }
            if (!phi_inv_s.empty()) {
                std::cout << phi_inverse(parse_perm(phi_inv_s)).str() << "\n";
                return exit_ok;
            }
            if (!waste_s.empty()) {
                auto w = waste_indices(parse_perm(waste_s));
                for (size_t i = 0; i < w.size(); ++i) std::cout << (i ? " " : "") << w[i];
                std::cout << "\n";
                return exit_ok;
            }
            throw std::invalid_argument("bijection: pass one of --phi/--phi-inverse/--waste/--counts");
        }

        if (c_double->parsed()) {
            Family fam = read_family_file(family_path);
            VerificationReport rep = verify_minwise(fam, k);
            print_report(rep);
            if (!rep.holds) return exit_infeasible;
            Family out = double_family(fam, k);
            write_family_file(out_path, out);
            VerificationReport rep2 = verify_minwise(out, k + 1);
            print_report(rep2);
            std::cout << "wrote " << out_path << "\n";
            return rep2.holds ? exit_ok : exit_infeasible;
        }

        if (c_restrict->parsed()) {
            Family fam = read_family_file(family_path);
            write_family_file(out_path, restrict_family(fam, to_n));
            std::cout << "wrote " << out_path << "\n";
            return exit_ok;
        }

        if (c_minhash->parsed()) {
            Family fam = read_family_file(family_path);
            VerificationReport rep = verify_minwise(fam, k);
            print_report(rep);
            if (!rep.holds) return exit_infeasible;
            long long checked = 0;
            for (unsigned a = 1; a < (1u << fam.n); ++a)
                for (unsigned b = 1; b < (1u << fam.n); ++b) {
                    if (__builtin_popcount(a | b) > k) continue;
                    std::vector<int> A, B;
                    for (int i = 0; i < fam.n; ++i) {
                        if (a & (1u << i)) A.push_back(i + 1);
                        if (b & (1u << i)) B.push_back(i + 1);
                    }
                    Rational got = min_collision_prob(fam, A, B);
                    long long inter = __builtin_popcount(a & b), uni = __builtin_popcount(a | b);
                    long long g = std::gcd(inter, uni);
                    Rational want{inter / g, uni / g};
                    if (!(got == want)) {
                        std::cout << "MISMATCH A={";
                        for (int v : A) std::cout << v << ",";
                        std::cout << "} B={";
                        for (int v : B) std::cout << v << ",";
                        std::cout << "}: got " << got.str() << ", expected " << want.str()
                                  << "\n";
                        return exit_infeasible;
                    }
                    ++checked;
                }
            std::cout << "checked " << checked
                      << " set pairs: every collision probability equals |AnB|/|AuB|\n";
            return exit_ok;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_solver;
    }
    return exit_usage;
}
