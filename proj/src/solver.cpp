#include "minwise/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "minwise/groups.hpp"

namespace minwise {

std::string status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::sat: return "sat";
        case SolveStatus::unsat: return "unsat";
        case SolveStatus::unknown: return "unknown";
        case SolveStatus::error: return "error";
    }
    throw std::logic_error("status_name");
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
    out << "p cnf " << f.var_count << ' ' << f.clauses.size() << '\n';
    for (const auto& cl : f.clauses) {
        for (int l : cl) out << l << ' ';
        out << "0\n";
    }
}

void write_dimacs_file(const std::string& path, const CnfFormula& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write cnf file: " + path);
    write_dimacs(out, f);
}

CnfFormula read_dimacs(std::istream& in) {
    CnfFormula f;
    std::string line;
    bool have_p = false;
    long long declared_clauses = -1;
    while (std::getline(in, line)) {
        size_t s = line.find_first_not_of(" \t\r");
        if (s == std::string::npos || line[s] == 'c') continue;
        std::istringstream ls(line.substr(s));
        if (line[s] == 'p') {
            std::string p, cnf;
            long long v;
            if (!(ls >> p >> cnf >> v >> declared_clauses) || cnf != "cnf" || v < 0)
                throw std::invalid_argument("dimacs: bad problem line");
            f.var_count = (int)v;
            have_p = true;
            continue;
        }
        if (!have_p) throw std::invalid_argument("dimacs: clause before problem line");
        int lit;
        std::vector<int> cl;
        while (ls >> lit) {
            if (lit == 0) {
                if (cl.empty()) f.trivially_false = true;
                f.clauses.push_back(cl);
                cl.clear();
            } else {
                if (std::abs(lit) > f.var_count)
                    throw std::invalid_argument("dimacs: literal over declared vars");
                cl.push_back(lit);
            }
        }
        if (!cl.empty()) throw std::invalid_argument("dimacs: clause not 0-terminated");
    }
    if (!have_p) throw std::invalid_argument("dimacs: missing problem line");
    if (declared_clauses >= 0 && (long long)f.clauses.size() != declared_clauses)
        throw std::invalid_argument("dimacs: clause count mismatch");
    return f;
}

CnfFormula read_dimacs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open cnf file: " + path);
    return read_dimacs(in);
}

// ---- internal CDCL solver

namespace {

// literal encoding: pos var v -> 2v, neg -> 2v+1
inline int enc(int dimacs_lit) {
    return dimacs_lit > 0 ? 2 * dimacs_lit : -2 * dimacs_lit + 1;
}
inline int enc_var(int e) { return e >> 1; }
inline bool enc_neg(int e) { return e & 1; }
inline int enc_flip(int e) { return e ^ 1; }

struct Cdcl {
    struct Clause {
        std::vector<int> lits; // encoded; lits[0] is the propagated/asserting slot
        double act = 0.0;
        bool learnt = false;
        bool deleted = false;
    };

    int nvars;
    std::vector<Clause> clauses;
    std::vector<std::vector<int>> watch; // lit -> clause indices watching it
    std::vector<int8_t> val;             // var -> -1 unassigned / 0 / 1
    std::vector<int> reason;             // var -> clause index or -1
    std::vector<int> level_of;           // var -> decision level
    std::vector<int> trail;              // encoded lits in assignment order
    std::vector<size_t> trail_lim;       // level l starts at trail_lim[l-1]
    size_t qhead = 0;

    std::vector<double> activity;
    double var_inc = 1.0;
    std::vector<int> heap; // max-heap of vars by activity
    std::vector<int> heap_pos;
    std::vector<int8_t> saved_phase;
    double cla_inc = 1.0;

    std::vector<int8_t> seen;
    std::vector<int> to_clear;

    size_t n_orig = 0;
    size_t live_learnts = 0;
    double max_learnts = 0;

    explicit Cdcl(int n)
        : nvars(n), watch(2 * n + 2), val(n + 1, -1), reason(n + 1, -1),
          level_of(n + 1, 0), activity(n + 1, 0.0), heap_pos(n + 1, -1),
          saved_phase(n + 1, 1), seen(n + 1, 0) {
        for (int v = 1; v <= n; ++v) heap_insert(v);
    }

    bool lit_true(int e) const {
        int8_t v = val[enc_var(e)];
        return v >= 0 && (v == 1) != enc_neg(e);
    }
    bool lit_false(int e) const {
        int8_t v = val[enc_var(e)];
        return v >= 0 && (v == 1) == enc_neg(e);
    }
    int current_level() const { return (int)trail_lim.size(); }

    // heap keyed by activity, ties by var index for determinism
    bool heap_lt(int a, int b) const {
        return activity[a] > activity[b] || (activity[a] == activity[b] && a < b);
    }
    void sift_up(int i) {
        int v = heap[i];
        while (i > 0) {
            int p = (i - 1) >> 1;
            if (!heap_lt(v, heap[p])) break;
            heap[i] = heap[p];
            heap_pos[heap[i]] = i;
            i = p;
        }
        heap[i] = v;
        heap_pos[v] = i;
    }
    void sift_down(int i) {
        int v = heap[i];
        size_t n = heap.size();
        while (true) {
            size_t c = 2 * (size_t)i + 1;
            if (c >= n) break;
            if (c + 1 < n && heap_lt(heap[c + 1], heap[c])) ++c;
            if (!heap_lt(heap[c], v)) break;
            heap[i] = heap[c];
            heap_pos[heap[i]] = i;
            i = (int)c;
        }
        heap[i] = v;
        heap_pos[v] = i;
    }
    void heap_insert(int v) {
        if (heap_pos[v] >= 0) return;
        heap.push_back(v);
        sift_up((int)heap.size() - 1);
    }
    void heap_update(int v) {
        if (heap_pos[v] >= 0) sift_up(heap_pos[v]);
    }
    int heap_pop() {
        int v = heap[0];
        heap_pos[v] = -1;
        heap[0] = heap.back();
        heap.pop_back();
        if (!heap.empty()) {
            heap_pos[heap[0]] = 0;
            sift_down(0);
        }
        return v;
    }

    void bump_var(int v) {
        activity[v] += var_inc;
        if (activity[v] > 1e100) {
            for (int u = 1; u <= nvars; ++u) activity[u] *= 1e-100;
            var_inc *= 1e-100;
        }
        heap_update(v);
    }
    void bump_clause(Clause& c) {
        c.act += cla_inc;
        if (c.act > 1e20) {
            for (auto& cl : clauses)
                if (cl.learnt) cl.act *= 1e-20;
            cla_inc *= 1e-20;
        }
    }

    void assign(int e, int why) {
        int v = enc_var(e);
        val[v] = enc_neg(e) ? 0 : 1;
        reason[v] = why;
        level_of[v] = current_level();
        trail.push_back(e);
    }

    // propagate from qhead; returns conflicting clause index or -1
    int propagate() {
        while (qhead < trail.size()) {
            int e = trail[qhead++];
            int falsified = enc_flip(e);
            auto& ws = watch[falsified];
            size_t keep = 0;
            for (size_t wi = 0; wi < ws.size(); ++wi) {
                int ci = ws[wi];
                auto& cl = clauses[ci].lits;
                if (cl[0] == falsified) std::swap(cl[0], cl[1]);
                // cl[1] == falsified now
                if (lit_true(cl[0])) {
                    ws[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (size_t p = 2; p < cl.size(); ++p) {
                    if (!lit_false(cl[p])) {
                        std::swap(cl[1], cl[p]);
                        watch[cl[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[keep++] = ci;
                if (lit_false(cl[0])) { // conflict
                    for (size_t rest = wi + 1; rest < ws.size(); ++rest) ws[keep++] = ws[rest];
                    ws.resize(keep);
                    return ci;
                }
                assign(cl[0], ci); // unit
            }
            ws.resize(keep);
        }
        return -1;
    }

    void backtrack(int target_level) {
        if (current_level() <= target_level) return;
        size_t mark = trail_lim[target_level];
        while (trail.size() > mark) {
            int e = trail.back();
            trail.pop_back();
            int v = enc_var(e);
            saved_phase[v] = val[v];
            val[v] = -1;
            heap_insert(v);
        }
        qhead = mark;
        trail_lim.resize(target_level);
    }

    // 1UIP conflict analysis; fills learnt (asserting literal first), returns backjump level
    int analyze(int confl, std::vector<int>& learnt) {
        learnt.clear();
        learnt.push_back(0); // asserting slot
        int path = 0, p = -1;
        size_t index = trail.size();
        do {
            Clause& c = clauses[confl];
            if (c.learnt) bump_clause(c);
            for (size_t j = (p == -1 ? 0 : 1); j < c.lits.size(); ++j) {
                int q = c.lits[j];
                int v = enc_var(q);
                if (!seen[v] && level_of[v] > 0) {
                    seen[v] = 1;
                    to_clear.push_back(v);
                    bump_var(v);
                    if (level_of[v] == current_level()) ++path;
                    else learnt.push_back(q);
                }
            }
            do {
                --index;
            } while (!seen[enc_var(trail[index])]);
            p = trail[index];
            confl = reason[enc_var(p)];
            seen[enc_var(p)] = 0;
            --path;
        } while (path > 0);
        learnt[0] = enc_flip(p);

        // drop lits whose reason clause is covered by the rest (basic minimization)
        size_t out = 1;
        for (size_t i = 1; i < learnt.size(); ++i) {
            int v = enc_var(learnt[i]);
            int rc = reason[v];
            bool redundant = rc >= 0;
            if (redundant)
                for (int q : clauses[rc].lits) {
                    int u = enc_var(q);
                    if (u != v && !seen[u] && level_of[u] > 0) {
                        redundant = false;
                        break;
                    }
                }
            if (!redundant) learnt[out++] = learnt[i];
        }
        learnt.resize(out);

        for (int v : to_clear) seen[v] = 0;
        to_clear.clear();

        if (learnt.size() == 1) return 0;
        size_t mi = 1;
        for (size_t i = 2; i < learnt.size(); ++i)
            if (level_of[enc_var(learnt[i])] > level_of[enc_var(learnt[mi])]) mi = i;
        std::swap(learnt[1], learnt[mi]);
        return level_of[enc_var(learnt[1])];
    }

    int attach(std::vector<int> lits, bool learnt) {
        int ci = (int)clauses.size();
        clauses.push_back(Clause{std::move(lits), 0.0, learnt, false});
        watch[clauses[ci].lits[0]].push_back(ci);
        watch[clauses[ci].lits[1]].push_back(ci);
        if (learnt) {
            bump_clause(clauses[ci]);
            ++live_learnts;
        }
        return ci;
    }

    // drop the low-activity half of the non-binary learnts; keep reasons
    void reduce_db() {
        std::vector<int> victims;
        std::vector<int8_t> is_reason(clauses.size(), 0);
        for (int e : trail) {
            int r = reason[enc_var(e)];
            if (r >= 0) is_reason[r] = 1;
        }
        for (int ci = (int)n_orig; ci < (int)clauses.size(); ++ci)
            if (clauses[ci].learnt && !clauses[ci].deleted && !is_reason[ci] &&
                clauses[ci].lits.size() > 2)
                victims.push_back(ci);
        std::sort(victims.begin(), victims.end(), [&](int a, int b) {
            return clauses[a].act < clauses[b].act ||
                   (clauses[a].act == clauses[b].act && a < b);
        });
        size_t drop = victims.size() / 2;
        for (size_t i = 0; i < drop; ++i) {
            Clause& c = clauses[victims[i]];
            c.deleted = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
            --live_learnts;
        }
        for (auto& ws : watch) ws.clear();
        for (int ci = 0; ci < (int)clauses.size(); ++ci) {
            if (clauses[ci].deleted) continue;
            watch[clauses[ci].lits[0]].push_back(ci);
            watch[clauses[ci].lits[1]].push_back(ci);
        }
    }
};

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x %= size;
    }
    return std::pow(y, seq);
}

} // namespace

SolveResult solve_internal(const CnfFormula& f, double time_limit_s) {
    auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    res.solver_id = "internal";
    auto done = [&](SolveStatus st) {
        res.status = st;
        res.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    };
    if (f.clauses.size() > internal_clause_limit) {
        res.message = "instance over internal clause limit; use an external solver";
        return done(SolveStatus::error);
    }
    Cdcl s(f.var_count);
    for (const auto& cl : f.clauses) {
        if (cl.empty()) return done(SolveStatus::unsat);
        // skip tautologies, drop duplicate literals
        std::vector<int> c;
        c.reserve(cl.size());
        bool taut = false;
        for (int l : cl) {
            int e = enc(l);
            if (std::find(c.begin(), c.end(), enc_flip(e)) != c.end()) {
                taut = true;
                break;
            }
            if (std::find(c.begin(), c.end(), e) == c.end()) c.push_back(e);
        }
        if (taut) continue;
        if (c.size() == 1) {
            if (s.lit_false(c[0])) return done(SolveStatus::unsat);
            if (!s.lit_true(c[0])) s.assign(c[0], -1);
            continue;
        }
        s.attach(std::move(c), false);
    }
    s.n_orig = s.clauses.size();
    s.max_learnts = std::max(4000.0, (double)s.n_orig / 3.0);
    if (s.propagate() >= 0) return done(SolveStatus::unsat);

    std::vector<int> learnt;
    long long conflicts_total = 0, conflicts_since_restart = 0;
    int restart_count = 0;
    long long restart_limit = (long long)(luby(2.0, 0) * 128);
    while (true) {
        int confl = s.propagate();
        if (confl >= 0) {
            ++conflicts_total;
            ++conflicts_since_restart;
            if (s.current_level() == 0) return done(SolveStatus::unsat);
            int bt = s.analyze(confl, learnt);
            s.backtrack(bt);
            if (learnt.size() == 1) {
                s.assign(learnt[0], -1);
            } else {
                int ci = s.attach(learnt, true);
                s.assign(learnt[0], ci);
            }
            s.var_inc /= 0.95;
            s.cla_inc /= 0.999;
            if (time_limit_s > 0 && (conflicts_total & 511) == 0) {
                double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                .count();
                if (el > time_limit_s) {
                    res.message = "time limit reached";
                    return done(SolveStatus::unknown);
                }
            }
            continue;
        }
        if (conflicts_since_restart >= restart_limit) {
            conflicts_since_restart = 0;
            restart_limit = (long long)(luby(2.0, ++restart_count) * 128);
            s.backtrack(0);
            continue;
        }
        if ((double)s.live_learnts > s.max_learnts) {
            s.reduce_db();
            s.max_learnts *= 1.5;
        }
        int v = 0;
        while (!s.heap.empty()) {
            int cand = s.heap_pop();
            if (s.val[cand] < 0) {
                v = cand;
                break;
            }
        }
        if (v == 0) {
            res.model.assign(f.var_count + 1, 0);
            for (int u = 1; u <= f.var_count; ++u) res.model[u] = s.val[u] == 1 ? 1 : 0;
            return done(SolveStatus::sat);
        }
        s.trail_lim.push_back(s.trail.size());
        s.assign(s.saved_phase[v] == 0 ? 2 * v + 1 : 2 * v, -1);
    }
}

// ---- external solver subprocess

SolveResult run_external(const std::string& cnf_path, const std::string& command_template,
                         double time_limit_s) {
    auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    res.solver_id = command_template;
    auto done = [&](SolveStatus st) {
        res.status = st;
        res.elapsed_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    };
    std::string cmd = command_template;
    size_t ph = cmd.find("{}");
    if (ph != std::string::npos)
        cmd = cmd.substr(0, ph) + cnf_path + cmd.substr(ph + 2);
    else
        cmd += " " + cnf_path;

    int fds[2];
    if (pipe(fds) != 0) {
        res.message = "pipe failed";
        return done(SolveStatus::error);
    }
    pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        res.message = "fork failed";
        return done(SolveStatus::error);
    }
    if (pid == 0) {
        setpgid(0, 0);
        dup2(fds[1], STDOUT_FILENO);
        close(fds[0]);
        close(fds[1]);
        execl("/bin/sh", "sh", "-c", cmd.c_str(), (char*)nullptr);
        _exit(127);
    }
    setpgid(pid, pid);
    close(fds[1]);
    std::string output;
    bool timed_out = false;
    char buf[4096];
    while (true) {
        int timeout_ms = -1;
        if (time_limit_s > 0) {
            double left =
                time_limit_s -
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (left <= 0) {
                timed_out = true;
                break;
            }
            timeout_ms = (int)(left * 1000) + 1;
        }
        struct pollfd pfd{fds[0], POLLIN, 0};
        int pr = poll(&pfd, 1, timeout_ms);
        if (pr == 0) {
            timed_out = true;
            break;
        }
        if (pr < 0) {
            if (errno == EINTR) continue;
            break;
        }
        ssize_t got = read(fds[0], buf, sizeof buf);
        if (got <= 0) break;
        output.append(buf, (size_t)got);
    }
    if (timed_out) kill(-pid, SIGKILL);
    close(fds[0]);
    int wstatus = 0;
    waitpid(pid, &wstatus, 0);
    if (timed_out) {
        res.message = "time limit reached";
        return done(SolveStatus::unknown);
    }
    int exit_code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
    if (exit_code == 127) {
        res.message = "solver command not found";
        return done(SolveStatus::error);
    }

    bool have_s = false;
    SolveStatus st = SolveStatus::unknown;
    std::vector<int> lits;
    std::istringstream os(output);
    std::string line;
    while (std::getline(os, line)) {
        if (line.rfind("s ", 0) == 0) {
            have_s = true;
            std::string w = line.substr(2);
            while (!w.empty() && (w.back() == '\r' || w.back() == ' ')) w.pop_back();
            if (w == "SATISFIABLE") st = SolveStatus::sat;
            else if (w == "UNSATISFIABLE") st = SolveStatus::unsat;
            else if (w == "UNKNOWN") st = SolveStatus::unknown;
            else {
                res.message = "unrecognized s-line: " + line;
                return done(SolveStatus::error);
            }
        } else if (line.rfind("v", 0) == 0 && (line.size() == 1 || line[1] == ' ')) {
            std::istringstream vs(line.substr(1));
            int l;
            while (vs >> l)
                if (l != 0) lits.push_back(l);
        }
    }
    if (!have_s) {
        if (exit_code == 10) st = SolveStatus::sat;
        else if (exit_code == 20) st = SolveStatus::unsat;
        else {
            res.message = "no s-line and exit code " + std::to_string(exit_code);
            return done(SolveStatus::error);
        }
    }
    if (st == SolveStatus::sat) {
        if (lits.empty()) {
            res.message = "SAT result without v-lines";
            return done(SolveStatus::error);
        }
        int maxv = 0;
        for (int l : lits) maxv = std::max(maxv, std::abs(l));
        res.model.assign(maxv + 1, 0);
        for (int l : lits) res.model[std::abs(l)] = l > 0 ? 1 : 0;
    }
    if (st == SolveStatus::unknown) res.message = "solver reported unknown";
    return done(st);
}

// ---- model decoding

namespace {

bool model_bit(const std::vector<int8_t>& model, int var) {
    return var < (int)model.size() && model[var] != 0;
}

Perm grid_to_perm(const std::vector<int8_t>& model, const std::vector<int>& vars, int n) {
    IncidenceMatrix m;
    m.n = n;
    m.bits.assign((size_t)n * n, 0);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            m.set(i, j, model_bit(model, vars[(size_t)(i - 1) * n + (j - 1)]));
    return from_incidence(m);
}

Perm tgrid_to_perm(const std::vector<int8_t>& model, const std::vector<int>& vars, int n) {
    PermMatrix t;
    t.n = n;
    t.bits.assign((size_t)n * n, 0);
    for (int i = 1; i <= n; ++i)
        for (int c = 1; c <= n; ++c)
            t.set(i, c, model_bit(model, vars[(size_t)(i - 1) * n + (c - 1)]));
    return from_perm_matrix(t);
}

} // namespace

Family decode(const std::vector<int8_t>& model, const DecodeMap& map) {
    if (model.empty()) throw std::invalid_argument("decode: empty model");
    Family fam;
    fam.n = map.n;
    if (map.mode == Mode::pure) {
        if ((int)map.x_vars.size() != map.d)
            throw std::runtime_error("decode: map has wrong grid count");
        for (int l = 0; l < map.d; ++l)
            fam.members.push_back(grid_to_perm(model, map.x_vars[l], map.n));
        return fam;
    }
    std::vector<Perm> gamma =
        closure(map.n, parse_generator_list(map.group_generators, map.n)).elements;
    if ((int)gamma.size() != map.q)
        throw std::runtime_error("decode: group order disagrees with map q");
    int offsets = map.d / map.q;
    if (map.mode == Mode::left) {
        if ((int)map.x_vars.size() != offsets)
            throw std::runtime_error("decode: map has wrong grid count");
        for (int l = 0; l < offsets; ++l) {
            Perm theta = grid_to_perm(model, map.x_vars[l], map.n);
            for (const Perm& gm : gamma) fam.members.push_back(theta.compose(gm));
        }
        return fam;
    }
    if ((int)map.t_vars.size() != offsets)
        throw std::runtime_error("decode: map has wrong t grid count");
    for (int l = 0; l < offsets; ++l) {
        Perm theta = tgrid_to_perm(model, map.t_vars[l], map.n);
        for (const Perm& gm : gamma)
            fam.members.push_back(map.literal_right ? theta.compose(gm)
                                                    : gm.compose(theta));
    }
    return fam;
}

} // namespace minwise
