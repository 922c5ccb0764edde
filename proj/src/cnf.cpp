#include "minwise/cnf.hpp"

#include <stdexcept>

namespace minwise {

int CnfFormula::new_var() { return ++var_count; }

int CnfFormula::new_var(const std::string& name) {
    int v = new_var();
    annotations.emplace_back(name, v);
    return v;
}

void CnfFormula::add_clause(std::span<const Lit> lits) {
    std::vector<int> cl;
    cl.reserve(lits.size());
    for (Lit l : lits) {
        if (l.is_const()) {
            if (l.const_value()) return; // satisfied clause
            continue;                    // false literal drops out
        }
        if (l.var() < 1 || l.var() > var_count)
            throw std::invalid_argument("add_clause: literal over unallocated variable");
        cl.push_back(l.dimacs());
    }
    if (cl.empty()) trivially_false = true;
    clauses.push_back(std::move(cl));
}

Lit define_conjunction(CnfFormula& f, std::span<const Lit> lits) {
    if (lits.empty()) throw std::invalid_argument("define_conjunction: empty input");
    if (lits.size() == 1) return lits[0];
    Lit a = f.new_lit();
    std::vector<Lit> cl;
    cl.reserve(lits.size() + 1);
    for (Lit l : lits) cl.push_back(~l);
    cl.push_back(a);
    f.add_clause(cl);
    return a;
}

void at_most(CnfFormula& f, std::span<const Lit> lits, int bound) {
    if (bound < 0) throw std::invalid_argument("at_most: negative bound");
    int m = (int)lits.size();
    if (bound >= m) return;
    if (bound == 0) {
        for (Lit l : lits) f.add_clause({~l});
        return;
    }
    // registers r[i][j]: among lits[0..i] at least j+1 are true (0-based j < bound)
    std::vector<std::vector<Lit>> r(m - 1, std::vector<Lit>(bound));
    for (int i = 0; i < m - 1; ++i)
        for (int j = 0; j < bound; ++j) r[i][j] = f.new_lit();
    f.add_clause({~lits[0], r[0][0]});
    for (int j = 1; j < bound; ++j) f.add_clause({~r[0][j]});
    for (int i = 1; i < m - 1; ++i) {
        f.add_clause({~lits[i], r[i][0]});
        f.add_clause({~r[i - 1][0], r[i][0]});
        for (int j = 1; j < bound; ++j) {
            f.add_clause({~lits[i], ~r[i - 1][j - 1], r[i][j]});
            f.add_clause({~r[i - 1][j], r[i][j]});
        }
        f.add_clause({~lits[i], ~r[i - 1][bound - 1]});
    }
    f.add_clause({~lits[m - 1], ~r[m - 2][bound - 1]});
}

void lex_leq(CnfFormula& f, std::span<const Lit> a, std::span<const Lit> b) {
    if (a.size() != b.size()) throw std::invalid_argument("lex_leq: length mismatch");
    if (a.empty()) return;
    int r = (int)a.size();
    f.add_clause({b[0], ~a[0]}); // position 1 ordering
    if (r == 1) return;
    std::vector<Lit> x(r - 1);
    for (int i = 0; i < r - 1; ++i) x[i] = f.new_lit();
    // x[0] <-> (a_1 = b_1)
    f.add_clause({~x[0], b[0], ~a[0]});
    f.add_clause({~x[0], a[0], ~b[0]});
    f.add_clause({x[0], ~a[0], ~b[0]});
    f.add_clause({x[0], a[0], b[0]});
    for (int i = 0; i + 1 < r - 1; ++i) {
        // x[i+1] <-> x[i] & (a_{i+2} = b_{i+2})
        f.add_clause({x[i], ~x[i + 1]});
        f.add_clause({~x[i + 1], b[i + 1], ~a[i + 1]});
        f.add_clause({~x[i + 1], a[i + 1], ~b[i + 1]});
        f.add_clause({x[i + 1], ~b[i + 1], ~a[i + 1], ~x[i]});
        f.add_clause({x[i + 1], b[i + 1], a[i + 1], ~x[i]});
    }
    for (int i = 0; i < r - 1; ++i)
        f.add_clause({~x[i], b[i + 1], ~a[i + 1]});
}

} // namespace minwise
