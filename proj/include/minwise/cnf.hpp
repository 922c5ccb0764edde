#pragma once

#include <span>
#include <string>
#include <vector>

namespace minwise {

// Literal over variables 1..var_count, or a boolean constant. Constants are
// folded away by CnfFormula::add_clause before anything reaches the clause DB.
class Lit {
public:
    Lit() : code_(0) {}
    static Lit of_var(int var, bool neg = false) { return Lit(2 * var + (neg ? 1 : 0)); }
    static Lit constant(bool value) { return Lit(value ? 1 : 0); }

    bool is_const() const { return code_ < 2; }
    bool const_value() const { return code_ == 1; }
    int var() const { return code_ / 2; }
    bool neg() const { return code_ & 1; }
    int dimacs() const { return neg() ? -var() : var(); }

    Lit operator~() const { return Lit(code_ ^ 1); }
    bool operator==(const Lit&) const = default;

private:
    explicit Lit(int code) : code_(code) {}
    int code_;
};

struct CnfFormula {
    int var_count = 0;
    std::vector<std::vector<int>> clauses; // DIMACS literals, no zeros
    bool trivially_false = false;          // an all-constant-false clause was added
    std::vector<std::pair<std::string, int>> annotations; // semantic name -> var

    int new_var();
    int new_var(const std::string& name);
    Lit new_lit() { return Lit::of_var(new_var()); }

    // Folds constants: a true literal drops the clause, false literals drop out.
    // A clause that folds to empty sets trivially_false and stores the empty clause.
    void add_clause(std::span<const Lit> lits);
    void add_clause(std::initializer_list<Lit> lits) {
        add_clause(std::span<const Lit>(lits.begin(), lits.size()));
    }
};

// Fresh a with the single clause (~l_1 | ... | ~l_m | a): conjunction implies a,
// nothing constrains a downward. Enough for upper cardinality bounds. A single
// literal is returned unchanged, no clause.
Lit define_conjunction(CnfFormula& f, std::span<const Lit> lits);

// Sequential counter: at most `bound` of lits are true. bound >= size emits
// nothing, bound 0 emits unit negations. Arc-consistent, deterministic layout.
void at_most(CnfFormula& f, std::span<const Lit> lits, int bound);

// Lexicographic a <= b over equal-length tuples (constants allowed).
// Prefix-equality chain x_i <-> (a_1=b_1 & ... & a_i=b_i) over fresh vars
// x_1..x_{r-1}, ordering clauses (b_1 | ~a_1) and (~x_i | b_{i+1} | ~a_{i+1}).
void lex_leq(CnfFormula& f, std::span<const Lit> a, std::span<const Lit> b);

} // namespace minwise
