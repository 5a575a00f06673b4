#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "term.hpp"

namespace pvs {

// Arithmetic atoms are kept in moved-to-zero form: s <= 0, s < 0, s = 0,
// with s scale-normalized (leading coefficient +1; for = also sign-fixed).
// Uninterpreted predicate atoms keep their argument list.
struct Atom {
    enum class Kind { Le, Lt, Eq, Pred };
    Kind kind = Kind::Le;
    Term s;
    std::string pred;
    std::vector<Term> args;

    static Atom le(const Term& lhs, const Term& rhs);   // lhs <= rhs
    static Atom lt(const Term& lhs, const Term& rhs);   // lhs < rhs
    static Atom eq(const Term& lhs, const Term& rhs);   // lhs = rhs
    static Atom pred_atom(const std::string& p, std::vector<Term> args);

    bool is_arith() const { return kind != Kind::Pred; }
    // For constant s: definite truth value; nullopt otherwise (or Pred).
    std::optional<bool> const_value() const;

    int compare(const Atom& o) const;
    bool operator==(const Atom& o) const { return compare(o) == 0; }
    bool operator<(const Atom& o) const { return compare(o) < 0; }

    std::string str() const;
};

struct Literal {
    bool neg = false;
    Atom atom;

    // Arithmetic literals normalize negation away except for != (Eq + neg),
    // which stays and is split only where needed (DNF cubes, clause form).
    static Literal pos(const Atom& a) { return Literal{false, a}; }
    static Literal negd(const Atom& a);

    std::optional<bool> const_value() const;
    Literal negated() const;
    int compare(const Literal& o) const;
    bool operator==(const Literal& o) const { return compare(o) == 0; }
    bool operator<(const Literal& o) const { return compare(o) < 0; }
    std::string str() const;
};

// Disjunction of literals; free variables implicitly universal.
struct Clause {
    std::vector<Literal> lits;

    bool ground() const;
    void collect_vars(std::map<std::string, Sort>& out) const;
    std::string str() const;
    int compare(const Clause& o) const;
    bool operator==(const Clause& o) const { return compare(o) == 0; }
    bool operator<(const Clause& o) const { return compare(o) < 0; }
};

using Cube = std::vector<Literal>;  // conjunction of literals

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    enum class Kind { True, False, Atomic, Not, And, Or, Impl, Iff, Forall, Exists };

    struct QuantVar {
        std::string name;
        Sort sort;
    };

    Kind kind;
    Atom atom;                       // Atomic
    std::vector<FormulaPtr> kids;    // Not/And/Or/Impl/Iff
    std::vector<QuantVar> qvars;     // Forall/Exists
    FormulaPtr body;                 // Forall/Exists

    static FormulaPtr tru();
    static FormulaPtr fls();
    static FormulaPtr boolean(bool b) { return b ? tru() : fls(); }
    static FormulaPtr atomf(const Atom& a);   // folds constant atoms
    static FormulaPtr lit(const Literal& l);
    static FormulaPtr negate(FormulaPtr f);
    static FormulaPtr conj(std::vector<FormulaPtr> fs);
    static FormulaPtr disj(std::vector<FormulaPtr> fs);
    static FormulaPtr impl(FormulaPtr a, FormulaPtr b);
    static FormulaPtr iff(FormulaPtr a, FormulaPtr b);
    static FormulaPtr forall(std::vector<QuantVar> vs, FormulaPtr b);
    static FormulaPtr exists(std::vector<QuantVar> vs, FormulaPtr b);
    static FormulaPtr from_clause(const Clause& c);
    static FormulaPtr from_cube(const Cube& c);

    bool is_true() const { return kind == Kind::True; }
    bool is_false() const { return kind == Kind::False; }
    bool quantifier_free() const;
    bool ground() const;  // no free variables
    void collect_free_vars(std::map<std::string, Sort>& out) const;
    void collect_constants(std::set<std::string>& out) const;
    bool mentions_symbol(const std::string& name) const;

    int compare(const Formula& o) const;
    bool equals(const Formula& o) const { return compare(o) == 0; }
    std::string str() const;
};

// Substitution: sort-preserving map from variable names to terms.
// Bound variables are renamed as needed to avoid capture.
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& sigma);
Term substitute(const Term& t, const std::map<std::string, Term>& sigma);
Atom substitute_atom(const Atom& a, const std::map<std::string, Term>& sigma);

// Replacement of constants by terms (used by back-substitution).
FormulaPtr replace_constants(const FormulaPtr& f, const std::map<std::string, Term>& repl);

// Negation normal form. Implications/iffs expanded, negations pushed to
// literals (negated = stays as a != literal).
FormulaPtr nnf(const FormulaPtr& f);

struct ClausifyResult {
    std::vector<Clause> clauses;
    // Skolem constants introduced, in introduction order.
    std::vector<std::string> skolems;
};

// Fresh-constant Skolemization plus CNF. Existentials not under a universal
// become fresh constants registered in sig; universals become free clause
// variables. An existential nested under a universal is rejected
// (UnknownResult "nested Skolem function required").
ClausifyResult skolemize_and_clausify(const FormulaPtr& f, Signature& sig);

// Syntactic DNF of a quantifier-free formula; cubes with complementary or
// trivially false literals are pruned, duplicate literals merged.
// Throws UnknownResult("DNF blowup") beyond cube_limit.
std::vector<Cube> to_dnf(const FormulaPtr& f, size_t cube_limit = 4096);

FormulaPtr dnf_to_formula(const std::vector<Cube>& cubes);

}  // namespace pvs
