#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "formula.hpp"
#include "problem.hpp"

namespace pvs {

// est(K, G): all ground terms rooted at a symbol in ext_syms occurring in K
// or G, deduplicated modulo canonical form.
std::vector<Term> est(const std::vector<Clause>& K, const std::vector<Clause>& G,
                      const std::set<std::string>& ext_syms);

// K[T]: the substitution instances of K whose extension terms all lie in T.
// Clauses must be flat (extension arguments are variables, or variables plus
// integer offsets for the quasi-flat forms produced by synthesis); every
// clause variable must occur below an extension symbol, otherwise an
// InputError("non-ground instance") is raised.
std::vector<Clause> instantiate(const std::vector<Clause>& K, const std::vector<Term>& T,
                                const std::set<std::string>& ext_syms);

struct PurificationRecord {
    // fresh constant = base ground term (flattening of non-constant args)
    std::vector<std::pair<std::string, Term>> arg_defs;
    // f(c1,...,cn) = c with constant arguments
    struct FunDef {
        std::string fn;
        std::vector<std::string> args;  // constant names
        std::vector<Sort> arg_sorts;
        std::string name;               // the renaming constant
        Term term;                      // the original extension term
    };
    std::vector<FunDef> fun_defs;
    std::vector<Clause> base;  // K0 u G0: purified, extension-free clauses

    // Expands a constant through arg_defs (transitively); unknown constants
    // map to themselves.
    Term expand(const std::string& name, const Sort& sort) const;
    Term expand_term(const Term& t) const;
    std::string str() const;
};

// Bottom-up flattening and purification of ground clauses w.r.t. ext_syms:
// fresh constants for extension subterms and for non-constant base arguments
// of extension symbols. Fresh names use _p<level>_<n>.
PurificationRecord flatten_purify(const std::vector<Clause>& F,
                                  const std::set<std::string>& ext_syms, int level,
                                  Signature& sig);

// Con[G]0: one instance per unordered pair of fun_defs with the same symbol.
// Instances with premises refuted by arg-def expansion (distinct numerals,
// x vs x+1) or by strict unit facts in G are pruned; trivially-true premises
// are omitted.
std::vector<Clause> congruence_instances(const PurificationRecord& rec,
                                         const std::vector<Clause>& G);

struct FlatLinearViolation {
    std::string clause;
    std::string term;
    std::string reason;
};

// Def. 15 flatness/linearity check (non-ground variant). Empty result = ok.
std::vector<FlatLinearViolation> certify_flat_linear(const std::vector<Clause>& K,
                                                     const std::set<std::string>& ext_syms);

// Certificate validation for a level: flat/linear plus the declared class's
// clause shapes; UpdateRules side obligations (guard disjointness, form-2
// bound consistency) are discharged with the ground solver.
// Returns a list of human-readable violations (empty = certified).
std::vector<std::string> check_certificate(const ExtensionLevel& lvl, const Problem& p);

struct ReductionStep {
    int level = 0;
    std::vector<std::string> symbols;
    std::vector<Term> terms;            // T = est(K, G)
    std::vector<Clause> instances;      // K[T]
    PurificationRecord record;
    std::vector<Clause> congruences;    // Con0
};

struct ReductionResult {
    std::vector<Clause> base;  // final extension-free ground clause set
    std::vector<ReductionStep> steps;
    // merged purification data across all levels (outermost first)
    std::vector<std::pair<std::string, Term>> arg_defs;
    std::vector<PurificationRecord::FunDef> fun_defs;

    Term expand(const std::string& name, const Sort& sort) const;
    std::string trace_str() const;
};

struct LevelClauses {
    int level;
    std::set<std::string> symbols;
    std::vector<Clause> clauses;
    // extra ground terms to instantiate with (beyond est), per Algorithm 2's
    // "any T including est"
    std::vector<Term> extra_terms;
};

// Hierarchical reduction through a chain (highest level first): T := est;
// G := K[T]0 u G0 u Con0 per level. G must be ground.
ReductionResult hierarchical_reduce(const std::vector<LevelClauses>& chain,
                                    const std::vector<Clause>& G, Signature& sig);

}  // namespace pvs
