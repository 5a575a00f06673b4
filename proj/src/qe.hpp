#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ground.hpp"

namespace pvs {

struct QeOptions {
    size_t cube_limit = 4096;
    FmTrace* trace = nullptr;
};

// exists vars . psi for a conjunction of linear atoms; each eliminated
// variable must occur linearly with rational coefficients (never inside a
// nonlinear monomial or an uninterpreted application). Equalities are
// substituted first, then FM resolvents for <=,< pairs. The variables are
// given as monomials (variables or constants regarded as such).
FormulaPtr eliminate_exists(const std::vector<Monomial>& vars, const Cube& psi,
                            const QeOptions& opts = {});

// Quantifier elimination for an arbitrary formula: innermost blocks first,
// forall as not-exists-not, DNF between blocks. Quantifier-free input is
// returned unchanged (up to normalization).
FormulaPtr eliminate(const FormulaPtr& phi, const QeOptions& opts = {});

// Assumption-aware simplification: atoms entailed by gamma0 are dropped,
// atoms contradicting gamma0 become false, subsumed disjuncts/conjuncts
// removed. Inside universally quantified clauses the premise set includes
// the clause's other literals. Best effort; gamma0 |= (phi <-> result).
FormulaPtr simplify(const FormulaPtr& phi, const std::vector<FormulaPtr>& gamma0,
                    const SolverLimits& limits = {});

// Simplification of a universally closed constraint (conjunction of
// forall-clauses): per-clause literal pruning under gamma0 + the other
// literals' negations, positive-factor cancellation, vacuous universal
// elimination, clause subsumption.
FormulaPtr simplify_constraint(const FormulaPtr& constraint,
                               const std::vector<FormulaPtr>& gamma0,
                               const std::vector<Clause>& gamma_sigma = {},
                               const SolverLimits& limits = {});

}  // namespace pvs
