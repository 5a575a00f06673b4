#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "formula.hpp"

namespace pvs {

// Exact rational assignment to the constants (and atomized nonlinear
// monomials) of a satisfied cube.
struct GroundModel {
    std::map<std::string, Rational> assignment;           // constants
    std::vector<std::pair<Monomial, Rational>> monomials;  // atomized products/apps

    std::optional<Rational> value_of(const std::string& name) const {
        auto it = assignment.find(name);
        if (it == assignment.end()) return std::nullopt;
        return it->second;
    }
    std::string str() const;
};

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
    SatStatus status = SatStatus::Unknown;
    std::optional<GroundModel> model;
    std::string reason;  // for Unknown

    static SatResult sat(GroundModel m) { return {SatStatus::Sat, std::move(m), ""}; }
    static SatResult unsat() { return {SatStatus::Unsat, std::nullopt, ""}; }
    static SatResult unknown(std::string why) { return {SatStatus::Unknown, std::nullopt, std::move(why)}; }
};

struct SolverLimits {
    size_t cube_limit = 4096;
    int branch_depth = 8;
};

// Satisfiability of an extension-free ground formula over linear real
// arithmetic; nonlinear monomials are atomized, integer-sorted constants get
// bound tightening plus bounded branch-and-bound.
SatResult check_ground_sat(const FormulaPtr& phi, const SolverLimits& limits = {});
SatResult check_ground_sat(const std::vector<Clause>& clauses, const SolverLimits& limits = {});

// Gamma |= phi, i.e. check_ground_sat(Gamma and not phi) = UNSAT.
// Returns nullopt on Unknown.
std::optional<bool> entails(const FormulaPtr& gamma, const FormulaPtr& phi,
                            const SolverLimits& limits = {});

// Exact evaluation of a quantifier-free ground formula under a model
// (atomized monomials evaluated from the model's monomial table; product
// monomials recomputed from factors when possible).
bool evaluate(const FormulaPtr& phi, const GroundModel& m);

// ------------------------------------------------------------------ FM core

// A cube as a list of arithmetic constraints s rel 0 plus opaque predicate
// literals. Shared between the ground solver and the QE engine.
struct FmAtom {
    Atom::Kind rel;  // Le, Lt or Eq
    Term s;
};

struct FmTrace {
    // per eliminated dimension: (dimension, #lowers, #uppers, #resolvents)
    std::vector<std::tuple<std::string, size_t, size_t, size_t>> steps;
};

// Eliminates the given dimensions (monomials) from a conjunction of atoms.
// Dimensions must not occur inside App arguments or Prod factors of the
// atoms (caller guarantees; checked). Equalities involving a dimension are
// substituted first. Returns the projected atom set; trivially-true atoms
// dropped. Throws UnknownResult on unsupported nonlinear occurrences.
std::vector<FmAtom> fm_project(std::vector<FmAtom> atoms, const std::vector<Monomial>& dims,
                               FmTrace* trace = nullptr);

// Feasibility of a conjunction over all its dimensions, with rational model
// extraction via back-substitution. int_dims lists dimensions that must be
// integral in the model (branch-and-bound applied).
struct FmSolveResult {
    SatStatus status;
    std::vector<std::pair<Monomial, Rational>> model;
    std::string reason;
};
FmSolveResult fm_solve(const std::vector<FmAtom>& atoms, int branch_depth = 8);

// Collects the dimensions (monomials) of an atom set in canonical order.
std::vector<Monomial> fm_dimensions(const std::vector<FmAtom>& atoms);

// Integer bound tightening: for atoms whose monomials are all int-sorted
// with integer coefficients, strict bounds become non-strict tightened ones
// and fractional constants are floored.
FmAtom tighten_int(const FmAtom& a);

std::string fm_atom_str(const FmAtom& a);

}  // namespace pvs
