#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "formula.hpp"

namespace pvs {

// Locality certificates declared per level. The tool checks the declared
// class syntactically (flat/linear plus the class's clause shapes) and
// trusts locality from there.
enum class CertificateKind {
    FreeFunctions,
    GuardedBounded,
    Monotone,
    UpdateRules,
    Convexity,
    LinearCombinationBounds,
    UserAsserted,
};

std::string certificate_name(CertificateKind k);
std::optional<CertificateKind> certificate_from_name(const std::string& s);

struct ExtensionLevel {
    int level = 0;  // 1-based position in the chain
    std::vector<std::string> symbols;
    std::vector<Clause> clauses;
    CertificateKind certificate = CertificateKind::FreeFunctions;
    bool waiver = false;  // UserAsserted with explicit flat/linear waiver
    std::string waiver_reason;
};

struct UpdateRule {
    std::string name;
    FormulaPtr formula;  // over V, Sigma, V', Sigma'
};

struct TransitionSystem {
    std::vector<std::string> vars;   // V: updatable state variables
    std::vector<std::string> funcs;  // Sigma: updatable functions
    FormulaPtr init;                 // may be null when no init block
    std::vector<UpdateRule> updates;
};

enum class HybridKind { LHA, PLHA, PHA };

struct FlowOde {
    std::string var;  // single continuous variable
    Term rhs;         // expression over the continuous var and parameter
                      // functions applied at the reserved time symbol `t`
};

struct Mode {
    std::string name;
    FormulaPtr invariant;          // over X (and parameter functions at `t`)
    FormulaPtr init;               // may be null
    std::vector<FormulaPtr> flow;  // LHA/PLHA: non-strict linear atoms over der(x)
    std::optional<FlowOde> ode;    // PHA
};

struct Edge {
    std::string from, to;
    FormulaPtr guard;
    FormulaPtr jump;  // over X and X'
};

struct HybridAutomaton {
    HybridKind kind = HybridKind::LHA;
    std::vector<std::string> vars;  // X
    std::vector<Mode> modes;
    std::vector<Edge> edges;
    int mean_value_points = 2;  // PHA `points n;` directive
};

struct Problem {
    std::string name;
    Signature sig;
    // LRA when no int-sorted symbols are declared, otherwise the mixed
    // combination; informational.
    bool mixed_int = false;

    std::vector<ExtensionLevel> chain;
    std::vector<std::string> params;

    std::optional<TransitionSystem> transition;
    std::optional<HybridAutomaton> hybrid;

    FormulaPtr invariant;                 // candidate invariant Phi (may be null)
    std::vector<FormulaPtr> gamma0;       // ground assumptions over parameters
    std::vector<Clause> gamma_sigma;      // clause assumptions over functional parameters
    FormulaPtr goal;                      // pure entailment mode (may be null)
    std::vector<std::string> keep;        // constants to keep during synthesis
    int case_override = 0;                // 0 = auto

    bool is_param(const std::string& name) const {
        for (auto& p : params)
            if (p == name) return true;
        return false;
    }

    const ExtensionLevel* level_of_symbol(const std::string& name) const {
        for (auto& l : chain)
            for (auto& s : l.symbols)
                if (s == name) return &l;
        return nullptr;
    }
};

}  // namespace pvs
