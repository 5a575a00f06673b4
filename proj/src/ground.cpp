#include "ground.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <variant>

#include "diagnostics.hpp"

namespace pvs {

std::string GroundModel::str() const {
    std::ostringstream os;
    for (auto& [n, v] : assignment) os << n << " = " << to_string(v) << "\n";
    for (auto& [m, v] : monomials)
        if (!m.is_const()) os << monomial_str(m) << " = " << to_string(v) << "\n";
    return os.str();
}

std::string fm_atom_str(const FmAtom& a) {
    const char* rel = a.rel == Atom::Kind::Le ? " <= 0" : a.rel == Atom::Kind::Lt ? " < 0" : " = 0";
    return a.s.str() + rel;
}

// ------------------------------------------------------------------ FM core

namespace {

bool dim_occurs_inside(const Monomial& dim, const Monomial& m) {
    auto term_mentions = [](const Monomial& d, const Term& t) {
        if (t.coeff_of(d) != 0) return true;
        for (auto& [q, mm] : t.monomials())
            if (dim_occurs_inside(d, mm)) return true;
        return false;
    };
    switch (m.kind()) {
        case Monomial::Kind::Var:
        case Monomial::Kind::Const:
            return false;
        case Monomial::Kind::App:
            for (auto& a : m.args())
                if (term_mentions(dim, a)) return true;
            return false;
        case Monomial::Kind::Prod:
            for (auto& f : m.factors())
                if (term_mentions(dim, f)) return true;
            return false;
    }
    return false;
}

std::optional<bool> atom_const_value(const FmAtom& a) {
    if (!a.s.is_rational()) return std::nullopt;
    const Rational& c = a.s.constant_part();
    switch (a.rel) {
        case Atom::Kind::Le: return c <= 0;
        case Atom::Kind::Lt: return c < 0;
        case Atom::Kind::Eq: return c == 0;
        default: return std::nullopt;
    }
}

const FmAtom kFalseAtom{Atom::Kind::Lt, Term()};  // 0 < 0

// Substitute dim := t into atoms; trivially-true atoms dropped. Returns
// nullopt when a contradiction arises.
std::optional<std::vector<FmAtom>> substitute_dim(const std::vector<FmAtom>& atoms,
                                                  const Monomial& dim, const Term& t) {
    std::map<Monomial, Term> repl{{dim, t}};
    std::vector<FmAtom> out;
    for (auto& a : atoms) {
        FmAtom b{a.rel, a.s.replace(repl)};
        if (auto v = atom_const_value(b)) {
            if (!*v) return std::nullopt;
            continue;
        }
        out.push_back(std::move(b));
    }
    return out;
}

struct Bound {
    Term t;
    bool strict;
};

size_t occurrences(const std::vector<FmAtom>& atoms, const Monomial& dim) {
    size_t n = 0;
    for (auto& a : atoms)
        if (a.s.coeff_of(dim) != 0) ++n;
    return n;
}

void dedup_atoms(std::vector<FmAtom>& atoms) {
    std::sort(atoms.begin(), atoms.end(), [](const FmAtom& a, const FmAtom& b) {
        if (a.rel != b.rel) return a.rel < b.rel;
        return a.s < b.s;
    });
    atoms.erase(std::unique(atoms.begin(), atoms.end(),
                            [](const FmAtom& a, const FmAtom& b) {
                                return a.rel == b.rel && a.s == b.s;
                            }),
                atoms.end());
}

// One FM round for a single dimension on <=, <, = atoms. Resolvents are
// strict iff either parent is strict. Returns nullopt on contradiction.
std::optional<std::vector<FmAtom>> eliminate_dim(const std::vector<FmAtom>& atoms,
                                                 const Monomial& dim, FmTrace* trace) {
    std::vector<Bound> lowers, uppers;
    std::vector<FmAtom> rest;
    for (auto& a : atoms) {
        Rational q = a.s.coeff_of(dim);
        if (q == 0) {
            rest.push_back(a);
            continue;
        }
        Term b = a.s.without(dim).scaled(Rational(-1) / q);
        bool strict = a.rel == Atom::Kind::Lt;
        if (a.rel == Atom::Kind::Eq) {
            lowers.push_back({b, false});
            uppers.push_back({b, false});
        } else if (q > 0) {
            uppers.push_back({b, strict});
        } else {
            lowers.push_back({b, strict});
        }
    }
    size_t produced = 0;
    for (auto& lo : lowers)
        for (auto& up : uppers) {
            FmAtom r{lo.strict || up.strict ? Atom::Kind::Lt : Atom::Kind::Le, lo.t - up.t};
            if (auto v = atom_const_value(r)) {
                if (!*v) {
                    if (trace)
                        trace->steps.push_back({monomial_str(dim), lowers.size(), uppers.size(), 1});
                    return std::nullopt;
                }
                continue;
            }
            rest.push_back(std::move(r));
            ++produced;
        }
    if (trace) trace->steps.push_back({monomial_str(dim), lowers.size(), uppers.size(), produced});
    return rest;
}

void check_dim_supported(const Monomial& dim, const std::vector<FmAtom>& atoms) {
    for (auto& a : atoms)
        for (auto& [q, m] : a.s.monomials())
            if (dim_occurs_inside(dim, m))
                throw UnknownResult("nonlinear elimination unsupported: " + monomial_str(dim) +
                                    " occurs inside " + monomial_str(m));
}

std::optional<Rational> eval_term(const Term& t, const std::map<Monomial, Rational>& vals);

std::optional<Rational> eval_monomial(const Monomial& m,
                                      const std::map<Monomial, Rational>& vals) {
    auto it = vals.find(m);
    if (it != vals.end()) return it->second;
    if (m.is_prod()) {
        Rational r = 1;
        for (auto& f : m.factors()) {
            auto v = eval_term(f, vals);
            if (!v) return std::nullopt;
            r *= *v;
        }
        return r;
    }
    return std::nullopt;
}

std::optional<Rational> eval_term(const Term& t, const std::map<Monomial, Rational>& vals) {
    Rational r = t.constant_part();
    for (auto& [q, m] : t.monomials()) {
        auto v = eval_monomial(m, vals);
        if (!v) return std::nullopt;
        r += q * *v;
    }
    return r;
}

}  // namespace

std::vector<Monomial> fm_dimensions(const std::vector<FmAtom>& atoms) {
    std::set<Monomial> dims;
    for (auto& a : atoms)
        for (auto& [q, m] : a.s.monomials()) dims.insert(m);
    return std::vector<Monomial>(dims.begin(), dims.end());
}

FmAtom tighten_int(const FmAtom& a) {
    if (a.rel == Atom::Kind::Eq) return a;
    if (a.s.monomials().empty()) return a;
    for (auto& [q, m] : a.s.monomials())
        if (m.sort().kind != SortKind::Int) return a;
    // scale to integer coefficients, divide by their gcd
    Integer l = 1;
    for (auto& [q, m] : a.s.monomials()) l = lcm(l, den(q));
    Term scaled = a.s.scaled(Rational(l));
    Integer g = 0;
    for (auto& [q, m] : scaled.monomials()) g = gcd(g, num(q));
    if (g == 0) return a;
    Term reduced = scaled.scaled(Rational(1) / Rational(g));
    // integer-valued body <= rhs tightens to body <= floor(rhs);
    // strict body < rhs tightens to body <= ceil(rhs)-1
    Rational c = reduced.constant_part();
    Term body = reduced - Term::rational(c, reduced.sort());
    Rational rhs = -c;
    Rational new_rhs =
        a.rel == Atom::Kind::Lt ? (is_integer(rhs) ? rhs - 1 : rat_floor(rhs)) : rat_floor(rhs);
    return FmAtom{Atom::Kind::Le, body - Term::rational(new_rhs, body.sort())};
}

std::vector<FmAtom> fm_project(std::vector<FmAtom> atoms, const std::vector<Monomial>& dims,
                               FmTrace* trace) {
    {
        std::vector<FmAtom> kept;
        for (auto& a : atoms) {
            if (auto v = atom_const_value(a)) {
                if (!*v) return {kFalseAtom};
                continue;
            }
            kept.push_back(a);
        }
        atoms = std::move(kept);
    }
    for (auto& d : dims) check_dim_supported(d, atoms);
    std::vector<Monomial> remaining = dims;

    while (!remaining.empty()) {
        // equalities first: substitute the smallest eliminable dimension that
        // occurs in an equality
        bool substituted = false;
        for (auto it = remaining.begin(); it != remaining.end(); ++it) {
            for (auto& a : atoms) {
                if (a.rel != Atom::Kind::Eq) continue;
                Rational q = a.s.coeff_of(*it);
                if (q == 0) continue;
                Term rhs = a.s.without(*it).scaled(Rational(-1) / q);
                auto next = substitute_dim(atoms, *it, rhs);
                if (trace) trace->steps.push_back({monomial_str(*it), 1, 1, 0});
                if (!next) return {kFalseAtom};
                atoms = std::move(*next);
                remaining.erase(it);
                substituted = true;
                break;
            }
            if (substituted) break;
        }
        if (substituted) continue;

        std::stable_sort(remaining.begin(), remaining.end(),
                         [&](const Monomial& x, const Monomial& y) {
                             size_t ox = occurrences(atoms, x), oy = occurrences(atoms, y);
                             if (ox != oy) return ox < oy;
                             return x < y;
                         });
        Monomial d = remaining.front();
        remaining.erase(remaining.begin());
        auto next = eliminate_dim(atoms, d, trace);
        if (!next) return {kFalseAtom};
        atoms = std::move(*next);
        dedup_atoms(atoms);
    }
    return atoms;
}

// ----------------------------------------------------------------- fm_solve

namespace {

struct SubstEntry {
    Monomial dim;
    Term rhs;
};
struct ElimEntry {
    Monomial dim;
    std::vector<FmAtom> atoms_before;
};
using StackEntry = std::variant<SubstEntry, ElimEntry>;

FmSolveResult fm_solve_rec(const std::vector<FmAtom>& input, int branch_depth, int depth) {
    std::vector<FmAtom> atoms;
    for (auto& a : input) {
        FmAtom t = tighten_int(a);
        if (auto v = atom_const_value(t)) {
            if (!*v) return {SatStatus::Unsat, {}, ""};
            continue;
        }
        atoms.push_back(t);
    }

    std::vector<StackEntry> stack;
    while (true) {
        // equality substitution: smallest monomial-order dimension first
        std::optional<std::pair<Monomial, Term>> subst;
        for (auto& a : atoms) {
            if (a.rel != Atom::Kind::Eq) continue;
            for (auto& [q, m] : a.s.monomials()) {
                Term rhs = a.s.without(m).scaled(Rational(-1) / q);
                if (!subst || m < subst->first) subst = {m, rhs};
            }
        }
        if (subst) {
            auto next = substitute_dim(atoms, subst->first, subst->second);
            if (!next) return {SatStatus::Unsat, {}, ""};
            stack.push_back(SubstEntry{subst->first, subst->second});
            atoms = std::move(*next);
            continue;
        }

        std::vector<Monomial> dims = fm_dimensions(atoms);
        if (dims.empty()) break;
        std::stable_sort(dims.begin(), dims.end(), [&](const Monomial& x, const Monomial& y) {
            size_t ox = occurrences(atoms, x), oy = occurrences(atoms, y);
            if (ox != oy) return ox < oy;
            return x < y;
        });
        Monomial d = dims.front();
        stack.push_back(ElimEntry{d, atoms});
        auto next = eliminate_dim(atoms, d, nullptr);
        if (!next) return {SatStatus::Unsat, {}, ""};
        atoms = std::move(*next);
        {
            std::vector<FmAtom> kept;
            for (auto& a : atoms) {
                FmAtom t = tighten_int(a);
                if (auto v = atom_const_value(t)) {
                    if (!*v) return {SatStatus::Unsat, {}, ""};
                    continue;
                }
                kept.push_back(t);
            }
            atoms = std::move(kept);
        }
        dedup_atoms(atoms);
    }

    // residual constants were all checked; feasible — extract a model
    std::map<Monomial, Rational> model;
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        if (auto* se = std::get_if<SubstEntry>(&*it)) {
            auto v = eval_term(se->rhs, model);
            if (!v) throw InternalError("fm back-substitution: unresolved equality rhs");
            model[se->dim] = *v;
            continue;
        }
        auto& ee = std::get<ElimEntry>(*it);
        std::optional<Rational> lo, hi;
        bool lo_strict = false, hi_strict = false;
        for (auto& a : ee.atoms_before) {
            Rational q = a.s.coeff_of(ee.dim);
            if (q == 0) continue;
            auto rv = eval_term(a.s.without(ee.dim), model);
            if (!rv) throw InternalError("fm back-substitution: unresolved bound");
            Rational bound = -*rv / q;
            bool strict = a.rel == Atom::Kind::Lt;
            if (q > 0) {
                if (!hi || bound < *hi || (bound == *hi && strict)) {
                    hi = bound;
                    hi_strict = strict;
                }
            } else {
                if (!lo || bound > *lo || (bound == *lo && strict)) {
                    lo = bound;
                    lo_strict = strict;
                }
            }
        }
        Rational v = 0;
        if (lo && hi) {
            v = *lo == *hi ? *lo : (*lo + *hi) / 2;
            // prefer an integral point when the interval allows one
            if (!is_integer(v)) {
                Rational cand = rat_floor(*hi);
                bool ok_hi = cand < *hi || (cand == *hi && !hi_strict);
                bool ok_lo = cand > *lo || (cand == *lo && !lo_strict);
                if (ok_hi && ok_lo) v = cand;
            }
        } else if (lo) {
            v = rat_floor(*lo) + 1;
        } else if (hi) {
            v = rat_ceil(*hi) - 1;
        }
        model[ee.dim] = v;
    }

    // integrality of int-sorted dimensions; bounded branch-and-bound
    for (auto& [m, v] : model) {
        if (m.sort().kind != SortKind::Int || is_integer(v)) continue;
        if (depth >= branch_depth) return {SatStatus::Unknown, {}, "integrality undecided"};
        std::vector<FmAtom> left = input;
        left.push_back(FmAtom{Atom::Kind::Le,
                              Term::monomial(1, m) - Term::rational(rat_floor(v), int_sort())});
        auto r = fm_solve_rec(left, branch_depth, depth + 1);
        if (r.status != SatStatus::Unsat) return r;
        std::vector<FmAtom> right = input;
        right.push_back(FmAtom{Atom::Kind::Le,
                               Term::rational(rat_ceil(v), int_sort()) - Term::monomial(1, m)});
        return fm_solve_rec(right, branch_depth, depth + 1);
    }

    FmSolveResult res;
    res.status = SatStatus::Sat;
    for (auto& [m, v] : model) res.model.push_back({m, v});
    return res;
}

}  // namespace

FmSolveResult fm_solve(const std::vector<FmAtom>& atoms, int branch_depth) {
    return fm_solve_rec(atoms, branch_depth, 0);
}

// ------------------------------------------------------------ ground solver

namespace {

struct CubeView {
    std::vector<FmAtom> arith;
    std::map<std::string, bool> preds;
    std::vector<Literal> arith_lits;
    bool contradictory = false;
};

CubeView view_cube(const Cube& cube) {
    CubeView v;
    for (auto& l : cube) {
        if (l.atom.kind == Atom::Kind::Pred) {
            std::string key = l.atom.str();
            auto it = v.preds.find(key);
            if (it != v.preds.end() && it->second != !l.neg) {
                v.contradictory = true;
                return v;
            }
            v.preds[key] = !l.neg;
            continue;
        }
        if (l.neg) throw InternalError("negative arithmetic literal in cube");
        v.arith.push_back(FmAtom{l.atom.kind, l.atom.s});
        v.arith_lits.push_back(l);
    }
    return v;
}

bool model_nonlinear_consistent(const std::vector<std::pair<Monomial, Rational>>& model) {
    std::map<Monomial, Rational> vals;
    for (auto& [m, v] : model) vals[m] = v;
    for (auto& [m, v] : model) {
        if (!m.is_prod()) continue;
        Rational r = 1;
        bool all = true;
        for (auto& f : m.factors()) {
            auto fv = eval_term(f, vals);
            if (!fv) {
                all = false;
                break;
            }
            r *= *fv;
        }
        if (all && r != v) return false;
    }
    return true;
}

}  // namespace

SatResult check_ground_sat(const FormulaPtr& phi, const SolverLimits& limits) {
    if (!phi->ground()) throw InternalError("check_ground_sat: free variables in input");
    std::vector<Cube> cubes;
    try {
        cubes = to_dnf(phi, limits.cube_limit);
    } catch (const UnknownResult& u) {
        return SatResult::unknown(u.reason());
    }
    bool any_unknown = false;
    std::string unknown_reason;
    for (auto& cube : cubes) {
        CubeView v = view_cube(cube);
        if (v.contradictory) continue;
        FmSolveResult r;
        try {
            r = fm_solve(v.arith, limits.branch_depth);
        } catch (const UnknownResult& u) {
            any_unknown = true;
            unknown_reason = u.reason();
            continue;
        }
        if (r.status == SatStatus::Unknown) {
            any_unknown = true;
            unknown_reason = r.reason;
            continue;
        }
        if (r.status == SatStatus::Unsat) continue;
        if (!model_nonlinear_consistent(r.model)) {
            // never report a spurious countermodel
            any_unknown = true;
            unknown_reason = "nonlinear monomial assignment inconsistent";
            continue;
        }
        GroundModel m;
        for (auto& [mono, val] : r.model) {
            if (mono.is_const()) m.assignment[mono.name()] = val;
            m.monomials.push_back({mono, val});
        }
        // soundness assertion on the arithmetic part of the cube
        FormulaPtr cf = Formula::from_cube(v.arith_lits);
        if (!evaluate(cf, m)) throw InternalError("SAT model fails to satisfy its cube");
        return SatResult::sat(std::move(m));
    }
    if (any_unknown) return SatResult::unknown(unknown_reason);
    return SatResult::unsat();
}

SatResult check_ground_sat(const std::vector<Clause>& clauses, const SolverLimits& limits) {
    std::vector<FormulaPtr> fs;
    for (auto& c : clauses) fs.push_back(Formula::from_clause(c));
    return check_ground_sat(Formula::conj(std::move(fs)), limits);
}

std::optional<bool> entails(const FormulaPtr& gamma, const FormulaPtr& phi,
                            const SolverLimits& limits) {
    SatResult r = check_ground_sat(Formula::conj({gamma, Formula::negate(phi)}), limits);
    if (r.status == SatStatus::Unknown) return std::nullopt;
    return r.status == SatStatus::Unsat;
}

bool evaluate(const FormulaPtr& phi, const GroundModel& m) {
    std::map<Monomial, Rational> vals;
    for (auto& [mono, v] : m.monomials) vals[mono] = v;
    for (auto& [name, v] : m.assignment) vals[Monomial::constant(name, real_sort())] = v;

    std::function<bool(const FormulaPtr&)> go = [&](const FormulaPtr& f) -> bool {
        switch (f->kind) {
            case Formula::Kind::True: return true;
            case Formula::Kind::False: return false;
            case Formula::Kind::Atomic: {
                const Atom& a = f->atom;
                if (a.kind == Atom::Kind::Pred)
                    throw InternalError("evaluate: uninterpreted predicate atom");
                auto v = eval_term(a.s, vals);
                if (!v) throw InternalError("evaluate: unassigned monomial in " + a.s.str());
                switch (a.kind) {
                    case Atom::Kind::Le: return *v <= 0;
                    case Atom::Kind::Lt: return *v < 0;
                    case Atom::Kind::Eq: return *v == 0;
                    default: return false;
                }
            }
            case Formula::Kind::Not: return !go(f->kids[0]);
            case Formula::Kind::And:
                for (auto& k : f->kids)
                    if (!go(k)) return false;
                return true;
            case Formula::Kind::Or:
                for (auto& k : f->kids)
                    if (go(k)) return true;
                return false;
            case Formula::Kind::Impl: return !go(f->kids[0]) || go(f->kids[1]);
            case Formula::Kind::Iff: return go(f->kids[0]) == go(f->kids[1]);
            default:
                throw InternalError("evaluate: quantified formula");
        }
    };
    return go(phi);
}

}  // namespace pvs
