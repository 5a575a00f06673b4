#include "locality.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "ground.hpp"
#include "printer.hpp"

namespace pvs {

// --------------------------------------------------------------------- est

namespace {

void collect_ext_terms(const Term& t, const std::set<std::string>& ext_syms,
                       std::set<Term>& out) {
    for (auto& [q, m] : t.monomials()) {
        switch (m.kind()) {
            case Monomial::Kind::Var:
                break;
            case Monomial::Kind::Const:
                if (ext_syms.count(m.name())) out.insert(Term::monomial(1, m));
                break;
            case Monomial::Kind::App:
                if (ext_syms.count(m.name())) {
                    Term whole = Term::monomial(1, m);
                    if (whole.ground()) out.insert(whole);
                }
                for (auto& a : m.args()) collect_ext_terms(a, ext_syms, out);
                break;
            case Monomial::Kind::Prod:
                for (auto& f : m.factors()) collect_ext_terms(f, ext_syms, out);
                break;
        }
    }
}

void collect_ext_terms(const Clause& c, const std::set<std::string>& ext_syms,
                       std::set<Term>& out) {
    for (auto& l : c.lits) {
        if (l.atom.is_arith()) collect_ext_terms(l.atom.s, ext_syms, out);
        for (auto& a : l.atom.args) collect_ext_terms(a, ext_syms, out);
    }
}

}  // namespace

std::vector<Term> est(const std::vector<Clause>& K, const std::vector<Clause>& G,
                      const std::set<std::string>& ext_syms) {
    std::set<Term> out;
    for (auto& c : K) collect_ext_terms(c, ext_syms, out);
    for (auto& c : G) collect_ext_terms(c, ext_syms, out);
    return std::vector<Term>(out.begin(), out.end());
}

// -------------------------------------------------------------- instantiate

namespace {

// An extension occurrence f(a1,...,an) with (possibly) variable arguments.
struct ExtOcc {
    std::string fn;
    std::vector<Term> args;
};

void collect_ext_occs(const Term& t, const std::set<std::string>& ext_syms,
                      std::vector<ExtOcc>& out) {
    for (auto& [q, m] : t.monomials()) {
        switch (m.kind()) {
            case Monomial::Kind::App:
                if (ext_syms.count(m.name())) out.push_back({m.name(), m.args()});
                for (auto& a : m.args()) collect_ext_occs(a, ext_syms, out);
                break;
            case Monomial::Kind::Prod:
                for (auto& f : m.factors()) collect_ext_occs(f, ext_syms, out);
                break;
            default:
                break;
        }
    }
}

// Matches pattern argument `pat` (ground, a single variable, or a variable
// plus a rational offset) against ground term `g`. Extends sigma; returns
// false on conflict or unsupported pattern.
bool match_arg(const Term& pat, const Term& g, std::map<std::string, Term>& sigma) {
    if (pat.ground()) return pat == g;
    std::map<std::string, Sort> vars;
    pat.collect_vars(vars);
    if (vars.size() != 1) return false;
    auto [vname, vsort] = *vars.begin();
    Monomial vm = Monomial::var(vname, vsort);
    Rational q = pat.coeff_of(vm);
    if (q == 0) return false;  // variable buried inside an app/product
    Term rest = pat.without(vm);
    if (!rest.ground()) return false;
    // q*v + rest = g  =>  v = (g - rest)/q
    Term sol = (g - rest).scaled(Rational(1) / q);
    if (vsort.kind == SortKind::Int && sol.is_rational() && !is_integer(sol.constant_part()))
        return false;
    auto it = sigma.find(vname);
    if (it != sigma.end()) return it->second == sol;
    sigma.emplace(vname, sol);
    return true;
}

Clause apply_subst(const Clause& c, const std::map<std::string, Term>& sigma) {
    Clause out;
    for (auto& l : c.lits) {
        Literal nl{l.neg, substitute_atom(l.atom, sigma)};
        out.lits.push_back(nl);
    }
    // tidy: drop false literals, detect tautology
    Clause tidy;
    for (auto& l : out.lits) {
        auto v = l.const_value();
        if (v && !*v) continue;
        if (v && *v) return Clause{{Literal::pos(Atom::le(Term(), Term()))}};  // 0<=0: true
        tidy.lits.push_back(l);
    }
    std::sort(tidy.lits.begin(), tidy.lits.end());
    tidy.lits.erase(std::unique(tidy.lits.begin(), tidy.lits.end()), tidy.lits.end());
    return tidy;
}

bool clause_is_trivially_true(const Clause& c) {
    for (auto& l : c.lits) {
        auto v = l.const_value();
        if (v && *v) return true;
        for (auto& l2 : c.lits)
            if (l2 == l.negated()) return true;
    }
    return false;
}

}  // namespace

std::vector<Clause> instantiate(const std::vector<Clause>& K, const std::vector<Term>& T_in,
                                const std::set<std::string>& ext_syms) {
    std::vector<Term> T = T_in;
    std::sort(T.begin(), T.end());
    T.erase(std::unique(T.begin(), T.end()), T.end());
    // candidate terms by symbol
    std::map<std::string, std::vector<const Monomial*>> by_symbol;
    for (auto& t : T) {
        if (!t.is_plain_monomial()) throw InternalError("instantiate: T must contain plain terms");
        by_symbol[t.the_monomial().name()].push_back(&t.the_monomial());
    }

    std::set<Clause> out;
    for (auto& c : K) {
        std::map<std::string, Sort> cvars;
        c.collect_vars(cvars);
        std::vector<ExtOcc> occs;
        for (auto& l : c.lits) {
            if (l.atom.is_arith()) collect_ext_occs(l.atom.s, ext_syms, occs);
            for (auto& a : l.atom.args) collect_ext_occs(a, ext_syms, occs);
        }
        // dedup occurrences
        {
            std::vector<ExtOcc> uniq;
            for (auto& o : occs) {
                bool seen = false;
                for (auto& u : uniq)
                    if (u.fn == o.fn && u.args.size() == o.args.size()) {
                        bool same = true;
                        for (size_t i = 0; i < u.args.size(); ++i)
                            if (u.args[i] != o.args[i]) same = false;
                        if (same) seen = true;
                    }
                if (!seen) uniq.push_back(o);
            }
            occs = std::move(uniq);
        }
        // variables must all occur below extension symbols
        {
            std::map<std::string, Sort> covered;
            for (auto& o : occs)
                for (auto& a : o.args) a.collect_vars(covered);
            for (auto& [v, s] : cvars)
                if (!covered.count(v))
                    throw InputError("non-ground instance: variable " + v +
                                     " occurs under no extension symbol in clause: " + c.str());
        }

        // enumerate candidate bindings per occurrence
        std::function<void(size_t, std::map<std::string, Term>)> go =
            [&](size_t idx, std::map<std::string, Term> sigma) {
                if (idx == occs.size()) {
                    Clause inst = apply_subst(c, sigma);
                    if (!inst.ground()) return;
                    // all extension terms of the instance must lie in T
                    std::set<Term> ets;
                    collect_ext_terms(inst, ext_syms, ets);
                    for (auto& t : ets)
                        if (!std::binary_search(T.begin(), T.end(), t)) return;
                    if (!clause_is_trivially_true(inst)) out.insert(inst);
                    return;
                }
                const ExtOcc& o = occs[idx];
                auto it = by_symbol.find(o.fn);
                if (it == by_symbol.end()) return;
                for (const Monomial* cand : it->second) {
                    if (cand->args().size() != o.args.size()) continue;
                    std::map<std::string, Term> s2 = sigma;
                    bool ok = true;
                    for (size_t i = 0; i < o.args.size() && ok; ++i) {
                        // substitute already-bound variables into the pattern
                        Term pat = substitute(o.args[i], s2);
                        ok = match_arg(pat, cand->args()[i], s2);
                    }
                    if (ok) go(idx + 1, std::move(s2));
                }
            };
        go(0, {});
    }
    return std::vector<Clause>(out.begin(), out.end());
}

// ----------------------------------------------------------- flatten_purify

Term PurificationRecord::expand(const std::string& name, const Sort& sort) const {
    for (auto& [n, t] : arg_defs)
        if (n == name) return expand_term(t);
    return Term::constant(name, sort);
}

Term PurificationRecord::expand_term(const Term& t) const {
    std::set<std::string> cs;
    t.collect_constants(cs);
    std::map<Monomial, Term> repl;
    for (auto& c : cs) {
        for (auto& [n, def] : arg_defs)
            if (n == c) repl.emplace(Monomial::constant(c, def.sort()), expand_term(def));
    }
    if (repl.empty()) return t;
    return t.replace(repl);
}

std::string PurificationRecord::str() const {
    std::ostringstream os;
    for (auto& [n, t] : arg_defs) os << "  " << n << " = " << t.str() << "\n";
    for (auto& fd : fun_defs) {
        os << "  " << fd.fn << "(";
        for (size_t i = 0; i < fd.args.size(); ++i) {
            if (i) os << ", ";
            os << fd.args[i];
        }
        os << ") = " << fd.name << "\n";
    }
    return os.str();
}

namespace {

class Purifier {
public:
    Purifier(const std::set<std::string>& ext_syms, int level, Signature& sig)
        : ext_syms_(ext_syms), level_(level), sig_(sig) {}

    PurificationRecord run(const std::vector<Clause>& F) {
        for (auto& c : F) {
            Clause pc;
            for (auto& l : c.lits) {
                Literal nl = l;
                if (nl.atom.is_arith()) {
                    Term s = purify_term(nl.atom.s);
                    switch (nl.atom.kind) {
                        case Atom::Kind::Le: nl.atom = Atom::le(s, Term()); break;
                        case Atom::Kind::Lt: nl.atom = Atom::lt(s, Term()); break;
                        case Atom::Kind::Eq: nl.atom = Atom::eq(s, Term()); break;
                        default: break;
                    }
                } else {
                    for (auto& a : nl.atom.args) a = purify_term(a);
                }
                pc.lits.push_back(nl);
            }
            rec_.base.push_back(pc);
        }
        return std::move(rec_);
    }

private:
    // Replaces every extension-rooted subterm by its renaming constant,
    // innermost first; arguments flattened to constants.
    Term purify_term(const Term& t) {
        Term out = Term::rational(t.constant_part(), t.sort());
        for (auto& [q, m] : t.monomials()) {
            switch (m.kind()) {
                case Monomial::Kind::Var:
                    throw InternalError("purify: variable in ground clause");
                case Monomial::Kind::Const:
                    out = out + Term::monomial(q, m);
                    break;
                case Monomial::Kind::App: {
                    std::vector<Term> args;
                    for (auto& a : m.args()) args.push_back(purify_term(a));
                    if (ext_syms_.count(m.name())) {
                        std::string c = rename_app(m.name(), args, m.sort());
                        out = out + Term::monomial(q, Monomial::constant(c, m.sort()));
                    } else {
                        out = out + Term::monomial(q, Monomial::app(m.name(), args, m.sort()));
                    }
                    break;
                }
                case Monomial::Kind::Prod: {
                    Term acc = Term::rational(q, m.sort());
                    for (auto& f : m.factors()) acc = acc * purify_term(f);
                    out = out + acc;
                    break;
                }
            }
        }
        return out;
    }

    // Ensures `t` is a constant, introducing an arg-def if needed.
    std::string flatten_arg(const Term& t) {
        if (t.is_plain_monomial() && t.the_monomial().is_const())
            return t.the_monomial().name();
        auto it = arg_cache_.find(t);
        if (it != arg_cache_.end()) return it->second;
        auto& d = sig_.declare_fresh_constant(fresh_base(), t.sort());
        rec_.arg_defs.push_back({d.name, t});
        arg_cache_.emplace(t, d.name);
        return d.name;
    }

    std::string rename_app(const std::string& fn, const std::vector<Term>& args,
                           const Sort& sort) {
        Term key = Term::app(fn, args, sort);
        auto it = app_cache_.find(key);
        if (it != app_cache_.end()) return it->second;
        std::vector<std::string> argcs;
        std::vector<Sort> argsorts;
        for (auto& a : args) {
            argcs.push_back(flatten_arg(a));
            argsorts.push_back(a.sort());
        }
        auto& d = sig_.declare_fresh_constant(fresh_base(), sort);
        rec_.fun_defs.push_back({fn, argcs, argsorts, d.name, key});
        app_cache_.emplace(key, d.name);
        return d.name;
    }

    std::string fresh_base() const { return "_p" + std::to_string(level_) + "_"; }

    const std::set<std::string>& ext_syms_;
    int level_;
    Signature& sig_;
    PurificationRecord rec_;
    std::map<Term, std::string> arg_cache_;
    std::map<Term, std::string> app_cache_;
};

}  // namespace

PurificationRecord flatten_purify(const std::vector<Clause>& F,
                                  const std::set<std::string>& ext_syms, int level,
                                  Signature& sig) {
    Purifier p(ext_syms, level, sig);
    PurificationRecord rec = p.run(F);
    // arg-def equations join the base part
    for (auto& [n, t] : rec.arg_defs) {
        Clause c;
        c.lits.push_back(Literal::pos(Atom::eq(Term::constant(n, t.sort()), t)));
        rec.base.push_back(c);
    }
    return rec;
}

// ----------------------------------------------------- congruence_instances

std::vector<Clause> congruence_instances(const PurificationRecord& rec,
                                         const std::vector<Clause>& G) {
    // strict unit facts of G (expanded), for premise refutation
    std::vector<FmAtom> units;
    for (auto& c : G) {
        if (c.lits.size() != 1 || c.lits[0].neg) continue;
        const Atom& a = c.lits[0].atom;
        if (!a.is_arith()) continue;
        units.push_back(FmAtom{a.kind, rec.expand_term(a.s)});
    }
    auto refuted = [&](const Term& diff) {
        // diff = ci - dj expanded; the premise ci = dj is refuted when diff
        // is a nonzero numeral or a strict unit fact contradicts it
        if (diff.is_rational()) return diff.constant_part() != 0;
        for (auto& u : units) {
            if (u.rel != Atom::Kind::Lt) continue;
            if (u.s == diff || u.s == -diff) return true;
            // scaled copies
            if (!u.s.monomials().empty() && !diff.monomials().empty()) {
                Rational k = u.s.monomials()[0].first / diff.monomials()[0].first;
                if (k != 0 && (diff.scaled(k) == u.s || diff.scaled(-k) == u.s)) return true;
            }
        }
        return false;
    };

    std::vector<Clause> out;
    for (size_t i = 0; i < rec.fun_defs.size(); ++i) {
        for (size_t j = i + 1; j < rec.fun_defs.size(); ++j) {
            const auto &a = rec.fun_defs[i], &b = rec.fun_defs[j];
            if (a.fn != b.fn) continue;
            Clause c;
            bool drop = false;
            for (size_t k = 0; k < a.args.size(); ++k) {
                Term lhs = rec.expand(a.args[k], a.arg_sorts[k]);
                Term rhs = rec.expand(b.args[k], b.arg_sorts[k]);
                Term diff = lhs - rhs;
                if (diff.is_zero()) continue;  // trivially true premise
                if (refuted(diff)) {
                    drop = true;
                    break;
                }
                // premise ci = di contributes literals ci < di or ci > di
                c.lits.push_back(Literal::pos(Atom::lt(diff, Term())));
                c.lits.push_back(Literal::pos(Atom::lt(-diff, Term())));
            }
            if (drop) continue;
            Sort rs = a.term.sort();
            c.lits.push_back(Literal::pos(
                Atom::eq(Term::constant(a.name, rs), Term::constant(b.name, rs))));
            out.push_back(std::move(c));
        }
    }
    return out;
}

// --------------------------------------------------------- flat/linear check

std::vector<FlatLinearViolation> certify_flat_linear(const std::vector<Clause>& K,
                                                     const std::set<std::string>& ext_syms) {
    std::vector<FlatLinearViolation> out;
    for (auto& c : K) {
        bool clause_ground = c.ground();
        std::vector<ExtOcc> occs;
        for (auto& l : c.lits) {
            if (l.atom.is_arith()) collect_ext_occs(l.atom.s, ext_syms, occs);
            for (auto& a : l.atom.args) collect_ext_occs(a, ext_syms, occs);
        }
        // flatness: in non-ground clauses all symbols below an extension
        // symbol are variables; in ground clauses constants or numerals
        for (auto& o : occs) {
            for (auto& a : o.args) {
                bool is_var = a.is_plain_monomial() && a.the_monomial().is_var();
                bool is_const = a.is_rational() ||
                                (a.is_plain_monomial() && a.the_monomial().is_const());
                if (clause_ground) {
                    if (!is_const)
                        out.push_back({c.str(), o.fn,
                                       "non-constant below extension symbol: " + a.str()});
                } else if (!is_var) {
                    out.push_back(
                        {c.str(), o.fn, "non-variable below extension symbol: " + a.str()});
                }
                std::vector<Term> apps;
                a.collect_apps(apps);
                for (auto& sub : apps)
                    if (ext_syms.count(sub.the_monomial().name()))
                        out.push_back({c.str(), o.fn,
                                       "extension symbol below extension symbol: " + a.str()});
            }
        }
        // linearity: a variable in two extension terms forces the terms equal;
        // no extension term has two occurrences of one variable
        for (size_t i = 0; i < occs.size(); ++i) {
            std::map<std::string, Sort> vi;
            for (auto& a : occs[i].args) a.collect_vars(vi);
            // duplicate variable within one term
            std::map<std::string, int> count;
            for (auto& a : occs[i].args) {
                std::map<std::string, Sort> av;
                a.collect_vars(av);
                for (auto& [n, s] : av) count[n]++;
            }
            for (auto& [n, k] : count)
                if (k > 1)
                    out.push_back({c.str(), occs[i].fn,
                                   "variable " + n + " occurs twice in one extension term"});
            for (size_t j = i + 1; j < occs.size(); ++j) {
                std::map<std::string, Sort> vj;
                for (auto& a : occs[j].args) a.collect_vars(vj);
                bool shares = false;
                for (auto& [n, s] : vi)
                    if (vj.count(n)) shares = true;
                if (!shares) continue;
                bool same = occs[i].fn == occs[j].fn && occs[i].args.size() == occs[j].args.size();
                if (same)
                    for (size_t k = 0; k < occs[i].args.size(); ++k)
                        if (occs[i].args[k] != occs[j].args[k]) same = false;
                if (!same)
                    out.push_back({c.str(), occs[i].fn + "/" + occs[j].fn,
                                   "variable shared between distinct extension terms"});
            }
        }
    }
    return out;
}

// ------------------------------------------------------- check_certificate

namespace {

struct GuardedDef {
    std::string fn;
    // guard as a formula over canonical frozen arguments $arg0, $arg1, ...
    FormulaPtr guard = Formula::tru();
    // defining literal rewritten over the frozen arguments; sign of the
    // extension monomial classifies it as equality / lower / upper bound
    enum class Kind { Eq, Lower, Upper } kind = Kind::Eq;
    Term bound;  // the bound term (frozen)
    Clause clause;
    bool ok = true;
};

// Rewrites a clause of the guarded-definition shape into canonical frozen
// form. The clause must have exactly one literal containing this level's
// extension symbols; that literal must mention exactly one extension term.
std::optional<GuardedDef> guarded_def(const Clause& c, const std::set<std::string>& syms,
                                      std::string* error) {
    GuardedDef g;
    g.clause = c;
    const Literal* def_lit = nullptr;
    std::vector<ExtOcc> def_occs;
    for (auto& l : c.lits) {
        std::vector<ExtOcc> occs;
        if (l.atom.is_arith()) collect_ext_occs(l.atom.s, syms, occs);
        for (auto& a : l.atom.args) collect_ext_occs(a, syms, occs);
        if (occs.empty()) continue;
        if (def_lit) {
            if (error) *error = "more than one defining literal: " + c.str();
            return std::nullopt;
        }
        def_lit = &l;
        def_occs = occs;
    }
    if (!def_lit || def_occs.size() != 1 || !def_lit->atom.is_arith()) {
        if (error) *error = "not a guarded definition: " + c.str();
        return std::nullopt;
    }
    const ExtOcc& occ = def_occs[0];
    g.fn = occ.fn;
    // canonical substitution: occurrence argument k (a variable or constant
    // term) maps to frozen constant $arg<k>
    std::map<std::string, Term> sigma;
    std::vector<FormulaPtr> arg_eqs;
    for (size_t k = 0; k < occ.args.size(); ++k) {
        Term frozen = Term::constant("$arg" + std::to_string(k), occ.args[k].sort());
        std::map<std::string, Sort> vs;
        occ.args[k].collect_vars(vs);
        if (vs.size() == 1 && occ.args[k].is_plain_monomial()) {
            sigma.emplace(vs.begin()->first, frozen);
        } else if (vs.empty()) {
            // point definition f(t) = c: guard records $argk = t
            arg_eqs.push_back(Formula::atomf(Atom::eq(frozen, occ.args[k])));
        } else {
            if (error) *error = "unsupported argument shape in definition: " + c.str();
            return std::nullopt;
        }
    }
    std::vector<FormulaPtr> guard_parts = arg_eqs;
    for (auto& l : c.lits) {
        if (&l == def_lit) continue;
        guard_parts.push_back(substitute(Formula::lit(l.negated()), sigma));
    }
    g.guard = Formula::conj(std::move(guard_parts));

    // classify the defining literal: q*f(args) + r rel 0
    Atom a = substitute_atom(def_lit->atom, sigma);
    // locate the extension monomial in a.s
    Monomial ext = Monomial::constant("?", real_sort());
    Rational q = 0;
    for (auto& [qq, m] : a.s.monomials()) {
        if (m.is_app() && m.name() == occ.fn) {
            ext = m;
            q = qq;
            break;
        }
    }
    if (q == 0) {
        if (error) *error = "defining literal does not isolate the function: " + c.str();
        return std::nullopt;
    }
    g.bound = a.s.without(ext).scaled(Rational(-1) / q);
    if (def_lit->atom.kind == Atom::Kind::Eq) g.kind = GuardedDef::Kind::Eq;
    else g.kind = q > 0 ? GuardedDef::Kind::Upper : GuardedDef::Kind::Lower;
    return g;
}

// Guard disjointness (form 1) and bound-consistency obligations (form 2 and
// GuardedBounded), discharged with the ground solver under Gamma0.
std::vector<std::string> check_guarded_level(const ExtensionLevel& lvl, const Problem& p,
                                             bool require_disjoint) {
    std::vector<std::string> out;
    std::set<std::string> syms(lvl.symbols.begin(), lvl.symbols.end());
    std::vector<GuardedDef> defs;
    for (auto& c : lvl.clauses) {
        std::string err;
        auto g = guarded_def(c, syms, &err);
        if (!g) {
            out.push_back("level " + std::to_string(lvl.level) + ": " + err);
            continue;
        }
        defs.push_back(*g);
    }
    FormulaPtr gamma0 = Formula::conj(std::vector<FormulaPtr>(p.gamma0.begin(), p.gamma0.end()));
    for (size_t i = 0; i < defs.size(); ++i) {
        for (size_t j = i + 1; j < defs.size(); ++j) {
            if (defs[i].fn != defs[j].fn) continue;
            bool both_eq =
                defs[i].kind == GuardedDef::Kind::Eq && defs[j].kind == GuardedDef::Kind::Eq;
            FormulaPtr both = Formula::conj({gamma0, defs[i].guard, defs[j].guard});
            if (require_disjoint && both_eq) {
                SatResult r = check_ground_sat(both);
                if (r.status == SatStatus::Sat)
                    out.push_back("update guards not disjoint for " + defs[i].fn + ": " +
                                  defs[i].clause.str() + " / " + defs[j].clause.str());
                continue;
            }
            // lower/upper pairs: discharge guard /\ guard -> lo <= hi
            const GuardedDef* lo = nullptr;
            const GuardedDef* hi = nullptr;
            if (defs[i].kind == GuardedDef::Kind::Lower) lo = &defs[i];
            if (defs[j].kind == GuardedDef::Kind::Lower) lo = &defs[j];
            if (defs[i].kind == GuardedDef::Kind::Upper) hi = &defs[i];
            if (defs[j].kind == GuardedDef::Kind::Upper) hi = &defs[j];
            if (!lo || !hi) continue;
            FormulaPtr bad =
                Formula::conj({both, Formula::atomf(Atom::lt(hi->bound, lo->bound))});
            SatResult r = check_ground_sat(bad);
            if (r.status == SatStatus::Sat)
                out.push_back("bound obligation fails for " + defs[i].fn + " (lower " +
                              lo->bound.str() + " may exceed upper " + hi->bound.str() + ")");
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> check_certificate(const ExtensionLevel& lvl, const Problem& p) {
    std::vector<std::string> out;
    if (lvl.certificate == CertificateKind::UserAsserted && lvl.waiver) return out;

    std::set<std::string> syms(lvl.symbols.begin(), lvl.symbols.end());
    auto violations = certify_flat_linear(lvl.clauses, syms);
    for (auto& v : violations)
        out.push_back("level " + std::to_string(lvl.level) + ": " + v.reason + " in " + v.clause);

    if (lvl.certificate == CertificateKind::UpdateRules) {
        auto u = check_guarded_level(lvl, p, /*require_disjoint=*/true);
        out.insert(out.end(), u.begin(), u.end());
    } else if (lvl.certificate == CertificateKind::GuardedBounded) {
        auto u = check_guarded_level(lvl, p, /*require_disjoint=*/false);
        out.insert(out.end(), u.begin(), u.end());
    }
    return out;
}

// -------------------------------------------------------- hierarchical_reduce

Term ReductionResult::expand(const std::string& name, const Sort& sort) const {
    for (auto& [n, t] : arg_defs)
        if (n == name) {
            PurificationRecord tmp;
            tmp.arg_defs = arg_defs;
            return tmp.expand_term(t);
        }
    return Term::constant(name, sort);
}

std::string ReductionResult::trace_str() const {
    std::ostringstream os;
    for (auto& s : steps) {
        os << "level " << s.level << " (";
        for (size_t i = 0; i < s.symbols.size(); ++i) {
            if (i) os << ", ";
            os << s.symbols[i];
        }
        os << ")\n";
        os << " terms:\n";
        for (auto& t : s.terms) os << "  " << t.str() << "\n";
        os << " instances:\n";
        for (auto& c : s.instances) os << "  " << print_clause(c) << "\n";
        os << " definitions:\n" << s.record.str();
        os << " congruence instances:\n";
        for (auto& c : s.congruences) os << "  " << print_clause(c) << "\n";
    }
    os << "base clauses:\n";
    for (auto& c : base) os << "  " << print_clause(c) << "\n";
    return os.str();
}

ReductionResult hierarchical_reduce(const std::vector<LevelClauses>& chain,
                                    const std::vector<Clause>& G, Signature& sig) {
    ReductionResult res;
    res.base = G;
    for (auto& c : res.base)
        if (!c.ground()) throw InternalError("hierarchical_reduce: non-ground goal clause");

    // highest level first
    std::vector<LevelClauses> levels = chain;
    std::sort(levels.begin(), levels.end(),
              [](const LevelClauses& a, const LevelClauses& b) { return a.level > b.level; });

    for (auto& lvl : levels) {
        ReductionStep step;
        step.level = lvl.level;
        step.symbols.assign(lvl.symbols.begin(), lvl.symbols.end());

        std::vector<Term> T = est(lvl.clauses, res.base, lvl.symbols);
        for (auto& t : lvl.extra_terms)
            if (std::find(T.begin(), T.end(), t) == T.end()) T.push_back(t);
        std::sort(T.begin(), T.end());
        step.terms = T;

        std::vector<Clause> instances = instantiate(lvl.clauses, T, lvl.symbols);
        step.instances = instances;

        std::vector<Clause> all = instances;
        for (auto& c : res.base) all.push_back(c);
        PurificationRecord rec = flatten_purify(all, lvl.symbols, lvl.level, sig);
        std::vector<Clause> con = congruence_instances(rec, rec.base);
        step.record = rec;
        step.congruences = con;

        res.base = rec.base;
        for (auto& c : con) res.base.push_back(c);
        for (auto& d : rec.arg_defs) res.arg_defs.push_back(d);
        for (auto& d : rec.fun_defs) res.fun_defs.push_back(d);
        res.steps.push_back(std::move(step));
    }
    return res;
}

}  // namespace pvs
