#include "formula.hpp"

#include <algorithm>
#include <sstream>

#include "diagnostics.hpp"

namespace pvs {

// -------------------------------------------------------------------- Atom

namespace {

// Scale so the first monomial's coefficient is +1 (Le/Lt: positive scaling
// only; Eq: sign may flip). Constant-only atoms are left as-is.
Term normalize_scale(Atom::Kind k, Term s) {
    if (s.monomials().empty()) return s;
    Rational lead = s.monomials()[0].first;
    if (k == Atom::Kind::Eq) {
        return s.scaled(Rational(1) / lead);
    }
    if (lead < 0) return s;  // cannot flip an inequality
    return s.scaled(Rational(1) / lead);
}

// positive scaling normalization for inequalities with negative lead:
// scale by 1/|lead| so |lead| = 1.
Term normalize_ineq(Term s) {
    if (s.monomials().empty()) return s;
    Rational lead = s.monomials()[0].first;
    Rational a = lead < 0 ? Rational(-lead) : lead;
    return s.scaled(Rational(1) / a);
}

}  // namespace

Atom Atom::le(const Term& lhs, const Term& rhs) {
    Atom a;
    a.kind = Kind::Le;
    a.s = normalize_ineq(lhs - rhs);
    return a;
}

Atom Atom::lt(const Term& lhs, const Term& rhs) {
    Atom a;
    a.kind = Kind::Lt;
    a.s = normalize_ineq(lhs - rhs);
    return a;
}

Atom Atom::eq(const Term& lhs, const Term& rhs) {
    Atom a;
    a.kind = Kind::Eq;
    a.s = normalize_scale(Kind::Eq, lhs - rhs);
    return a;
}

Atom Atom::pred_atom(const std::string& p, std::vector<Term> args) {
    Atom a;
    a.kind = Kind::Pred;
    a.pred = p;
    a.args = std::move(args);
    return a;
}

std::optional<bool> Atom::const_value() const {
    if (kind == Kind::Pred || !s.is_rational()) return std::nullopt;
    const Rational& c = s.constant_part();
    switch (kind) {
        case Kind::Le: return c <= 0;
        case Kind::Lt: return c < 0;
        case Kind::Eq: return c == 0;
        default: return std::nullopt;
    }
}

int Atom::compare(const Atom& o) const {
    if (kind != o.kind) return kind < o.kind ? -1 : 1;
    if (kind == Kind::Pred) {
        if (int c = pred.compare(o.pred)) return c;
        if (args.size() != o.args.size()) return args.size() < o.args.size() ? -1 : 1;
        for (size_t i = 0; i < args.size(); ++i)
            if (int c = args[i].compare(o.args[i])) return c;
        return 0;
    }
    return s.compare(o.s);
}

std::string Atom::str() const {
    switch (kind) {
        case Kind::Le: return s.str() + " <= 0";
        case Kind::Lt: return s.str() + " < 0";
        case Kind::Eq: return s.str() + " = 0";
        case Kind::Pred: {
            std::string r = pred;
            if (!args.empty()) {
                r += "(";
                for (size_t i = 0; i < args.size(); ++i) {
                    if (i) r += ", ";
                    r += args[i].str();
                }
                r += ")";
            }
            return r;
        }
    }
    return "?";
}

Literal Literal::negd(const Atom& a) {
    switch (a.kind) {
        case Atom::Kind::Le: return Literal{false, Atom::lt(-a.s, Term())};
        case Atom::Kind::Lt: return Literal{false, Atom::le(-a.s, Term())};
        case Atom::Kind::Eq: return Literal{true, a};   // disequality
        case Atom::Kind::Pred: return Literal{true, a};
    }
    return Literal{true, a};
}

Literal Literal::negated() const {
    if (neg) return Literal{false, atom};
    return negd(atom);
}

std::optional<bool> Literal::const_value() const {
    auto v = atom.const_value();
    if (!v) return std::nullopt;
    return neg ? !*v : *v;
}

int Literal::compare(const Literal& o) const {
    if (neg != o.neg) return neg < o.neg ? -1 : 1;
    return atom.compare(o.atom);
}

std::string Literal::str() const { return neg ? ("not " + atom.str()) : atom.str(); }

bool Clause::ground() const {
    std::map<std::string, Sort> vs;
    collect_vars(vs);
    return vs.empty();
}

void Clause::collect_vars(std::map<std::string, Sort>& out) const {
    for (auto& l : lits) {
        if (l.atom.is_arith()) {
            l.atom.s.collect_vars(out);
        } else {
            for (auto& a : l.atom.args) a.collect_vars(out);
        }
    }
}

std::string Clause::str() const {
    if (lits.empty()) return "false";
    std::string r;
    for (size_t i = 0; i < lits.size(); ++i) {
        if (i) r += " or ";
        r += lits[i].str();
    }
    return r;
}

int Clause::compare(const Clause& o) const {
    if (lits.size() != o.lits.size()) return lits.size() < o.lits.size() ? -1 : 1;
    for (size_t i = 0; i < lits.size(); ++i)
        if (int c = lits[i].compare(o.lits[i])) return c;
    return 0;
}

// ----------------------------------------------------------------- Formula

namespace {
FormulaPtr mk(Formula f) { return std::make_shared<Formula>(std::move(f)); }
}  // namespace

FormulaPtr Formula::tru() {
    static FormulaPtr t = mk(Formula{Kind::True});
    return t;
}

FormulaPtr Formula::fls() {
    static FormulaPtr f = mk(Formula{Kind::False});
    return f;
}

FormulaPtr Formula::atomf(const Atom& a) {
    if (auto v = a.const_value()) return boolean(*v);
    Formula f{Kind::Atomic};
    f.atom = a;
    return mk(std::move(f));
}

FormulaPtr Formula::lit(const Literal& l) {
    if (auto v = l.const_value()) return boolean(*v);
    if (!l.neg) return atomf(l.atom);
    return negate(atomf(l.atom));
}

FormulaPtr Formula::negate(FormulaPtr f) {
    if (f->is_true()) return fls();
    if (f->is_false()) return tru();
    if (f->kind == Kind::Not) return f->kids[0];
    Formula g{Kind::Not};
    g.kids = {std::move(f)};
    return mk(std::move(g));
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
    std::vector<FormulaPtr> out;
    for (auto& f : fs) {
        if (f->is_false()) return fls();
        if (f->is_true()) continue;
        if (f->kind == Kind::And) {
            for (auto& k : f->kids) out.push_back(k);
        } else {
            out.push_back(f);
        }
    }
    if (out.empty()) return tru();
    if (out.size() == 1) return out[0];
    Formula g{Kind::And};
    g.kids = std::move(out);
    return mk(std::move(g));
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
    std::vector<FormulaPtr> out;
    for (auto& f : fs) {
        if (f->is_true()) return tru();
        if (f->is_false()) continue;
        if (f->kind == Kind::Or) {
            for (auto& k : f->kids) out.push_back(k);
        } else {
            out.push_back(f);
        }
    }
    if (out.empty()) return fls();
    if (out.size() == 1) return out[0];
    Formula g{Kind::Or};
    g.kids = std::move(out);
    return mk(std::move(g));
}

FormulaPtr Formula::impl(FormulaPtr a, FormulaPtr b) {
    if (a->is_true()) return b;
    if (a->is_false()) return tru();
    if (b->is_true()) return tru();
    Formula g{Kind::Impl};
    g.kids = {std::move(a), std::move(b)};
    return mk(std::move(g));
}

FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) {
    if (a->is_true()) return b;
    if (b->is_true()) return a;
    Formula g{Kind::Iff};
    g.kids = {std::move(a), std::move(b)};
    return mk(std::move(g));
}

FormulaPtr Formula::forall(std::vector<QuantVar> vs, FormulaPtr b) {
    if (vs.empty() || b->is_true() || b->is_false()) return b;
    Formula g{Kind::Forall};
    g.qvars = std::move(vs);
    g.body = std::move(b);
    return mk(std::move(g));
}

FormulaPtr Formula::exists(std::vector<QuantVar> vs, FormulaPtr b) {
    if (vs.empty() || b->is_true() || b->is_false()) return b;
    Formula g{Kind::Exists};
    g.qvars = std::move(vs);
    g.body = std::move(b);
    return mk(std::move(g));
}

FormulaPtr Formula::from_clause(const Clause& c) {
    std::vector<FormulaPtr> fs;
    for (auto& l : c.lits) fs.push_back(lit(l));
    return disj(std::move(fs));
}

FormulaPtr Formula::from_cube(const Cube& c) {
    std::vector<FormulaPtr> fs;
    for (auto& l : c) fs.push_back(lit(l));
    return conj(std::move(fs));
}

bool Formula::quantifier_free() const {
    switch (kind) {
        case Kind::Forall:
        case Kind::Exists:
            return false;
        case Kind::True:
        case Kind::False:
        case Kind::Atomic:
            return true;
        default:
            for (auto& k : kids)
                if (!k->quantifier_free()) return false;
            return true;
    }
}

void Formula::collect_free_vars(std::map<std::string, Sort>& out) const {
    switch (kind) {
        case Kind::True:
        case Kind::False:
            return;
        case Kind::Atomic: {
            if (atom.is_arith()) {
                atom.s.collect_vars(out);
            } else {
                for (auto& a : atom.args) a.collect_vars(out);
            }
            return;
        }
        case Kind::Forall:
        case Kind::Exists: {
            std::map<std::string, Sort> inner;
            body->collect_free_vars(inner);
            for (auto& v : qvars) inner.erase(v.name);
            for (auto& [n, s] : inner) out.emplace(n, s);
            return;
        }
        default:
            for (auto& k : kids) k->collect_free_vars(out);
    }
}

void Formula::collect_constants(std::set<std::string>& out) const {
    switch (kind) {
        case Kind::True:
        case Kind::False:
            return;
        case Kind::Atomic:
            if (atom.is_arith()) {
                atom.s.collect_constants(out);
            } else {
                for (auto& a : atom.args) a.collect_constants(out);
            }
            return;
        case Kind::Forall:
        case Kind::Exists:
            body->collect_constants(out);
            return;
        default:
            for (auto& k : kids) k->collect_constants(out);
    }
}

bool Formula::mentions_symbol(const std::string& name) const {
    switch (kind) {
        case Kind::True:
        case Kind::False:
            return false;
        case Kind::Atomic:
            if (atom.is_arith()) return atom.s.mentions_symbol(name);
            if (atom.pred == name) return true;
            for (auto& a : atom.args)
                if (a.mentions_symbol(name)) return true;
            return false;
        case Kind::Forall:
        case Kind::Exists:
            return body->mentions_symbol(name);
        default:
            for (auto& k : kids)
                if (k->mentions_symbol(name)) return true;
            return false;
    }
}

bool Formula::ground() const {
    std::map<std::string, Sort> vs;
    collect_free_vars(vs);
    return vs.empty();
}

int Formula::compare(const Formula& o) const {
    if (kind != o.kind) return kind < o.kind ? -1 : 1;
    switch (kind) {
        case Kind::True:
        case Kind::False:
            return 0;
        case Kind::Atomic:
            return atom.compare(o.atom);
        case Kind::Forall:
        case Kind::Exists: {
            if (qvars.size() != o.qvars.size()) return qvars.size() < o.qvars.size() ? -1 : 1;
            for (size_t i = 0; i < qvars.size(); ++i) {
                if (int c = qvars[i].name.compare(o.qvars[i].name)) return c;
                if (qvars[i].sort != o.qvars[i].sort)
                    return qvars[i].sort < o.qvars[i].sort ? -1 : 1;
            }
            return body->compare(*o.body);
        }
        default: {
            if (kids.size() != o.kids.size()) return kids.size() < o.kids.size() ? -1 : 1;
            for (size_t i = 0; i < kids.size(); ++i)
                if (int c = kids[i]->compare(*o.kids[i])) return c;
            return 0;
        }
    }
}

std::string Formula::str() const {
    switch (kind) {
        case Kind::True: return "true";
        case Kind::False: return "false";
        case Kind::Atomic: return atom.str();
        case Kind::Not: return "not (" + kids[0]->str() + ")";
        case Kind::And:
        case Kind::Or: {
            std::string op = kind == Kind::And ? " and " : " or ";
            std::string r;
            for (size_t i = 0; i < kids.size(); ++i) {
                if (i) r += op;
                r += "(" + kids[i]->str() + ")";
            }
            return r;
        }
        case Kind::Impl: return "(" + kids[0]->str() + ") -> (" + kids[1]->str() + ")";
        case Kind::Iff: return "(" + kids[0]->str() + ") <-> (" + kids[1]->str() + ")";
        case Kind::Forall:
        case Kind::Exists: {
            std::string r = kind == Kind::Forall ? "forall " : "exists ";
            for (size_t i = 0; i < qvars.size(); ++i) {
                if (i) r += ", ";
                r += qvars[i].name + ":" + qvars[i].sort.name;
            }
            return r + ". (" + body->str() + ")";
        }
    }
    return "?";
}

// ------------------------------------------------------------ substitution

Term substitute(const Term& t, const std::map<std::string, Term>& sigma) {
    std::map<Monomial, Term> repl;
    std::map<std::string, Sort> vars;
    t.collect_vars(vars);
    for (auto& [n, s] : vars) {
        auto it = sigma.find(n);
        if (it == sigma.end()) continue;
        if (it->second.sort() != s &&
            !(s.kind == SortKind::Real && it->second.sort().kind == SortKind::Int))
            throw InputError("sort mismatch substituting variable " + n + ": " + s.name +
                             " vs " + it->second.sort().name);
        repl.emplace(Monomial::var(n, s), it->second);
    }
    if (repl.empty()) return t;
    return t.replace(repl);
}

Atom substitute_atom(const Atom& a, const std::map<std::string, Term>& sigma) {
    if (a.is_arith()) {
        Term s = substitute(a.s, sigma);
        switch (a.kind) {
            case Atom::Kind::Le: return Atom::le(s, Term());
            case Atom::Kind::Lt: return Atom::lt(s, Term());
            case Atom::Kind::Eq: return Atom::eq(s, Term());
            default: break;
        }
    }
    Atom out = a;
    for (auto& arg : out.args) arg = substitute(arg, sigma);
    return out;
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& sigma) {
    if (sigma.empty()) return f;
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
            return f;
        case Formula::Kind::Atomic:
            return Formula::atomf(substitute_atom(f->atom, sigma));
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            // avoid capture: rename bound vars colliding with sigma's range
            std::set<std::string> range_syms;
            std::map<std::string, Sort> range_vars;
            for (auto& [k, v] : sigma) {
                v.collect_vars(range_vars);
            }
            std::map<std::string, Term> inner = sigma;
            std::vector<Formula::QuantVar> vs = f->qvars;
            FormulaPtr body = f->body;
            std::map<std::string, Term> renames;
            for (auto& v : vs) {
                inner.erase(v.name);
                if (range_vars.count(v.name)) {
                    std::string nn = v.name + "_r";
                    while (range_vars.count(nn) || sigma.count(nn)) nn += "_r";
                    renames.emplace(v.name, Term::var(nn, v.sort));
                    v.name = nn;
                }
            }
            if (!renames.empty()) body = substitute(body, renames);
            body = substitute(body, inner);
            return f->kind == Formula::Kind::Forall ? Formula::forall(vs, body)
                                                    : Formula::exists(vs, body);
        }
        default: {
            std::vector<FormulaPtr> kids;
            for (auto& k : f->kids) kids.push_back(substitute(k, sigma));
            switch (f->kind) {
                case Formula::Kind::Not: return Formula::negate(kids[0]);
                case Formula::Kind::And: return Formula::conj(std::move(kids));
                case Formula::Kind::Or: return Formula::disj(std::move(kids));
                case Formula::Kind::Impl: return Formula::impl(kids[0], kids[1]);
                case Formula::Kind::Iff: return Formula::iff(kids[0], kids[1]);
                default: throw InternalError("substitute: unreachable");
            }
        }
    }
}

FormulaPtr replace_constants(const FormulaPtr& f, const std::map<std::string, Term>& repl) {
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
            return f;
        case Formula::Kind::Atomic: {
            // Replacement keyed by constant monomials present in the atom.
            // Monomial comparison is by kind and name, so the sort used for
            // the key does not affect matching.
            bool any = false;
            std::map<Monomial, Term> mrepl;
            auto build = [&](const Term& t) {
                std::set<std::string> consts;
                t.collect_constants(consts);
                for (auto& c : consts) {
                    auto it = repl.find(c);
                    if (it == repl.end()) continue;
                    mrepl.emplace(Monomial::constant(c, it->second.sort()), it->second);
                    any = true;
                }
            };
            Atom out = f->atom;
            if (out.is_arith()) {
                build(out.s);
                if (!any) return f;
                Term s = out.s.replace(mrepl);
                switch (out.kind) {
                    case Atom::Kind::Le: return Formula::atomf(Atom::le(s, Term()));
                    case Atom::Kind::Lt: return Formula::atomf(Atom::lt(s, Term()));
                    case Atom::Kind::Eq: return Formula::atomf(Atom::eq(s, Term()));
                    default: break;
                }
            }
            for (auto& a : out.args) build(a);
            if (!any) return f;
            for (auto& a : out.args) a = a.replace(mrepl);
            return Formula::atomf(out);
        }
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            FormulaPtr b = replace_constants(f->body, repl);
            return f->kind == Formula::Kind::Forall ? Formula::forall(f->qvars, b)
                                                    : Formula::exists(f->qvars, b);
        }
        default: {
            std::vector<FormulaPtr> kids;
            for (auto& k : f->kids) kids.push_back(replace_constants(k, repl));
            switch (f->kind) {
                case Formula::Kind::Not: return Formula::negate(kids[0]);
                case Formula::Kind::And: return Formula::conj(std::move(kids));
                case Formula::Kind::Or: return Formula::disj(std::move(kids));
                case Formula::Kind::Impl: return Formula::impl(kids[0], kids[1]);
                case Formula::Kind::Iff: return Formula::iff(kids[0], kids[1]);
                default: throw InternalError("replace_constants: unreachable");
            }
        }
    }
}

// -------------------------------------------------------------------- NNF

namespace {

FormulaPtr nnf_rec(const FormulaPtr& f, bool neg) {
    switch (f->kind) {
        case Formula::Kind::True:
            return neg ? Formula::fls() : Formula::tru();
        case Formula::Kind::False:
            return neg ? Formula::tru() : Formula::fls();
        case Formula::Kind::Atomic:
            return neg ? Formula::lit(Literal::negd(f->atom)) : f;
        case Formula::Kind::Not:
            return nnf_rec(f->kids[0], !neg);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            bool is_and = (f->kind == Formula::Kind::And) != neg;
            std::vector<FormulaPtr> kids;
            for (auto& k : f->kids) kids.push_back(nnf_rec(k, neg));
            return is_and ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
        }
        case Formula::Kind::Impl: {
            // a -> b == !a or b
            FormulaPtr na = nnf_rec(f->kids[0], !neg);
            FormulaPtr b = nnf_rec(f->kids[1], neg);
            return neg ? Formula::conj({na, b}) : Formula::disj({na, b});
        }
        case Formula::Kind::Iff: {
            FormulaPtr a = f->kids[0], b = f->kids[1];
            FormulaPtr pos = Formula::disj({Formula::conj({a, b}),
                                            Formula::conj({Formula::negate(a), Formula::negate(b)})});
            return nnf_rec(pos, neg);
        }
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            bool is_forall = (f->kind == Formula::Kind::Forall) != neg;
            FormulaPtr b = nnf_rec(f->body, neg);
            return is_forall ? Formula::forall(f->qvars, b) : Formula::exists(f->qvars, b);
        }
    }
    throw InternalError("nnf: unreachable");
}

}  // namespace

FormulaPtr nnf(const FormulaPtr& f) { return nnf_rec(f, false); }

// ------------------------------------------------- skolemize_and_clausify

namespace {

// In NNF. under_forall tracks whether we passed a universal quantifier.
FormulaPtr skolemize_rec(const FormulaPtr& f, Signature& sig, bool under_forall,
                         std::vector<std::string>& skolems) {
    switch (f->kind) {
        case Formula::Kind::True:
        case Formula::Kind::False:
        case Formula::Kind::Atomic:
        case Formula::Kind::Not:
            return f;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::vector<FormulaPtr> kids;
            for (auto& k : f->kids) kids.push_back(skolemize_rec(k, sig, under_forall, skolems));
            return f->kind == Formula::Kind::And ? Formula::conj(std::move(kids))
                                                 : Formula::disj(std::move(kids));
        }
        case Formula::Kind::Forall:
            return Formula::forall(f->qvars,
                                   skolemize_rec(f->body, sig, true, skolems));
        case Formula::Kind::Exists: {
            if (under_forall)
                throw UnknownResult("nested Skolem function required");
            std::map<std::string, Term> sigma;
            for (auto& v : f->qvars) {
                auto& d = sig.declare_fresh_constant(v.name, v.sort);
                skolems.push_back(d.name);
                sigma.emplace(v.name, Term::constant(d.name, v.sort));
            }
            return skolemize_rec(substitute(f->body, sigma), sig, under_forall, skolems);
        }
    }
    throw InternalError("skolemize: unreachable");
}

void cnf_rec(const FormulaPtr& f, std::vector<Clause>& acc, size_t limit) {
    switch (f->kind) {
        case Formula::Kind::True:
            return;
        case Formula::Kind::False:
            acc.push_back(Clause{});
            return;
        case Formula::Kind::Atomic:
            acc.push_back(Clause{{Literal::pos(f->atom)}});
            return;
        case Formula::Kind::Not: {
            if (f->kids[0]->kind != Formula::Kind::Atomic)
                throw InternalError("cnf: non-literal negation");
            Literal l = Literal::negd(f->kids[0]->atom);
            if (l.neg && l.atom.kind == Atom::Kind::Eq) {
                // t != s  ==  t < s or t > s on ordered sorts
                acc.push_back(Clause{{Literal::pos(Atom::lt(l.atom.s, Term())),
                                      Literal::pos(Atom::lt(-l.atom.s, Term()))}});
            } else {
                acc.push_back(Clause{{l}});
            }
            return;
        }
        case Formula::Kind::And:
            for (auto& k : f->kids) cnf_rec(k, acc, limit);
            return;
        case Formula::Kind::Or: {
            std::vector<std::vector<Clause>> parts;
            for (auto& k : f->kids) {
                std::vector<Clause> cs;
                cnf_rec(k, cs, limit);
                parts.push_back(std::move(cs));
            }
            // distribute
            std::vector<Clause> cur = {Clause{}};
            for (auto& cs : parts) {
                std::vector<Clause> next;
                for (auto& base : cur)
                    for (auto& c : cs) {
                        Clause merged = base;
                        for (auto& l : c.lits) merged.lits.push_back(l);
                        next.push_back(std::move(merged));
                        if (next.size() > limit) throw UnknownResult("CNF blowup");
                    }
                cur = std::move(next);
            }
            for (auto& c : cur) acc.push_back(std::move(c));
            return;
        }
        case Formula::Kind::Forall: {
            // free variables of a clause are implicitly universal; strip
            cnf_rec(f->body, acc, limit);
            return;
        }
        default:
            throw InternalError("cnf: not in NNF");
    }
}

}  // namespace

ClausifyResult skolemize_and_clausify(const FormulaPtr& f, Signature& sig) {
    ClausifyResult res;
    FormulaPtr n = nnf(f);
    FormulaPtr sk = skolemize_rec(n, sig, false, res.skolems);
    std::vector<Clause> raw;
    cnf_rec(sk, raw, 4096);
    // tidy: drop duplicate literals, tautologies, duplicate clauses
    std::set<Clause> seen;
    for (auto& c : raw) {
        std::sort(c.lits.begin(), c.lits.end());
        c.lits.erase(std::unique(c.lits.begin(), c.lits.end()), c.lits.end());
        bool taut = false;
        for (auto& l : c.lits) {
            if (auto v = l.const_value(); v && *v) { taut = true; break; }
            for (auto& l2 : c.lits)
                if (l2 == l.negated()) { taut = true; break; }
            if (taut) break;
        }
        // drop constant-false literals
        Clause kept;
        for (auto& l : c.lits) {
            auto v = l.const_value();
            if (v && !*v) continue;
            kept.lits.push_back(l);
        }
        if (taut) continue;
        if (seen.insert(kept).second) res.clauses.push_back(kept);
    }
    return res;
}

// -------------------------------------------------------------------- DNF

namespace {

bool cube_add(Cube& cube, const Literal& l) {
    // returns false if the cube becomes trivially contradictory
    if (auto v = l.const_value()) return *v;
    Literal neg = l.negated();
    for (auto& x : cube) {
        if (x == l) return true;
        if (x == neg) return false;
        // s <= 0 together with -s < 0 style checks are handled by the solver;
        // here only syntactic complements are pruned.
    }
    cube.push_back(l);
    return true;
}

void dnf_rec(const FormulaPtr& f, std::vector<Cube>& acc, Cube cur, size_t limit) {
    switch (f->kind) {
        case Formula::Kind::True:
            acc.push_back(std::move(cur));
            if (acc.size() > limit) throw UnknownResult("DNF blowup");
            return;
        case Formula::Kind::False:
            return;
        case Formula::Kind::Atomic:
            if (!cube_add(cur, Literal::pos(f->atom))) return;
            acc.push_back(std::move(cur));
            if (acc.size() > limit) throw UnknownResult("DNF blowup");
            return;
        case Formula::Kind::Not: {
            if (f->kids[0]->kind != Formula::Kind::Atomic)
                throw InternalError("dnf: not in NNF");
            Literal l = Literal::negd(f->kids[0]->atom);
            if (l.neg && l.atom.kind == Atom::Kind::Eq) {
                // disequality splits the cube
                Cube a = cur, b = std::move(cur);
                if (cube_add(a, Literal::pos(Atom::lt(l.atom.s, Term())))) {
                    acc.push_back(std::move(a));
                    if (acc.size() > limit) throw UnknownResult("DNF blowup");
                }
                if (cube_add(b, Literal::pos(Atom::lt(-l.atom.s, Term())))) {
                    acc.push_back(std::move(b));
                    if (acc.size() > limit) throw UnknownResult("DNF blowup");
                }
                return;
            }
            if (!cube_add(cur, l)) return;
            acc.push_back(std::move(cur));
            if (acc.size() > limit) throw UnknownResult("DNF blowup");
            return;
        }
        case Formula::Kind::Or:
            for (auto& k : f->kids) dnf_rec(k, acc, cur, limit);
            return;
        case Formula::Kind::And: {
            // expand one conjunct at a time over the accumulated cubes
            std::vector<Cube> cur_set = {std::move(cur)};
            for (auto& k : f->kids) {
                std::vector<Cube> next;
                for (auto& c : cur_set) dnf_rec(k, next, c, limit);
                cur_set = std::move(next);
                if (cur_set.empty()) return;
            }
            for (auto& c : cur_set) {
                acc.push_back(std::move(c));
                if (acc.size() > limit) throw UnknownResult("DNF blowup");
            }
            return;
        }
        default:
            throw InternalError("dnf: quantifier or non-NNF node");
    }
}

}  // namespace

std::vector<Cube> to_dnf(const FormulaPtr& f, size_t cube_limit) {
    if (!f->quantifier_free()) throw InternalError("to_dnf: quantified input");
    FormulaPtr n = nnf(f);
    std::vector<Cube> acc;
    dnf_rec(n, acc, Cube{}, cube_limit);
    // prune syntactic duplicates and supersets (a superset cube is entailed
    // by its subset cube, so for satisfiability it is redundant)
    for (auto& c : acc) std::sort(c.begin(), c.end());
    std::sort(acc.begin(), acc.end(), [](const Cube& a, const Cube& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = 0; i < a.size(); ++i)
            if (int k = a[i].compare(b[i])) return k < 0;
        return false;
    });
    std::vector<Cube> out;
    for (auto& c : acc) {
        bool subsumed = false;
        for (auto& prev : out) {
            if (std::includes(c.begin(), c.end(), prev.begin(), prev.end(),
                              [](const Literal& x, const Literal& y) { return x < y; })) {
                subsumed = true;
                break;
            }
        }
        if (!subsumed) out.push_back(c);
    }
    return out;
}

FormulaPtr dnf_to_formula(const std::vector<Cube>& cubes) {
    std::vector<FormulaPtr> ds;
    for (auto& c : cubes) ds.push_back(Formula::from_cube(c));
    return Formula::disj(std::move(ds));
}

}  // namespace pvs
