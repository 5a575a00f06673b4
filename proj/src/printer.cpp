#include "printer.hpp"

#include <sstream>

namespace pvs {

namespace {

std::string print_monomial(const Monomial& m);

std::string term_str(const Term& t, bool parens_if_sum) {
    std::ostringstream os;
    bool sum = t.monomials().size() + (t.constant_part() != 0 ? 1 : 0) > 1;
    if (parens_if_sum && sum) os << "(";
    if (t.monomials().empty()) {
        os << to_string(t.constant_part());
    } else {
        bool first = true;
        for (auto& [q, m] : t.monomials()) {
            Rational aq = q < 0 ? Rational(-q) : q;
            if (first) {
                if (q < 0) os << "-";
            } else {
                os << (q < 0 ? " - " : " + ");
            }
            first = false;
            if (aq != 1) os << to_string(aq) << "*";
            os << print_monomial(m);
        }
        if (t.constant_part() != 0) {
            Rational c = t.constant_part();
            os << (c < 0 ? " - " : " + ") << to_string(c < 0 ? Rational(-c) : c);
        }
    }
    if (parens_if_sum && sum) os << ")";
    return os.str();
}

std::string print_monomial(const Monomial& m) {
    switch (m.kind()) {
        case Monomial::Kind::Var:
        case Monomial::Kind::Const:
            return m.name();
        case Monomial::Kind::App: {
            std::string s = m.name() + "(";
            for (size_t i = 0; i < m.args().size(); ++i) {
                if (i) s += ", ";
                s += term_str(m.args()[i], false);
            }
            return s + ")";
        }
        case Monomial::Kind::Prod: {
            std::string s;
            for (size_t i = 0; i < m.factors().size(); ++i) {
                if (i) s += "*";
                s += term_str(m.factors()[i], true);
            }
            return s;
        }
    }
    return "?";
}

// Splits s rel 0 into a readable lhs rel rhs: negative-coefficient monomials
// and the constant move to the right-hand side.
std::string atom_str(const Atom& a) {
    if (a.kind == Atom::Kind::Pred) {
        std::string s = a.pred;
        if (!a.args.empty()) {
            s += "(";
            for (size_t i = 0; i < a.args.size(); ++i) {
                if (i) s += ", ";
                s += term_str(a.args[i], false);
            }
            s += ")";
        }
        return s;
    }
    Term lhs, rhs;
    lhs = Term::rational(0, a.s.sort());
    rhs = Term::rational(0, a.s.sort());
    for (auto& [q, m] : a.s.monomials()) {
        if (q > 0) lhs = lhs + Term::monomial(q, m);
        else rhs = rhs + Term::monomial(-q, m);
    }
    if (a.s.constant_part() > 0) lhs = lhs + Term::rational(a.s.constant_part());
    else if (a.s.constant_part() < 0) rhs = rhs + Term::rational(-a.s.constant_part());
    std::string rel = a.kind == Atom::Kind::Le ? " <= " : a.kind == Atom::Kind::Lt ? " < " : " = ";
    return term_str(lhs, false) + rel + term_str(rhs, false);
}

int prec(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::Iff: return 1;
        case Formula::Kind::Impl: return 2;
        case Formula::Kind::Or: return 3;
        case Formula::Kind::And: return 4;
        case Formula::Kind::Not: return 5;
        default: return 6;
    }
}

std::string formula_str(const FormulaPtr& f, int outer) {
    int p = prec(f->kind);
    std::string s;
    switch (f->kind) {
        case Formula::Kind::True: s = "true"; break;
        case Formula::Kind::False: s = "false"; break;
        case Formula::Kind::Atomic: s = atom_str(f->atom); break;
        case Formula::Kind::Not: s = "not " + formula_str(f->kids[0], p); break;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            std::string op = f->kind == Formula::Kind::And ? " and " : " or ";
            for (size_t i = 0; i < f->kids.size(); ++i) {
                if (i) s += op;
                s += formula_str(f->kids[i], p + 1);
            }
            break;
        }
        case Formula::Kind::Impl:
            s = formula_str(f->kids[0], p + 1) + " -> " + formula_str(f->kids[1], p);
            break;
        case Formula::Kind::Iff:
            s = formula_str(f->kids[0], p + 1) + " <-> " + formula_str(f->kids[1], p + 1);
            break;
        case Formula::Kind::Forall:
        case Formula::Kind::Exists: {
            s = f->kind == Formula::Kind::Forall ? "forall " : "exists ";
            for (size_t i = 0; i < f->qvars.size(); ++i) {
                if (i) s += ", ";
                s += f->qvars[i].name + ":" + f->qvars[i].sort.name;
            }
            s += ". (" + formula_str(f->body, 0) + ")";
            p = 0;  // always parenthesize when nested
            break;
        }
    }
    if (p < outer) return "(" + s + ")";
    return s;
}

std::string sort_kind_name(SortKind k) {
    switch (k) {
        case SortKind::Real: return "real";
        case SortKind::Int: return "int";
        case SortKind::Uninterp: return "uninterpreted";
    }
    return "?";
}

}  // namespace

std::string print_term(const Term& t) { return term_str(t, false); }

std::string print_formula(const FormulaPtr& f) { return formula_str(f, 0); }

std::string print_clause(const Clause& c) {
    if (c.lits.empty()) return "false";
    std::string s;
    for (size_t i = 0; i < c.lits.size(); ++i) {
        if (i) s += " or ";
        const Literal& l = c.lits[i];
        if (l.neg) s += "not " + atom_str(l.atom);
        else s += atom_str(l.atom);
    }
    return s;
}

std::string pretty_print(const Problem& p) {
    std::ostringstream os;
    if (!p.name.empty()) os << "problem \"" << p.name << "\";\n\n";

    bool have_sorts = false;
    for (auto& [n, s] : p.sig.sorts())
        if (n != "real" && n != "int") have_sorts = true;
    if (have_sorts) {
        os << "sorts {\n";
        for (auto& [n, s] : p.sig.sorts())
            if (n != "real" && n != "int")
                os << "  " << n << ": " << sort_kind_name(s.kind) << ";\n";
        os << "}\n\n";
    }

    os << "functions {\n";
    for (auto& [n, d] : p.sig.functions()) {
        if (d.is_fresh || !d.primed_of.empty()) continue;
        os << "  " << n << ": ";
        if (d.args.empty()) {
            os << d.result.name;
        } else if (d.args.size() == 1) {
            os << d.args[0].name << " -> " << d.result.name;
        } else {
            os << "(";
            for (size_t i = 0; i < d.args.size(); ++i) {
                if (i) os << ", ";
                os << d.args[i].name;
            }
            os << ") -> " << d.result.name;
        }
        os << ";\n";
    }
    os << "}\n\n";

    if (!p.params.empty()) {
        os << "params { ";
        for (size_t i = 0; i < p.params.size(); ++i) {
            if (i) os << ", ";
            os << p.params[i];
        }
        os << " }\n\n";
    }

    for (auto& lvl : p.chain) {
        os << "level " << lvl.level << " {\n";
        os << "  certificate " << certificate_name(lvl.certificate);
        if (lvl.waiver) os << " waiver \"" << lvl.waiver_reason << "\"";
        os << ";\n";
        if (!lvl.symbols.empty()) {
            os << "  symbols { ";
            for (size_t i = 0; i < lvl.symbols.size(); ++i) {
                if (i) os << ", ";
                os << lvl.symbols[i];
            }
            os << " }\n";
        }
        if (!lvl.clauses.empty()) {
            os << "  clauses {\n";
            for (auto& c : lvl.clauses) {
                std::map<std::string, Sort> vars;
                c.collect_vars(vars);
                os << "    ";
                if (!vars.empty()) {
                    os << "forall ";
                    bool first = true;
                    for (auto& [n, s] : vars) {
                        if (!first) os << ", ";
                        first = false;
                        os << n << ":" << s.name;
                    }
                    os << ". (" << print_clause(c) << ");\n";
                } else {
                    os << print_clause(c) << ";\n";
                }
            }
            os << "  }\n";
        }
        os << "}\n\n";
    }

    if (p.transition) {
        const auto& ts = *p.transition;
        os << "system transition {\n";
        if (!ts.vars.empty()) {
            os << "  vars { ";
            for (size_t i = 0; i < ts.vars.size(); ++i) {
                if (i) os << ", ";
                os << ts.vars[i];
            }
            os << " }\n";
        }
        if (!ts.funcs.empty()) {
            os << "  funs { ";
            for (size_t i = 0; i < ts.funcs.size(); ++i) {
                if (i) os << ", ";
                os << ts.funcs[i];
            }
            os << " }\n";
        }
        if (ts.init) os << "  init: " << print_formula(ts.init) << ";\n";
        for (auto& u : ts.updates)
            os << "  update " << u.name << ": " << print_formula(u.formula) << ";\n";
        os << "}\n\n";
    }

    if (p.hybrid) {
        const auto& ha = *p.hybrid;
        os << "system hybrid "
           << (ha.kind == HybridKind::LHA ? "lha" : ha.kind == HybridKind::PLHA ? "plha" : "pha")
           << " {\n";
        if (!ha.vars.empty()) {
            os << "  vars { ";
            for (size_t i = 0; i < ha.vars.size(); ++i) {
                if (i) os << ", ";
                os << ha.vars[i];
            }
            os << " }\n";
        }
        if (ha.kind == HybridKind::PHA && ha.mean_value_points != 2)
            os << "  points " << ha.mean_value_points << ";\n";
        for (auto& m : ha.modes) {
            os << "  mode " << m.name << " {\n";
            if (m.invariant) os << "    inv: " << print_formula(m.invariant) << ";\n";
            if (m.init) os << "    init: " << print_formula(m.init) << ";\n";
            for (auto& fl : m.flow) os << "    flow: " << print_formula(fl) << ";\n";
            if (m.ode)
                os << "    flow ode " << m.ode->var << " = " << print_term(m.ode->rhs) << ";\n";
            os << "  }\n";
        }
        for (auto& e : ha.edges) {
            os << "  edge " << e.from << " -> " << e.to << " {\n";
            if (e.guard) os << "    guard: " << print_formula(e.guard) << ";\n";
            if (e.jump) os << "    jump: " << print_formula(e.jump) << ";\n";
            os << "  }\n";
        }
        os << "}\n\n";
    }

    if (p.invariant) os << "invariant: " << print_formula(p.invariant) << ";\n";
    if (p.goal) os << "goal: " << print_formula(p.goal) << ";\n";
    for (auto& g : p.gamma0) os << "assume: " << print_formula(g) << ";\n";
    for (auto& c : p.gamma_sigma) {
        std::map<std::string, Sort> vars;
        c.collect_vars(vars);
        os << "assume: ";
        if (!vars.empty()) {
            os << "forall ";
            bool first = true;
            for (auto& [n, s] : vars) {
                if (!first) os << ", ";
                first = false;
                os << n << ":" << s.name;
            }
            os << ". (" << print_clause(c) << ")";
        } else {
            os << print_clause(c);
        }
        os << ";\n";
    }
    if (!p.keep.empty()) {
        os << "keep { ";
        for (size_t i = 0; i < p.keep.size(); ++i) {
            if (i) os << ", ";
            os << p.keep[i];
        }
        os << " }\n";
    }
    if (p.case_override) os << "case " << p.case_override << ";\n";
    return os.str();
}

namespace {

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
    if (!a && !b) return true;
    if (!a || !b) return false;
    return a->equals(*b);
}

}  // namespace

bool problems_equal(const Problem& a, const Problem& b, std::string* why) {
    auto fail = [&](const std::string& w) {
        if (why) *why = w;
        return false;
    };
    if (a.name != b.name) return fail("name");
    if (a.params != b.params) return fail("params");
    if (a.chain.size() != b.chain.size()) return fail("chain size");
    for (size_t i = 0; i < a.chain.size(); ++i) {
        const auto &x = a.chain[i], &y = b.chain[i];
        if (x.level != y.level || x.symbols != y.symbols || x.certificate != y.certificate ||
            x.waiver != y.waiver)
            return fail("level " + std::to_string(x.level));
        if (x.clauses.size() != y.clauses.size()) return fail("level clause count");
        for (size_t j = 0; j < x.clauses.size(); ++j)
            if (!(x.clauses[j] == y.clauses[j])) return fail("level clause");
    }
    if (a.transition.has_value() != b.transition.has_value()) return fail("system kind");
    if (a.transition) {
        const auto &x = *a.transition, &y = *b.transition;
        if (x.vars != y.vars || x.funcs != y.funcs) return fail("transition symbols");
        if (!formula_eq(x.init, y.init)) return fail("init");
        if (x.updates.size() != y.updates.size()) return fail("update count");
        for (size_t i = 0; i < x.updates.size(); ++i)
            if (x.updates[i].name != y.updates[i].name ||
                !formula_eq(x.updates[i].formula, y.updates[i].formula))
                return fail("update " + x.updates[i].name);
    }
    if (a.hybrid.has_value() != b.hybrid.has_value()) return fail("system kind");
    if (a.hybrid) {
        const auto &x = *a.hybrid, &y = *b.hybrid;
        if (x.kind != y.kind || x.vars != y.vars || x.mean_value_points != y.mean_value_points)
            return fail("hybrid header");
        if (x.modes.size() != y.modes.size() || x.edges.size() != y.edges.size())
            return fail("hybrid sizes");
        for (size_t i = 0; i < x.modes.size(); ++i) {
            const auto &m = x.modes[i], &n = y.modes[i];
            if (m.name != n.name || !formula_eq(m.invariant, n.invariant) ||
                !formula_eq(m.init, n.init))
                return fail("mode " + m.name);
            if (m.flow.size() != n.flow.size()) return fail("mode flow count");
            for (size_t j = 0; j < m.flow.size(); ++j)
                if (!formula_eq(m.flow[j], n.flow[j])) return fail("mode flow");
            if (m.ode.has_value() != n.ode.has_value()) return fail("mode ode");
            if (m.ode && (m.ode->var != n.ode->var || m.ode->rhs != n.ode->rhs))
                return fail("mode ode");
        }
        for (size_t i = 0; i < x.edges.size(); ++i) {
            const auto &e = x.edges[i], &f = y.edges[i];
            if (e.from != f.from || e.to != f.to || !formula_eq(e.guard, f.guard) ||
                !formula_eq(e.jump, f.jump))
                return fail("edge");
        }
    }
    if (!formula_eq(a.invariant, b.invariant)) return fail("invariant");
    if (!formula_eq(a.goal, b.goal)) return fail("goal");
    if (a.gamma0.size() != b.gamma0.size()) return fail("gamma0 size");
    for (size_t i = 0; i < a.gamma0.size(); ++i)
        if (!formula_eq(a.gamma0[i], b.gamma0[i])) return fail("gamma0");
    if (a.gamma_sigma.size() != b.gamma_sigma.size()) return fail("gamma_sigma size");
    for (size_t i = 0; i < a.gamma_sigma.size(); ++i)
        if (!(a.gamma_sigma[i] == b.gamma_sigma[i])) return fail("gamma_sigma");
    if (a.keep != b.keep) return fail("keep");
    if (a.case_override != b.case_override) return fail("case");
    return true;
}

}  // namespace pvs
