#include "parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "diagnostics.hpp"

namespace pvs {

std::string certificate_name(CertificateKind k) {
    switch (k) {
        case CertificateKind::FreeFunctions: return "free";
        case CertificateKind::GuardedBounded: return "bounded";
        case CertificateKind::Monotone: return "monotone";
        case CertificateKind::UpdateRules: return "update";
        case CertificateKind::Convexity: return "convexity";
        case CertificateKind::LinearCombinationBounds: return "combination";
        case CertificateKind::UserAsserted: return "asserted";
    }
    return "?";
}

std::optional<CertificateKind> certificate_from_name(const std::string& s) {
    if (s == "free") return CertificateKind::FreeFunctions;
    if (s == "bounded") return CertificateKind::GuardedBounded;
    if (s == "monotone") return CertificateKind::Monotone;
    if (s == "update") return CertificateKind::UpdateRules;
    if (s == "convexity") return CertificateKind::Convexity;
    if (s == "combination") return CertificateKind::LinearCombinationBounds;
    if (s == "asserted") return CertificateKind::UserAsserted;
    return std::nullopt;
}

namespace {

enum class Tok {
    Ident, Number, String,
    LParen, RParen, LBrace, RBrace,
    Comma, Semi, Colon, Dot,
    Plus, Minus, Star, Slash,
    Eq, Neq, Le, Lt, Ge, Gt,
    Arrow, DArrow, AndKw, OrKw, NotKw,
    Forall, Exists, TrueKw, FalseKw,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    SourceLoc loc;
};

class Lexer {
public:
    Lexer(const std::string& text, const std::string& file) : s_(text), file_(file) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_ws();
            SourceLoc loc{file_, line_, col_};
            if (pos_ >= s_.size()) {
                out.push_back({Tok::End, "", loc});
                return out;
            }
            char c = s_[pos_];
            if (std::isalpha((unsigned char)c) || c == '_') {
                std::string id;
                while (pos_ < s_.size() &&
                       (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_' ||
                        s_[pos_] == '\'')) {
                    id += s_[pos_];
                    advance();
                }
                Tok k = Tok::Ident;
                if (id == "and") k = Tok::AndKw;
                else if (id == "or") k = Tok::OrKw;
                else if (id == "not") k = Tok::NotKw;
                else if (id == "forall") k = Tok::Forall;
                else if (id == "exists") k = Tok::Exists;
                else if (id == "true") k = Tok::TrueKw;
                else if (id == "false") k = Tok::FalseKw;
                out.push_back({k, id, loc});
                continue;
            }
            if (std::isdigit((unsigned char)c)) {
                std::string num;
                while (pos_ < s_.size() &&
                       (std::isdigit((unsigned char)s_[pos_]) || s_[pos_] == '.')) {
                    num += s_[pos_];
                    advance();
                }
                out.push_back({Tok::Number, num, loc});
                continue;
            }
            if (c == '"') {
                advance();
                std::string str;
                while (pos_ < s_.size() && s_[pos_] != '"') {
                    str += s_[pos_];
                    advance();
                }
                if (pos_ >= s_.size()) throw InputError(loc, "unterminated string");
                advance();
                out.push_back({Tok::String, str, loc});
                continue;
            }
            auto two = [&](char a, char b) {
                return c == a && pos_ + 1 < s_.size() && s_[pos_ + 1] == b;
            };
            if (two('<', '=')) { out.push_back({Tok::Le, "<=", loc}); advance(); advance(); continue; }
            if (two('>', '=')) { out.push_back({Tok::Ge, ">=", loc}); advance(); advance(); continue; }
            if (two('!', '=')) { out.push_back({Tok::Neq, "!=", loc}); advance(); advance(); continue; }
            if (two('-', '>')) { out.push_back({Tok::Arrow, "->", loc}); advance(); advance(); continue; }
            if (two('<', '-') && pos_ + 2 < s_.size() && s_[pos_ + 2] == '>') {
                out.push_back({Tok::DArrow, "<->", loc});
                advance(); advance(); advance();
                continue;
            }
            switch (c) {
                case '(': out.push_back({Tok::LParen, "(", loc}); break;
                case ')': out.push_back({Tok::RParen, ")", loc}); break;
                case '{': out.push_back({Tok::LBrace, "{", loc}); break;
                case '}': out.push_back({Tok::RBrace, "}", loc}); break;
                case ',': out.push_back({Tok::Comma, ",", loc}); break;
                case ';': out.push_back({Tok::Semi, ";", loc}); break;
                case ':': out.push_back({Tok::Colon, ":", loc}); break;
                case '.': out.push_back({Tok::Dot, ".", loc}); break;
                case '+': out.push_back({Tok::Plus, "+", loc}); break;
                case '-': out.push_back({Tok::Minus, "-", loc}); break;
                case '*': out.push_back({Tok::Star, "*", loc}); break;
                case '/': out.push_back({Tok::Slash, "/", loc}); break;
                case '=': out.push_back({Tok::Eq, "=", loc}); break;
                case '<': out.push_back({Tok::Lt, "<", loc}); break;
                case '>': out.push_back({Tok::Gt, ">", loc}); break;
                default:
                    throw InputError(loc, std::string("unexpected character '") + c + "'");
            }
            advance();
        }
    }

private:
    void advance() {
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (std::isspace((unsigned char)c)) {
                advance();
            } else {
                return;
            }
        }
    }
    const std::string& s_;
    std::string file_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> toks, Problem& p) : toks_(std::move(toks)), p_(p) {}

    void run() {
        while (!at(Tok::End)) top_decl();
        validate();
    }

    FormulaPtr parse_single_formula() {
        FormulaPtr f = formula({});
        expect(Tok::End, "end of input");
        return f;
    }

private:
    // ------------------------------------------------------------ helpers
    const Token& cur() const { return toks_[i_]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool at_kw(const std::string& kw) const { return at(Tok::Ident) && cur().text == kw; }
    Token eat() { return toks_[i_++]; }
    Token expect(Tok k, const std::string& what) {
        if (!at(k)) throw InputError(cur().loc, "expected " + what + ", found '" + cur().text + "'");
        return eat();
    }
    Token expect_kw(const std::string& kw) {
        if (!at_kw(kw)) throw InputError(cur().loc, "expected '" + kw + "', found '" + cur().text + "'");
        return eat();
    }
    [[noreturn]] void fail(const std::string& msg) { throw InputError(cur().loc, msg); }

    Sort sort_ref() {
        Token t = expect(Tok::Ident, "sort name");
        const Sort* s = p_.sig.find_sort(t.text);
        if (!s) throw InputError(t.loc, "unknown sort: " + t.text);
        return *s;
    }

    std::vector<std::string> ident_list_braced() {
        expect(Tok::LBrace, "'{'");
        std::vector<std::string> out;
        while (!at(Tok::RBrace)) {
            out.push_back(expect(Tok::Ident, "identifier").text);
            if (at(Tok::Comma)) eat();
        }
        eat();
        return out;
    }

    // ---------------------------------------------------------- top level
    void top_decl() {
        Token t = expect(Tok::Ident, "declaration keyword");
        const std::string& kw = t.text;
        if (kw == "problem") {
            p_.name = expect(Tok::String, "problem name string").text;
            expect(Tok::Semi, "';'");
        } else if (kw == "sorts") {
            sorts_block();
        } else if (kw == "functions") {
            functions_block();
        } else if (kw == "predicates") {
            predicates_block();
        } else if (kw == "params") {
            for (auto& n : ident_list_braced()) {
                FuncDecl* d = p_.sig.find_mut(n);
                if (!d) throw InputError(t.loc, "undeclared symbol in params: " + n);
                d->is_param = true;
                p_.params.push_back(n);
            }
        } else if (kw == "level") {
            level_block();
        } else if (kw == "system") {
            system_block();
        } else if (kw == "invariant") {
            p_.invariant = formula_stmt();
        } else if (kw == "goal") {
            p_.goal = formula_stmt();
        } else if (kw == "assume") {
            assume_stmt();
        } else if (kw == "derived") {
            expect(Tok::Minus, "'-'");
            expect_kw("constraint");
            derived_block();
        } else if (kw == "keep") {
            for (auto& n : ident_list_braced()) p_.keep.push_back(n);
        } else if (kw == "case") {
            Token n = expect(Tok::Number, "case number");
            p_.case_override = std::stoi(n.text);
            if (p_.case_override < 1 || p_.case_override > 3)
                throw InputError(n.loc, "case must be 1, 2 or 3");
            expect(Tok::Semi, "';'");
        } else {
            throw InputError(t.loc, "unknown declaration: " + kw);
        }
    }

    void sorts_block() {
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            Token n = expect(Tok::Ident, "sort name");
            expect(Tok::Colon, "':'");
            Token k = expect(Tok::Ident, "sort kind (real, int, uninterpreted)");
            SortKind kind;
            if (k.text == "real") kind = SortKind::Real;
            else if (k.text == "int") kind = SortKind::Int;
            else if (k.text == "uninterpreted") kind = SortKind::Uninterp;
            else throw InputError(k.loc, "unknown sort kind: " + k.text);
            p_.sig.add_sort(n.text, kind);
            expect(Tok::Semi, "';'");
        }
        eat();
    }

    void functions_block() {
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            Token n = expect(Tok::Ident, "function name");
            expect(Tok::Colon, "':'");
            FuncDecl d;
            d.name = n.text;
            if (at(Tok::LParen)) {
                eat();
                while (!at(Tok::RParen)) {
                    d.args.push_back(sort_ref());
                    if (at(Tok::Comma)) eat();
                }
                eat();
                expect(Tok::Arrow, "'->'");
                d.result = sort_ref();
            } else {
                Sort first = sort_ref();
                if (at(Tok::Arrow)) {
                    eat();
                    d.args.push_back(first);
                    d.result = sort_ref();
                } else {
                    d.result = first;
                }
            }
            try {
                p_.sig.declare(d);
            } catch (const InputError& e) {
                throw InputError(n.loc, e.message());
            }
            if (d.result.kind == SortKind::Int) p_.mixed_int = true;
            for (auto& a : d.args)
                if (a.kind == SortKind::Int) p_.mixed_int = true;
            expect(Tok::Semi, "';'");
        }
        eat();
    }

    void predicates_block() {
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            Token n = expect(Tok::Ident, "predicate name");
            PredDecl d;
            d.name = n.text;
            if (at(Tok::LParen)) {
                eat();
                while (!at(Tok::RParen)) {
                    d.args.push_back(sort_ref());
                    if (at(Tok::Comma)) eat();
                }
                eat();
            }
            try {
                p_.sig.declare_pred(d);
            } catch (const InputError& e) {
                throw InputError(n.loc, e.message());
            }
            expect(Tok::Semi, "';'");
        }
        eat();
    }

    void level_block() {
        Token n = expect(Tok::Number, "level number");
        ExtensionLevel lvl;
        lvl.level = std::stoi(n.text);
        if (lvl.level < 1) throw InputError(n.loc, "levels are numbered from 1");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            Token kw = expect(Tok::Ident, "level item (certificate, symbols, clauses)");
            if (kw.text == "certificate") {
                Token c = expect(Tok::Ident, "certificate name");
                auto k = certificate_from_name(c.text);
                if (!k) throw InputError(c.loc, "unknown certificate: " + c.text);
                lvl.certificate = *k;
                if (at_kw("waiver")) {
                    eat();
                    lvl.waiver = true;
                    lvl.waiver_reason = expect(Tok::String, "waiver reason string").text;
                }
                expect(Tok::Semi, "';'");
            } else if (kw.text == "symbols") {
                for (auto& s : ident_list_braced()) {
                    FuncDecl* d = p_.sig.find_mut(s);
                    if (!d) throw InputError(kw.loc, "undeclared symbol in level: " + s);
                    if (d->level != 0)
                        throw InputError(kw.loc, "symbol already assigned to a level: " + s);
                    d->level = lvl.level;
                    lvl.symbols.push_back(s);
                }
            } else if (kw.text == "clauses") {
                expect(Tok::LBrace, "'{'");
                while (!at(Tok::RBrace)) {
                    FormulaPtr f = formula({});
                    for (auto& c : formula_to_clauses(f, kw.loc)) lvl.clauses.push_back(c);
                    expect(Tok::Semi, "';'");
                }
                eat();
            } else {
                throw InputError(kw.loc, "unknown level item: " + kw.text);
            }
        }
        eat();
        p_.chain.push_back(std::move(lvl));
    }

    // Converts a parsed axiom formula (forall-prefixed, quantifier-free body)
    // into clauses with the universals as free clause variables.
    std::vector<Clause> formula_to_clauses(const FormulaPtr& f, SourceLoc loc) {
        Signature dummy;
        ClausifyResult r;
        try {
            r = skolemize_and_clausify(f, dummy);
        } catch (const UnknownResult& u) {
            throw InputError(loc, std::string("axiom not clausifiable: ") + u.reason());
        }
        if (!r.skolems.empty())
            throw InputError(loc, "existential quantifier in axiom clauses");
        return r.clauses;
    }

    void system_block() {
        Token t = expect(Tok::Ident, "system kind (transition or hybrid)");
        if (p_.transition || p_.hybrid) throw InputError(t.loc, "duplicate system block");
        if (t.text == "transition") transition_block();
        else if (t.text == "hybrid") hybrid_block();
        else throw InputError(t.loc, "unknown system kind: " + t.text);
    }

    // Declares the primed copy f' for every updatable symbol.
    void declare_primed(const std::string& name, SourceLoc loc) {
        const FuncDecl* d = p_.sig.find(name);
        if (!d) throw InputError(loc, "undeclared updatable symbol: " + name);
        FuncDecl pd = *d;
        pd.name = name + "'";
        pd.primed_of = name;
        pd.level = 0;  // assigned dynamically when VCs are built
        pd.is_param = false;
        p_.sig.declare(pd);
    }

    void transition_block() {
        TransitionSystem ts;
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            Token kw = expect(Tok::Ident, "transition item");
            if (kw.text == "vars") {
                for (auto& v : ident_list_braced()) {
                    ts.vars.push_back(v);
                    declare_primed(v, kw.loc);
                }
            } else if (kw.text == "funs") {
                for (auto& v : ident_list_braced()) {
                    ts.funcs.push_back(v);
                    declare_primed(v, kw.loc);
                }
            } else if (kw.text == "init") {
                ts.init = formula_stmt();
            } else if (kw.text == "update") {
                UpdateRule r;
                r.name = expect(Tok::Ident, "update rule name").text;
                expect(Tok::Colon, "':'");
                r.formula = formula({});
                expect(Tok::Semi, "';'");
                ts.updates.push_back(std::move(r));
            } else {
                throw InputError(kw.loc, "unknown transition item: " + kw.text);
            }
        }
        eat();
        p_.transition = std::move(ts);
    }

    void hybrid_block() {
        HybridAutomaton ha;
        Token k = expect(Tok::Ident, "hybrid kind (lha, plha, pha)");
        if (k.text == "lha") ha.kind = HybridKind::LHA;
        else if (k.text == "plha") ha.kind = HybridKind::PLHA;
        else if (k.text == "pha") ha.kind = HybridKind::PHA;
        else throw InputError(k.loc, "unknown hybrid kind: " + k.text);
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            Token kw = expect(Tok::Ident, "hybrid item");
            if (kw.text == "vars") {
                for (auto& v : ident_list_braced()) {
                    ha.vars.push_back(v);
                    // continuous variables are declared by the user as
                    // real constants; primed copies for jumps:
                    declare_primed(v, kw.loc);
                }
            } else if (kw.text == "points") {
                Token n = expect(Tok::Number, "instant count");
                ha.mean_value_points = std::stoi(n.text);
                if (ha.mean_value_points < 2)
                    throw InputError(n.loc, "points must be at least 2");
                expect(Tok::Semi, "';'");
            } else if (kw.text == "mode") {
                Mode m;
                m.name = expect(Tok::Ident, "mode name").text;
                expect(Tok::LBrace, "'{'");
                VarEnv tenv{{"t", hybrid_time_sort()}};
                while (!at(Tok::RBrace)) {
                    Token mi = expect(Tok::Ident, "mode item");
                    if (mi.text == "inv") {
                        m.invariant = formula_stmt(tenv);
                    } else if (mi.text == "init") {
                        m.init = formula_stmt(tenv);
                    } else if (mi.text == "flow") {
                        if (at_kw("ode")) {
                            eat();
                            FlowOde ode;
                            ode.var = expect(Tok::Ident, "continuous variable").text;
                            expect(Tok::Eq, "'='");
                            ode.rhs = term(tenv);
                            expect(Tok::Semi, "';'");
                            m.ode = std::move(ode);
                        } else {
                            in_flow_ = true;
                            m.flow.push_back(formula_stmt(tenv));
                            in_flow_ = false;
                        }
                    } else {
                        throw InputError(mi.loc, "unknown mode item: " + mi.text);
                    }
                }
                eat();
                ha.modes.push_back(std::move(m));
            } else if (kw.text == "edge") {
                Edge e;
                e.from = expect(Tok::Ident, "source mode").text;
                expect(Tok::Arrow, "'->'");
                e.to = expect(Tok::Ident, "target mode").text;
                expect(Tok::LBrace, "'{'");
                VarEnv tenv{{"t", hybrid_time_sort()}};
                while (!at(Tok::RBrace)) {
                    Token ei = expect(Tok::Ident, "edge item");
                    if (ei.text == "guard") e.guard = formula_stmt(tenv);
                    else if (ei.text == "jump") e.jump = formula_stmt(tenv);
                    else throw InputError(ei.loc, "unknown edge item: " + ei.text);
                }
                eat();
                ha.edges.push_back(std::move(e));
            } else {
                throw InputError(kw.loc, "unknown hybrid item: " + kw.text);
            }
        }
        eat();
        p_.hybrid = std::move(ha);
    }

    Sort hybrid_time_sort() { return real_sort(); }

    FormulaPtr formula_stmt(const VarEnv& env = {}) {
        if (at(Tok::Colon)) eat();
        FormulaPtr f = formula(env);
        expect(Tok::Semi, "';'");
        return f;
    }

    void assume_stmt() {
        if (at(Tok::Colon)) eat();
        FormulaPtr f = formula({});
        expect(Tok::Semi, "';'");
        split_assumption(f);
    }

    void split_assumption(const FormulaPtr& f) {
        if (f->kind == Formula::Kind::And) {
            for (auto& k : f->kids) split_assumption(k);
            return;
        }
        if (f->quantifier_free() && f->ground()) {
            p_.gamma0.push_back(f);
            return;
        }
        Signature dummy;
        FormulaPtr n = nnf(f);
        if (!n->quantifier_free()) {
            // universally quantified over functional parameters
            ClausifyResult r = skolemize_and_clausify(n, p_.sig);
            if (!r.skolems.empty())
                throw InputError("existential assumptions are not supported");
            for (auto& c : r.clauses) p_.gamma_sigma.push_back(c);
            return;
        }
        ClausifyResult r = skolemize_and_clausify(n, dummy);
        for (auto& c : r.clauses) p_.gamma_sigma.push_back(c);
    }

    void derived_block() {
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            if (at_kw("weakest")) {
                eat();
                expect(Tok::Colon, "':'");
                Token v = expect(Tok::Ident, "yes/no");
                if (v.text != "yes" && v.text != "no")
                    throw InputError(v.loc, "expected yes or no");
                expect(Tok::Semi, "';'");
                continue;
            }
            FormulaPtr f = formula({});
            expect(Tok::Semi, "';'");
            split_assumption(f);  // re-imported constraints act as assumptions
        }
        eat();
    }

    // ----------------------------------------------------------- formulas
    using VarEnv = std::map<std::string, Sort>;

    FormulaPtr formula(const VarEnv& env) { return iff_expr(env); }

    FormulaPtr iff_expr(const VarEnv& env) {
        FormulaPtr a = impl_expr(env);
        while (at(Tok::DArrow)) {
            eat();
            FormulaPtr b = impl_expr(env);
            a = Formula::iff(a, b);
        }
        return a;
    }

    FormulaPtr impl_expr(const VarEnv& env) {
        FormulaPtr a = or_expr(env);
        if (at(Tok::Arrow)) {
            eat();
            FormulaPtr b = impl_expr(env);  // right associative
            return Formula::impl(a, b);
        }
        return a;
    }

    FormulaPtr or_expr(const VarEnv& env) {
        FormulaPtr a = and_expr(env);
        std::vector<FormulaPtr> parts{a};
        while (at(Tok::OrKw)) {
            eat();
            parts.push_back(and_expr(env));
        }
        return parts.size() == 1 ? a : Formula::disj(std::move(parts));
    }

    FormulaPtr and_expr(const VarEnv& env) {
        FormulaPtr a = not_expr(env);
        std::vector<FormulaPtr> parts{a};
        while (at(Tok::AndKw)) {
            eat();
            parts.push_back(not_expr(env));
        }
        return parts.size() == 1 ? a : Formula::conj(std::move(parts));
    }

    FormulaPtr not_expr(const VarEnv& env) {
        if (at(Tok::NotKw)) {
            eat();
            return Formula::negate(not_expr(env));
        }
        if (at(Tok::Forall) || at(Tok::Exists)) {
            bool fa = at(Tok::Forall);
            eat();
            std::vector<Formula::QuantVar> vs;
            VarEnv inner = env;
            while (true) {
                Token n = expect(Tok::Ident, "variable name");
                expect(Tok::Colon, "':'");
                Sort s = sort_ref();
                vs.push_back({n.text, s});
                inner[n.text] = s;
                if (at(Tok::Comma)) { eat(); continue; }
                break;
            }
            expect(Tok::Dot, "'.'");
            FormulaPtr body = not_expr(inner);
            return fa ? Formula::forall(vs, body) : Formula::exists(vs, body);
        }
        return atom_expr(env);
    }

    FormulaPtr atom_expr(const VarEnv& env) {
        if (at(Tok::TrueKw)) { eat(); return Formula::tru(); }
        if (at(Tok::FalseKw)) { eat(); return Formula::fls(); }
        // predicate atoms: ident '(' ... ')' where ident is a declared predicate
        if (at(Tok::Ident) && p_.sig.find_pred(cur().text)) {
            Token n = eat();
            const PredDecl* d = p_.sig.find_pred(n.text);
            std::vector<Term> args;
            if (at(Tok::LParen)) {
                eat();
                while (!at(Tok::RParen)) {
                    args.push_back(term(env));
                    if (at(Tok::Comma)) eat();
                }
                eat();
            }
            if (args.size() != d->args.size())
                throw InputError(n.loc, "predicate arity mismatch for " + n.text);
            for (size_t k = 0; k < args.size(); ++k) check_arg_sort(args[k], d->args[k], n.loc);
            return Formula::atomf(Atom::pred_atom(n.text, std::move(args)));
        }
        if (at(Tok::LParen)) {
            // could be a parenthesized formula or a parenthesized term; try
            // formula first by scanning for a relation at depth 0
            size_t save = i_;
            try {
                eat();
                FormulaPtr f = formula(env);
                expect(Tok::RParen, "')'");
                // if followed by a relation the parens were part of a term
                if (at(Tok::Le) || at(Tok::Lt) || at(Tok::Ge) || at(Tok::Gt) || at(Tok::Eq) ||
                    at(Tok::Neq) || at(Tok::Plus) || at(Tok::Minus) || at(Tok::Star) ||
                    at(Tok::Slash)) {
                    i_ = save;
                } else {
                    return f;
                }
            } catch (const InputError&) {
                i_ = save;
            }
        }
        // relational atom: term rel term (with chained relations allowed)
        Term a = term(env);
        std::vector<FormulaPtr> chain;
        while (at(Tok::Le) || at(Tok::Lt) || at(Tok::Ge) || at(Tok::Gt) || at(Tok::Eq) ||
               at(Tok::Neq)) {
            Token relTok = cur();
            Tok rel = eat().kind;
            Term b = term(env);
            if (!a.sort().numeric() || !b.sort().numeric())
                throw InputError(relTok.loc,
                                 "relations require numeric sorts; use a predicate");
            switch (rel) {
                case Tok::Le: chain.push_back(Formula::atomf(Atom::le(a, b))); break;
                case Tok::Lt: chain.push_back(Formula::atomf(Atom::lt(a, b))); break;
                case Tok::Ge: chain.push_back(Formula::atomf(Atom::le(b, a))); break;
                case Tok::Gt: chain.push_back(Formula::atomf(Atom::lt(b, a))); break;
                case Tok::Eq: chain.push_back(Formula::atomf(Atom::eq(a, b))); break;
                case Tok::Neq:
                    chain.push_back(Formula::negate(Formula::atomf(Atom::eq(a, b))));
                    break;
                default: fail("unreachable");
            }
            a = b;
        }
        if (chain.empty()) fail("expected a relation in atom");
        return Formula::conj(std::move(chain));
    }

    void check_arg_sort(const Term& t, const Sort& expected, SourceLoc loc) {
        if (t.sort() == expected) return;
        if (expected.kind == SortKind::Real && t.sort().kind == SortKind::Int) return;
        throw InputError(loc, "argument sort mismatch: expected " + expected.name + ", found " +
                                  t.sort().name);
    }

    Term term(const VarEnv& env) {
        Term a = mul_term(env);
        while (at(Tok::Plus) || at(Tok::Minus)) {
            bool plus = eat().kind == Tok::Plus;
            Term b = mul_term(env);
            a = plus ? a + b : a - b;
        }
        return a;
    }

    Term mul_term(const VarEnv& env) {
        Term a = unary_term(env);
        while (at(Tok::Star) || at(Tok::Slash)) {
            bool mul = eat().kind == Tok::Star;
            Token opTok = toks_[i_ - 1];
            Term b = unary_term(env);
            if (mul) {
                a = a * b;
            } else {
                if (!b.is_rational() || b.constant_part() == 0)
                    throw InputError(opTok.loc, "division only by nonzero numeric literals");
                a = a.scaled(Rational(1) / b.constant_part());
            }
        }
        return a;
    }

    Term unary_term(const VarEnv& env) {
        if (at(Tok::Minus)) {
            eat();
            return -unary_term(env);
        }
        return prim_term(env);
    }

    Term prim_term(const VarEnv& env) {
        if (at(Tok::Number)) {
            Token n = eat();
            auto q = rational_from_string(n.text);
            if (!q) throw InputError(n.loc, "bad numeric literal: " + n.text);
            Sort s = is_integer(*q) && n.text.find('.') == std::string::npos ? int_sort()
                                                                             : real_sort();
            return Term::rational(*q, s);
        }
        if (at(Tok::LParen)) {
            eat();
            Term t = term(env);
            expect(Tok::RParen, "')'");
            return t;
        }
        Token n = expect(Tok::Ident, "term");
        if (in_flow_ && n.text == "der" && at(Tok::LParen)) {
            eat();
            Token v = expect(Tok::Ident, "variable under der()");
            expect(Tok::RParen, "')'");
            return Term::constant("der!" + v.text, real_sort());
        }
        auto ev = env.find(n.text);
        if (ev != env.end()) {
            if (at(Tok::LParen)) throw InputError(n.loc, "variable used as function: " + n.text);
            return Term::var(n.text, ev->second);
        }
        const FuncDecl* d = p_.sig.find(n.text);
        if (!d) throw InputError(n.loc, "undeclared symbol: " + n.text);
        if (at(Tok::LParen)) {
            eat();
            std::vector<Term> args;
            while (!at(Tok::RParen)) {
                args.push_back(term(env));
                if (at(Tok::Comma)) eat();
            }
            eat();
            if (args.size() != d->args.size())
                throw InputError(n.loc, "arity mismatch for " + n.text + ": expected " +
                                            std::to_string(d->args.size()) + ", found " +
                                            std::to_string(args.size()));
            for (size_t k = 0; k < args.size(); ++k) check_arg_sort(args[k], d->args[k], n.loc);
            return Term::app(n.text, std::move(args), d->result);
        }
        if (!d->is_constant())
            throw InputError(n.loc, "function used without arguments: " + n.text);
        return Term::constant(n.text, d->result);
    }

    // --------------------------------------------------------- validation
    void validate() {
        // chain well-formedness: clauses at level i must not mention
        // extension symbols of level j > i
        for (auto& lvl : p_.chain) {
            for (auto& c : lvl.clauses) {
                std::set<std::string> consts;
                for (auto& l : c.lits) {
                    if (l.atom.is_arith()) l.atom.s.collect_constants(consts);
                    for (auto& a : l.atom.args) a.collect_constants(consts);
                }
                auto scan_apps = [&](const Term& t) {
                    std::vector<Term> apps;
                    t.collect_apps(apps);
                    for (auto& a : apps) {
                        const FuncDecl* d = p_.sig.find(a.the_monomial().name());
                        if (d && d->level > lvl.level)
                            throw InputError("clause at level " + std::to_string(lvl.level) +
                                             " mentions level-" + std::to_string(d->level) +
                                             " symbol " + d->name);
                    }
                };
                for (auto& l : c.lits) {
                    if (l.atom.is_arith()) scan_apps(l.atom.s);
                    for (auto& a : l.atom.args) scan_apps(a);
                }
                for (auto& cn : consts) {
                    const FuncDecl* d = p_.sig.find(cn);
                    if (d && d->level > lvl.level)
                        throw InputError("clause at level " + std::to_string(lvl.level) +
                                         " mentions level-" + std::to_string(d->level) +
                                         " symbol " + cn);
                }
            }
        }
        // sorted chain
        std::sort(p_.chain.begin(), p_.chain.end(),
                  [](const ExtensionLevel& a, const ExtensionLevel& b) { return a.level < b.level; });
    }

    std::vector<Token> toks_;
    Problem& p_;
    size_t i_ = 0;
    bool in_flow_ = false;
};

}  // namespace

Problem parse_problem(const std::string& text, const std::string& filename) {
    Problem p;
    Lexer lex(text, filename);
    Parser parser(lex.run(), p);
    parser.run();
    return p;
}

Problem parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str(), path);
}

FormulaPtr parse_formula_text(const std::string& text, const Problem& p) {
    Problem copy = p;  // parser needs a mutable problem for its signature
    Lexer lex(text, "<formula>");
    Parser parser(lex.run(), copy);
    return parser.parse_single_formula();
}

}  // namespace pvs
