#include "term.hpp"

#include <algorithm>
#include <sstream>

namespace pvs {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::var(const std::string& name, const Sort& sort) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = name;
    n->sort = sort;
    return Monomial(n);
}

Monomial Monomial::constant(const std::string& name, const Sort& sort) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->name = name;
    n->sort = sort;
    return Monomial(n);
}

Monomial Monomial::app(const std::string& fn, std::vector<Term> args, const Sort& sort) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::App;
    n->name = fn;
    n->sort = sort;
    n->args = std::move(args);
    return Monomial(n);
}

Monomial Monomial::prod(std::vector<Term> factors) {
    if (factors.empty()) throw InternalError("empty product");
    // Flatten factors that are themselves plain product monomials.
    std::vector<Term> flat;
    for (auto& f : factors) {
        if (f.is_plain_monomial() && f.the_monomial().is_prod()) {
            for (auto& g : f.the_monomial().factors()) flat.push_back(g);
        } else {
            flat.push_back(f);
        }
    }
    std::sort(flat.begin(), flat.end());
    if (flat.size() == 1 && flat[0].is_plain_monomial()) return flat[0].the_monomial();
    Sort s = int_sort();
    for (auto& f : flat) {
        if (!f.sort().numeric()) throw InputError("non-numeric factor in product: " + f.str());
        if (f.sort().kind == SortKind::Real) s = real_sort();
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prod;
    n->sort = s;
    n->factors = std::move(flat);
    return Monomial(n);
}

int Monomial::compare(const Monomial& o) const {
    if (node_ == o.node_) return 0;
    if (kind() != o.kind()) return kind() < o.kind() ? -1 : 1;
    switch (kind()) {
        case Kind::Var:
        case Kind::Const:
            return name().compare(o.name());
        case Kind::App: {
            if (int c = name().compare(o.name())) return c;
            if (args().size() != o.args().size())
                return args().size() < o.args().size() ? -1 : 1;
            for (size_t i = 0; i < args().size(); ++i)
                if (int c = args()[i].compare(o.args()[i])) return c;
            return 0;
        }
        case Kind::Prod: {
            if (factors().size() != o.factors().size())
                return factors().size() < o.factors().size() ? -1 : 1;
            for (size_t i = 0; i < factors().size(); ++i)
                if (int c = factors()[i].compare(o.factors()[i])) return c;
            return 0;
        }
    }
    return 0;
}

// -------------------------------------------------------------------- Term

Sort Term::join_sorts(const Sort& a, const Sort& b) {
    if (a == b) return a;
    if (!a.numeric() || !b.numeric())
        throw InputError("arithmetic on non-numeric sorts: " + a.name + ", " + b.name);
    // int embeds into real
    return (a.kind == SortKind::Real || b.kind == SortKind::Real) ? real_sort() : int_sort();
}

Term Term::rational(const Rational& q, const Sort& sort) {
    Term t;
    t.constant_ = q;
    t.sort_ = sort.numeric() ? sort : real_sort();
    return t;
}

Term Term::monomial(const Rational& coeff, const Monomial& m) {
    Term t;
    t.sort_ = m.sort();
    if (coeff != 0) t.ms_.push_back({coeff, m});
    if (!m.sort().numeric() && coeff != 1)
        throw InputError("arithmetic on non-numeric sort: " + m.sort().name);
    return t;
}

Term Term::var(const std::string& name, const Sort& sort) {
    return monomial(1, Monomial::var(name, sort));
}

Term Term::constant(const std::string& name, const Sort& sort) {
    return monomial(1, Monomial::constant(name, sort));
}

Term Term::app(const std::string& fn, std::vector<Term> args, const Sort& sort) {
    return monomial(1, Monomial::app(fn, std::move(args), sort));
}

void Term::normalize() {
    std::sort(ms_.begin(), ms_.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::pair<Rational, Monomial>> out;
    for (auto& [q, m] : ms_) {
        if (!out.empty() && out.back().second == m)
            out.back().first += q;
        else
            out.push_back({q, m});
    }
    ms_.clear();
    for (auto& e : out)
        if (e.first != 0) ms_.push_back(e);
}

Term Term::operator+(const Term& o) const {
    Term t;
    t.sort_ = join_sorts(sort_, o.sort_);
    if (!sort_.numeric()) throw InputError("arithmetic on non-numeric sort: " + sort_.name);
    t.constant_ = constant_ + o.constant_;
    t.ms_ = ms_;
    for (auto& e : o.ms_) t.ms_.push_back(e);
    t.normalize();
    return t;
}

Term Term::operator-() const { return scaled(-1); }

Term Term::operator-(const Term& o) const { return *this + (-o); }

Term Term::scaled(const Rational& q) const {
    Term t;
    t.sort_ = sort_;
    if (q == 0) {
        t.constant_ = 0;
        return t;
    }
    t.constant_ = constant_ * q;
    for (auto& [c, m] : ms_) t.ms_.push_back({c * q, m});
    return t;
}

namespace {

// Content normalization for sum factors: scale so the first monomial has
// coefficient 1; returns the extracted content.
Rational extract_content(Term& t) {
    if (t.monomials().empty()) throw InternalError("content of rational factor");
    Rational c = t.monomials()[0].first;
    t = t.scaled(Rational(1) / c);
    return c;
}

}  // namespace

Term Term::operator*(const Term& o) const {
    Sort s = join_sorts(sort_, o.sort_);
    if (is_rational()) return o.scaled(constant_);
    if (o.is_rational()) return scaled(o.constant_);

    // single monomial x single monomial: merge factor lists
    if (ms_.size() == 1 && constant_ == 0 && o.ms_.size() == 1 && o.constant_ == 0) {
        Rational q = ms_[0].first * o.ms_[0].first;
        Term fa = Term::monomial(1, ms_[0].second);
        Term fb = Term::monomial(1, o.ms_[0].second);
        return Term::monomial(q, Monomial::prod({fa, fb}));
    }

    // At least one side is a genuine sum: keep it atomic as a product factor
    // rather than distributing (parametric coefficients stay in one piece).
    Term a = *this, b = o;
    Rational q = 1;
    std::vector<Term> factors;
    auto add_factor = [&](Term f) {
        if (f.monomials().size() == 1 && f.constant_part() == 0) {
            q *= f.monomials()[0].first;
            factors.push_back(Term::monomial(1, f.monomials()[0].second));
        } else {
            q *= extract_content(f);
            factors.push_back(f);
        }
    };
    add_factor(a);
    add_factor(b);
    Term r = Term::monomial(q, Monomial::prod(factors));
    // products of ints stay int; anything real makes it real
    if (r.ms_.size() == 1) {
        Term t;
        t.sort_ = s;
        t.ms_ = r.ms_;
        t.constant_ = 0;
        return t;
    }
    return r;
}

Rational Term::coeff_of(const Monomial& m) const {
    for (auto& [q, mm] : ms_)
        if (mm == m) return q;
    return 0;
}

Term Term::without(const Monomial& m) const {
    Term t;
    t.sort_ = sort_;
    t.constant_ = constant_;
    for (auto& e : ms_)
        if (!(e.second == m)) t.ms_.push_back(e);
    return t;
}

Term Term::replace(const std::map<Monomial, Term>& repl) const {
    Term out = Term::rational(constant_, sort_);
    for (auto& [q, m] : ms_) {
        auto it = repl.find(m);
        if (it != repl.end()) {
            out = out + it->second.scaled(q);
            continue;
        }
        switch (m.kind()) {
            case Monomial::Kind::Var:
            case Monomial::Kind::Const:
                out = out + Term::monomial(q, m);
                break;
            case Monomial::Kind::App: {
                std::vector<Term> args;
                bool changed = false;
                for (auto& a : m.args()) {
                    Term na = a.replace(repl);
                    if (na != a) changed = true;
                    args.push_back(na);
                }
                if (!changed) {
                    out = out + Term::monomial(q, m);
                } else {
                    out = out + Term::monomial(q, Monomial::app(m.name(), args, m.sort()));
                }
                break;
            }
            case Monomial::Kind::Prod: {
                Term acc = Term::rational(q, m.sort());
                for (auto& f : m.factors()) acc = acc * f.replace(repl);
                out = out + acc;
                break;
            }
        }
    }
    return out;
}

bool Term::ground() const {
    for (auto& [q, m] : ms_) {
        switch (m.kind()) {
            case Monomial::Kind::Var:
                return false;
            case Monomial::Kind::Const:
                break;
            case Monomial::Kind::App:
                for (auto& a : m.args())
                    if (!a.ground()) return false;
                break;
            case Monomial::Kind::Prod:
                for (auto& f : m.factors())
                    if (!f.ground()) return false;
                break;
        }
    }
    return true;
}

void Term::collect_vars(std::map<std::string, Sort>& out) const {
    for (auto& [q, m] : ms_) {
        switch (m.kind()) {
            case Monomial::Kind::Var:
                out.emplace(m.name(), m.sort());
                break;
            case Monomial::Kind::Const:
                break;
            case Monomial::Kind::App:
                for (auto& a : m.args()) a.collect_vars(out);
                break;
            case Monomial::Kind::Prod:
                for (auto& f : m.factors()) f.collect_vars(out);
                break;
        }
    }
}

void Term::collect_constants(std::set<std::string>& out) const {
    for (auto& [q, m] : ms_) {
        switch (m.kind()) {
            case Monomial::Kind::Var:
                break;
            case Monomial::Kind::Const:
                out.insert(m.name());
                break;
            case Monomial::Kind::App:
                for (auto& a : m.args()) a.collect_constants(out);
                break;
            case Monomial::Kind::Prod:
                for (auto& f : m.factors()) f.collect_constants(out);
                break;
        }
    }
}

void Term::collect_apps(std::vector<Term>& out) const {
    for (auto& [q, m] : ms_) {
        switch (m.kind()) {
            case Monomial::Kind::App:
                out.push_back(Term::monomial(1, m));
                for (auto& a : m.args()) a.collect_apps(out);
                break;
            case Monomial::Kind::Prod:
                for (auto& f : m.factors()) f.collect_apps(out);
                break;
            default:
                break;
        }
    }
}

bool Term::mentions_symbol(const std::string& name) const {
    for (auto& [q, m] : ms_) {
        switch (m.kind()) {
            case Monomial::Kind::Var:
                break;
            case Monomial::Kind::Const:
                if (m.name() == name) return true;
                break;
            case Monomial::Kind::App:
                if (m.name() == name) return true;
                for (auto& a : m.args())
                    if (a.mentions_symbol(name)) return true;
                break;
            case Monomial::Kind::Prod:
                for (auto& f : m.factors())
                    if (f.mentions_symbol(name)) return true;
                break;
        }
    }
    return false;
}

int Term::compare(const Term& o) const {
    if (ms_.size() != o.ms_.size()) return ms_.size() < o.ms_.size() ? -1 : 1;
    for (size_t i = 0; i < ms_.size(); ++i) {
        if (int c = ms_[i].second.compare(o.ms_[i].second)) return c;
        if (ms_[i].first != o.ms_[i].first) return ms_[i].first < o.ms_[i].first ? -1 : 1;
    }
    if (constant_ != o.constant_) return constant_ < o.constant_ ? -1 : 1;
    return 0;
}

std::string monomial_str(const Monomial& m) {
    switch (m.kind()) {
        case Monomial::Kind::Var:
        case Monomial::Kind::Const:
            return m.name();
        case Monomial::Kind::App: {
            std::string s = m.name() + "(";
            for (size_t i = 0; i < m.args().size(); ++i) {
                if (i) s += ", ";
                s += m.args()[i].str();
            }
            return s + ")";
        }
        case Monomial::Kind::Prod: {
            std::string s;
            for (size_t i = 0; i < m.factors().size(); ++i) {
                if (i) s += "*";
                const Term& f = m.factors()[i];
                bool paren = !(f.is_plain_monomial() && !f.the_monomial().is_prod());
                s += paren ? "(" + f.str() + ")" : f.str();
            }
            return s;
        }
    }
    return "?";
}

std::string Term::str() const {
    if (ms_.empty()) return to_string(constant_);
    std::ostringstream os;
    bool first = true;
    for (auto& [q, m] : ms_) {
        Rational aq = q < 0 ? Rational(-q) : q;
        if (first) {
            if (q < 0) os << "-";
        } else {
            os << (q < 0 ? " - " : " + ");
        }
        first = false;
        if (aq != 1) os << to_string(aq) << "*";
        os << monomial_str(m);
    }
    if (constant_ != 0) {
        os << (constant_ < 0 ? " - " : " + ")
           << to_string(constant_ < 0 ? Rational(-constant_) : constant_);
    }
    return os.str();
}

}  // namespace pvs
