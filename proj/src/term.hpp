#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rational.hpp"
#include "signature.hpp"

namespace pvs {

class Term;

// A monomial is a non-arithmetic building block of a linear form: a variable,
// a constant symbol, a function application, or a product of such factors.
// Product factors may also be whole linear forms (sums), kept unexpanded so
// that parametric coefficients like k*(t1 - t0)*(x_b - g) stay atomic.
class Monomial {
public:
    enum class Kind { Var, Const, App, Prod };

    static Monomial var(const std::string& name, const Sort& sort);
    static Monomial constant(const std::string& name, const Sort& sort);
    static Monomial app(const std::string& fn, std::vector<Term> args, const Sort& sort);
    // Factors must each be non-rational; flattens nested products and sorts.
    static Monomial prod(std::vector<Term> factors);

    Kind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const Sort& sort() const { return node_->sort; }
    const std::vector<Term>& args() const { return node_->args; }
    const std::vector<Term>& factors() const { return node_->factors; }

    bool is_var() const { return kind() == Kind::Var; }
    bool is_const() const { return kind() == Kind::Const; }
    bool is_app() const { return kind() == Kind::App; }
    bool is_prod() const { return kind() == Kind::Prod; }

    // Fixed total order: by kind, then name, then argument/factor order.
    int compare(const Monomial& o) const;
    bool operator==(const Monomial& o) const { return compare(o) == 0; }
    bool operator!=(const Monomial& o) const { return compare(o) != 0; }
    bool operator<(const Monomial& o) const { return compare(o) < 0; }

private:
    struct Node {
        Kind kind;
        std::string name;
        Sort sort;
        std::vector<Term> args;     // App
        std::vector<Term> factors;  // Prod (each a canonical, content-1 Term)
    };
    explicit Monomial(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Canonical linear form sum_i q_i * m_i + q_0 with exact rational q's, the
// monomial list sorted with no duplicates and no zero coefficients.
// A term of uninterpreted sort is a single monomial with coefficient 1.
class Term {
public:
    Term() : constant_(0), sort_(real_sort()) {}  // the zero term (real)

    static Term rational(const Rational& q, const Sort& sort = real_sort());
    static Term integer(long v) { return rational(Rational(v), int_sort()); }
    static Term var(const std::string& name, const Sort& sort);
    static Term constant(const std::string& name, const Sort& sort);
    static Term app(const std::string& fn, std::vector<Term> args, const Sort& sort);
    static Term monomial(const Rational& coeff, const Monomial& m);

    const Rational& constant_part() const { return constant_; }
    const std::vector<std::pair<Rational, Monomial>>& monomials() const { return ms_; }
    const Sort& sort() const { return sort_; }

    bool is_rational() const { return ms_.empty(); }
    bool is_zero() const { return ms_.empty() && constant_ == 0; }
    // Single monomial with coefficient 1 and no constant part.
    bool is_plain_monomial() const {
        return constant_ == 0 && ms_.size() == 1 && ms_[0].first == 1;
    }
    const Monomial& the_monomial() const { return ms_[0].second; }

    Term operator+(const Term& o) const;
    Term operator-(const Term& o) const;
    Term operator-() const;
    Term operator*(const Term& o) const;
    Term scaled(const Rational& q) const;

    // Rational coefficient of a monomial (0 if absent).
    Rational coeff_of(const Monomial& m) const;
    // Drops monomial m from the sum.
    Term without(const Monomial& m) const;

    // Simultaneous replacement of Var/Const monomials by terms, applied
    // recursively inside App arguments and Prod factors.
    Term replace(const std::map<Monomial, Term>& repl) const;

    bool ground() const;  // no Var monomials anywhere
    void collect_vars(std::map<std::string, Sort>& out) const;
    void collect_constants(std::set<std::string>& out) const;
    // All App subterms (outermost-first traversal), including nested ones.
    void collect_apps(std::vector<Term>& out) const;
    bool mentions_symbol(const std::string& name) const;

    int compare(const Term& o) const;
    bool operator==(const Term& o) const { return compare(o) == 0; }
    bool operator!=(const Term& o) const { return compare(o) != 0; }
    bool operator<(const Term& o) const { return compare(o) < 0; }

    std::string str() const;

private:
    friend class Monomial;
    void normalize();
    static Sort join_sorts(const Sort& a, const Sort& b);

    Rational constant_;
    std::vector<std::pair<Rational, Monomial>> ms_;
    Sort sort_;
};

std::string monomial_str(const Monomial& m);

}  // namespace pvs
