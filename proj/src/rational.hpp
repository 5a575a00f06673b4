#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace pvs {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline Integer num(const Rational& q) { return numerator(q); }
inline Integer den(const Rational& q) { return denominator(q); }

inline bool is_integer(const Rational& q) { return den(q) == 1; }

inline Rational rat_floor(const Rational& q) {
    Integer n = num(q), d = den(q);
    Integer f = n / d;
    if (n < 0 && n % d != 0) f -= 1;
    return Rational(f);
}

inline Rational rat_ceil(const Rational& q) { return -rat_floor(-q); }

inline std::string to_string(const Rational& q) {
    std::string s = num(q).str();
    if (den(q) != 1) s += "/" + den(q).str();
    return s;
}

// Strings accepted: "p", "p/q", "p.d" (finite decimals).
inline std::optional<Rational> rational_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    auto dot = s.find('.');
    try {
        if (slash != std::string::npos) {
            Integer p(s.substr(0, slash)), q(s.substr(slash + 1));
            if (q == 0) return std::nullopt;
            return Rational(p, q);
        }
        if (dot != std::string::npos) {
            std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
            if (tail.empty()) return std::nullopt;
            Integer p(head.empty() ? "0" : head);
            Integer scale = 1;
            for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
            Integer frac(tail);
            bool negative = !head.empty() && head[0] == '-';
            Rational r = Rational(p) + (negative ? -Rational(frac, scale) : Rational(frac, scale));
            return r;
        }
        return Rational(Integer(s));
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace pvs
