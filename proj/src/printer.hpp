#pragma once

#include <string>

#include "problem.hpp"

namespace pvs {

// Formula/term rendering in the input syntax (reparseable).
std::string print_term(const Term& t);
std::string print_formula(const FormulaPtr& f);
std::string print_clause(const Clause& c);

// Full problem rendering; parse(pretty_print(p)) is structurally equal to p.
std::string pretty_print(const Problem& p);

// Structural equality used by the round-trip property.
bool problems_equal(const Problem& a, const Problem& b, std::string* why = nullptr);

}  // namespace pvs
