#pragma once

#include <string>

#include "problem.hpp"

namespace pvs {

// Parses the textual problem format. Throws InputError with file:line:col
// diagnostics on syntax, sort, or declaration errors.
Problem parse_problem(const std::string& text, const std::string& filename = "<input>");
Problem parse_problem_file(const std::string& path);

// Parses a single formula against an existing problem's signature
// (used by tests and the derived-constraint round trip).
FormulaPtr parse_formula_text(const std::string& text, const Problem& p);

}  // namespace pvs
