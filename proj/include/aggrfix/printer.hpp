#ifndef AGGRFIX_PRINTER_HPP
#define AGGRFIX_PRINTER_HPP

#include "aggrfix/ast.hpp"

#include <string>

namespace aggrfix {

// Concrete syntax writers. print_program(parse(x)) parses back to the same
// AST (round-trip identity), which the tests rely on.
std::string print_term(const TermPtr& t);
std::string print_formula(const FormulaPtr& f);
std::string print_rule(const Signature& sig, const Rule& r);
std::string print_program(const Program& p);

// Structural equality on ASTs, used by the round-trip tests.
bool term_equal(const TermPtr& a, const TermPtr& b);
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
bool program_equal(const Program& a, const Program& b);

} // namespace aggrfix

#endif
