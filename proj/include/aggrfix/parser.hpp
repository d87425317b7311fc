#ifndef AGGRFIX_PARSER_HPP
#define AGGRFIX_PARSER_HPP

#include "aggrfix/ast.hpp"

#include <optional>
#include <string>
#include <vector>

namespace aggrfix {

struct ParseResult {
    std::optional<Program> program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return program.has_value(); }
};

// Parses a whole program: declarations, rules, facts. Total on malformed
// input; errors come back as positioned diagnostics.
ParseResult parse_program(const std::string& text);

// Parses an additional facts file into an existing program. Declarations
// are allowed but must not conflict; rules are rejected.
bool parse_facts_into(Program& program, const std::string& text,
                      std::vector<Diagnostic>& diagnostics);

} // namespace aggrfix

#endif
