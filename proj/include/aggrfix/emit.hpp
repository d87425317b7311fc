#ifndef AGGRFIX_EMIT_HPP
#define AGGRFIX_EMIT_HPP

#include "aggrfix/semantics.hpp"

#include <optional>
#include <string>

namespace aggrfix {

// Serialization of results. Atom order is lexicographic by rendered name so
// identical runs produce byte-identical output.
std::string emit_text(const SemanticsResult& res, const GroundProgram& gp, SemanticsKind kind,
                      std::optional<Family> family);
std::string emit_json(const SemanticsResult& res, const GroundProgram& gp, SemanticsKind kind,
                      std::optional<Family> family);

} // namespace aggrfix

#endif
