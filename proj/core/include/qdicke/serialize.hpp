#pragma once

#include <string>

#include "qdicke/boolean.hpp"
#include "qdicke/circuit.hpp"

namespace qdicke {

/// Circuit JSON schema:
///   { "n": int, "model": "qac0"|"qac0f", "registers": {...},
///     "layers": [[ {"gate": "1q"|"gcz"|"fanout"|..., ...}, ... ], ...] }
/// Macro gates serialize as "toffoli" / "reflection" / "oracle"; expand
/// first for a primitives-only file.
std::string circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const std::string& json_text);

/// Flat textual gate list, one gate per line:
///   GCZ 0 3 7
///   FANOUT 2 -> 4 5 6
///   U1Q 3 [[re+imj,...],[...]]
/// Layers are separated by a lone "---". Macros must be expanded first.
std::string circuit_to_gatelist(const Circuit& c);

std::string family_to_json(const SubsetFamily& f);
SubsetFamily family_from_json(const std::string& json_text);

}  // namespace qdicke
