#pragma once

#include "activesub/sampling.hpp"

#include <nlohmann/json.hpp>

namespace activesub {

/// Builds a builtin from its JSON specification:
///
///   {"kind": "linear",    "c": [..]}
///   {"kind": "quadratic", "A": [[..], ..]}
///   {"kind": "ridge_sum", "directions": [[..], ..], "amplitudes": [..]}
///
/// Any of them may carry "pad_to": m to embed the function in R^m with
/// inactive trailing coordinates. Errors name the offending field, e.g.
/// "function.A: row 2 has 3 entries, expected 4" (ParseError), and builtin
/// preconditions surface as ArgumentError / UnsupportedSize.
SampledFunction function_from_json(const nlohmann::json& spec);

}  // namespace activesub
