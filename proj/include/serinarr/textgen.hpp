#pragma once

#include <string>
#include <vector>

#include "serinarr/narration.hpp"

namespace serinarr {

struct NarrationText {
    std::string summary_sentence;
    std::vector<std::string> detail_clauses;  // with their connectives
    std::string full_text;
};

/// Rounds to two decimals and drops a trailing zero in the second place:
/// 0.094 -> "0.09", 0.1 -> "0.1", 1 -> "1.0".
std::string format_number(double value);

/// Strength token for display: "very_sharp" -> "very sharp".
std::string display_token(std::string_view token);

/// One unit as a noun phrase. With `occurs` set, point-like units read
/// "... occurs at x" instead of "... at x".
std::string realize_unit(const NarrationUnit& unit, bool occurs = false);

/// "In general, the series presents ... In detail, ...; followed by ...;
/// then by ...; ...; and finally by ...."
NarrationText realize(const std::vector<NarrationUnit>& units);

}  // namespace serinarr
