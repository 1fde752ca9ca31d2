#pragma once

#include <string>

#include "json.hpp"

namespace llk {

using Json = nlohmann::ordered_json;

/// Report schema version emitted in every document.
inline constexpr const char* kReportSchemaVersion = "1";

/// Decimal text for a double with 17 significant digits ("%.17g"), so the
/// value round-trips exactly. Non-finite values become "Infinity",
/// "-Infinity" or "NaN" (quoted when embedded in a report).
std::string format_number(double v);

/// Serialises `doc` as JSON object syntax with floats printed by
/// format_number. Key order is preserved.
std::string to_report_text(const Json& doc, int indent = 2);

}  // namespace llk
