#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shapebench {

/// Shortest decimal form that parses back to exactly the same double.
std::string fmt_double(double v);

/// CSV field escaping: quotes only when the field contains ',', '"' or '\n'.
std::string csv_escape(std::string_view field);

/// Parses a comma-separated list of doubles ("1.5,-2,0.25"). Empty items or
/// trailing garbage yield nullopt.
std::optional<std::vector<double>> parse_double_list(std::string_view text);

}  // namespace shapebench
