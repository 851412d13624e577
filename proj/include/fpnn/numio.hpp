#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fpnn {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse of a whole token (surrounding blanks allowed). Returns
/// nullopt for malformed or non-finite input.
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace fpnn
