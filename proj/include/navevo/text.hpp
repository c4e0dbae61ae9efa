#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace navevo::text {

/// Fixed-point rendering with `decimals` digits; "-0.000" is normalized to "0.000".
std::string fixed(double value, int decimals);

/// Rounds `value` to the nearest multiple of 10^-decimals, returning the double
/// that the fixed-point text of that value parses back to.
double quantize(double value, int decimals);

std::optional<double> parse_double(std::string_view token);
std::optional<std::int64_t> parse_int(std::string_view token);
std::optional<bool> parse_bool(std::string_view token);

/// Splits on runs of blanks.
std::vector<std::string_view> split_ws(std::string_view line);

std::string_view trim(std::string_view s);

/// Reads a whole file; throws navevo::Error if it cannot be opened.
std::string read_file(const std::string& path);

/// Writes atomically enough for our purposes (write then rename).
void write_file(const std::string& path, std::string_view contents);

}  // namespace navevo::text
