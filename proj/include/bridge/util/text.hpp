#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bridge::text {

std::string_view trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view s, std::string_view needle);
std::string replace_all(std::string s, std::string_view from, std::string_view to);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower(std::string_view s);

/// Number of whitespace-separated tokens.
std::size_t word_count(std::string_view s);

bool is_identifier(std::string_view s);

/// Fixed-point rendering with exactly `digits` decimals ("0.9167").
std::string format_fixed(double value, int digits);

}  // namespace bridge::text
