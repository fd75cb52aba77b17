#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace osagent {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);
std::vector<std::string> split_lines(const std::string& s);
std::string to_lower(const std::string& s);
bool starts_with(const std::string& s, const std::string& prefix);
bool contains(const std::string& haystack, const std::string& needle);
std::string join(const std::vector<std::string>& parts, const std::string& sep);

// Collapses every run of whitespace to a single space and trims the ends.
std::string collapse_ws(const std::string& s);

// Quantizes to four decimal places, rounding halves away from zero.
double round4(double v);

// Fixed two decimal places, e.g. 0.3802 -> "0.38". Display form of a coordinate.
std::string fmt2(double v);

// Up to four decimal places with trailing zeros removed but at least one
// decimal digit kept, e.g. 1 -> "1.0", 0.25 -> "0.25". Canonical float form.
std::string fmt_float(double v);

// `pattern` matched literally except `*` (any run) and `?` (any one char).
bool glob_match(const std::string& pattern, const std::string& text);

// Strict base64 (RFC 4648, padded).
std::string base64_encode(const std::uint8_t* data, size_t len);
std::string base64_encode(const std::string& s);

// C-style escaping for "..." string literals in the action language.
std::string escape_string(const std::string& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

} // namespace osagent
