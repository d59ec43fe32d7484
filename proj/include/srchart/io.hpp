#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace srchart {

inline constexpr std::string_view kVersion = "0.1.0";

/// Shortest decimal that round-trips to the same double ("nan", "inf", "-inf"
/// for non-finite values).
std::string format_double(double x);
/// Fixed-point display with `digits` decimals, half away from zero.
std::string format_fixed(double x, int digits);
/// Strict parse of a whole string as a double; throws SchemaError.
double parse_double(std::string_view text);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

// Header written at the top of every output file.
struct OutputMeta {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::string config;  // canonical "key=value" lines; hashed, not printed
};

/// "# srchart <version>", "# command: ...", "# seed: ...", "# config_hash: ..."
std::string csv_header_lines(const OutputMeta& meta);
nlohmann::json json_meta(const OutputMeta& meta);

std::string csv_join(const std::vector<std::string>& fields);

/// Comma-separated rows; lines starting with '#' and blank lines are skipped.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// Reads a whole file; throws SchemaError if it cannot be opened.
std::string read_file(const std::string& path);
/// Truncates and writes; throws SchemaError on failure.
void write_file(const std::string& path, std::string_view content);

}  // namespace srchart
