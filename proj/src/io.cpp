#include "srchart/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "srchart/error.hpp"
#include "srchart/tie_model.hpp"

namespace srchart {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, end);
}

std::string format_fixed(double x, int digits) {
  if (!std::isfinite(x)) return format_double(x);
  double rounded = round_to(x, digits);
  if (rounded == 0.0) rounded = 0.0;  // no "-0.0000"
  char buf[64];
  const auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, rounded, std::chars_format::fixed, digits);
  (void)ec;
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw SchemaError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[value & 0xf];
    value >>= 4;
  }
  buf[16] = '\0';
  return buf;
}

std::string csv_header_lines(const OutputMeta& meta) {
  std::string out = "# srchart " + std::string(kVersion) + "\n";
  out += "# command: " + meta.command + "\n";
  if (meta.seed) out += "# seed: " + std::to_string(*meta.seed) + "\n";
  out += "# config_hash: " + hex64(fnv1a64(meta.config)) + "\n";
  return out;
}

nlohmann::json json_meta(const OutputMeta& meta) {
  nlohmann::json j;
  j["version"] = std::string(kVersion);
  j["command"] = meta.command;
  if (meta.seed) j["seed"] = *meta.seed;
  j["config_hash"] = hex64(fnv1a64(meta.config));
  return j;
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SchemaError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw SchemaError("write failed for '" + path + "'");
}

}  // namespace srchart
