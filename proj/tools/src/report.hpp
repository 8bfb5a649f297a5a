#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace scole::cli {

using Json = nlohmann::ordered_json;

/// Shortest form is not stable across libraries, so numbers are always printed
/// with 17 significant digits. Non-finite values become null.
std::string format_number(double v);

/// Deterministic JSON text: insertion-ordered keys, two-space indent, 17 digits.
std::string dump_json(const Json& j);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Writes text to dir/name, creating dir. Throws std::runtime_error naming the path.
void write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text);

/// Comma-separated table with a header row, numbers via format_number.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  std::string str() const;

 private:
  std::size_t columns_;
  std::string text_;
};

}  // namespace scole::cli
