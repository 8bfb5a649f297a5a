#include "scole/coefficients.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "scole/errors.hpp"

namespace scole {

CoefficientFn constant_coefficient(double value) {
  return [value](double) { return value; };
}

CoefficientFn affine_coefficient(double c0, double c1) {
  return [c0, c1](double x) { return c0 + c1 * x; };
}

CoefficientFn exp_coefficient(double c0, double c1) {
  return [c0, c1](double x) { return c0 * std::exp(c1 * x); };
}

void CoefficientTable::validate() const {
  if (x.size() != value.size()) throw ValidationError("coefficient table: column lengths differ");
  if (x.size() < 2) throw ValidationError("coefficient table: need at least two rows");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw ValidationError("coefficient table: x must be strictly increasing (row " +
                            std::to_string(i + 1) + ")");
    }
  }
  if (x.front() > 0.0 || x.back() < 1.0) {
    throw ValidationError("coefficient table: samples must cover [0, 1]");
  }
}

CoefficientFn tabulated_coefficient(CoefficientTable table) {
  table.validate();
  return [t = std::move(table)](double x) {
    const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
    if (it == t.x.begin()) return t.value.front();
    if (it == t.x.end()) return t.value.back();
    const auto i = static_cast<std::size_t>(it - t.x.begin());
    const double w = (x - t.x[i - 1]) / (t.x[i] - t.x[i - 1]);
    return (1.0 - w) * t.value[i - 1] + w * t.value[i];
  };
}

namespace {

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

CoefficientTable read_coefficient_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open coefficient table " + path.string());
  CoefficientTable table;
  std::string line;
  int line_no = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    const auto comma = line.find(',');
    double x = 0.0, v = 0.0;
    const bool ok = comma != std::string::npos &&
                    parse_double(std::string_view(line).substr(0, comma), x) &&
                    parse_double(std::string_view(line).substr(comma + 1), v);
    if (!ok) {
      if (first_data_row) {  // header
        first_data_row = false;
        continue;
      }
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'x,value'");
    }
    first_data_row = false;
    table.x.push_back(x);
    table.value.push_back(v);
  }
  table.validate();
  return table;
}

}  // namespace scole
