#include "cli/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <regex>

#include "egaudin/errors.hpp"

namespace egaudin::cli {

std::string format_number(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.*g", digits, value);
  std::string out(buf);
  // "%#g" keeps a bare trailing point for integral values with few digits.
  if (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

Complex parse_complex(const std::string& text) {
  static const std::regex number(R"(\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*)");
  static const std::regex full(
      R"(\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij]\s*)");
  static const std::regex imag_only(R"(\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij]\s*)");
  std::smatch m;
  if (std::regex_match(text, m, full)) {
    const double re = std::stod(m[1].str());
    double im = m[3].matched ? std::stod(m[3].str()) : 1.0;
    if (m[2].str() == "-") im = -im;
    return {re, im};
  }
  if (std::regex_match(text, m, imag_only)) {
    double im = m[2].matched ? std::stod(m[2].str()) : 1.0;
    if (m[1].str() == "-") im = -im;
    return {0.0, im};
  }
  if (std::regex_match(text, m, number)) return {std::stod(m[1].str()), 0.0};
  throw DomainError("cannot parse complex number '" + text + "'");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("CsvTable: row width mismatch");
  rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
}

std::filesystem::path resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("EGAUDIN_OUTPUT_DIR"); dir && *dir) {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

OutputSink::OutputSink(std::ostream& fallback, const std::optional<std::string>& path)
    : fallback_(fallback) {
  if (!path) return;
  const std::filesystem::path p = resolve_output_path(*path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  file_ = std::make_unique<std::ofstream>(p);
  if (!*file_) throw DomainError("cannot open output file " + p.string());
}

}  // namespace egaudin::cli
