#ifndef EGAUDIN_CLI_FORMAT_HPP
#define EGAUDIN_CLI_FORMAT_HPP

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "egaudin/elliptic.hpp"

namespace egaudin::cli {

/// Fixed significant-digit rendering ("%#.{digits}g"), trailing zeros kept so
/// every column has the same width class. Negative zero prints as zero.
std::string format_number(double value, int digits);

/// Parses "a+bi", "a-bi", "a", "bi", "-i" and similar. Throws DomainError.
Complex parse_complex(const std::string& text);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  void write(std::ostream& out) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Resolves a relative output path against EGAUDIN_OUTPUT_DIR when that is set.
std::filesystem::path resolve_output_path(const std::string& path);

/// Single writer for a command: stdout when no path is given, the file otherwise.
class OutputSink {
 public:
  OutputSink(std::ostream& fallback, const std::optional<std::string>& path);
  std::ostream& stream() { return file_ ? *file_ : fallback_; }

 private:
  std::ostream& fallback_;
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace egaudin::cli

#endif  // EGAUDIN_CLI_FORMAT_HPP
