#pragma once

#include <string>
#include <vector>

namespace paralayer {

// Row-major CSV builder. Fields are quoted only when they contain a comma,
// quote, or line break; everything else passes through verbatim, so tables
// built from csv_number render byte-identically between runs.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  // arity must match the header
  void add_row(std::vector<std::string> row);

  // header + rows, LF line ends, trailing newline
  std::string render() const;

  std::size_t row_count() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// 17 significant digits, so a double survives the round trip exactly
std::string csv_number(double v);
std::string csv_number(long long v);

// whole-file IO; both throw std::runtime_error with the path on failure
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace paralayer
