#pragma once
// CSV and plain-file output with atomic replace semantics: content is
// staged into a sibling temp file and renamed into place, so readers never
// observe a half-written file. Numbers use '.' as the decimal separator and
// '\n' line endings; a header row is mandatory.
#include <string>
#include <vector>

#include "cavityspdc/errors.hh"

namespace spdc {

// stage-and-rename write of arbitrary text
void atomic_write(const std::string& path, const std::string& content);

class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void commit();  // writes the staged content; call exactly once

 private:
  std::string path_;
  size_t columns_;
  std::string body_;
  bool committed_ = false;
};

// number formatting used by every CSV cell; round-trips doubles
std::string csv_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  int column(const std::string& name) const;  // DomainError when missing
};

// strict reader for the files this tool writes: numeric cells, uniform
// column count. Throws ParseError naming file and line.
CsvTable read_csv(const std::string& path);

}  // namespace spdc
