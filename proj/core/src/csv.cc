#include "cavityspdc/csv.hh"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace spdc {

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("rename " + tmp + " -> " + path + ": " +
                std::strerror(errno));
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> header)
    : path_(std::move(path)), columns_(header.size()) {
  if (header.empty()) throw DomainError("csv: header must not be empty");
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw DomainError("csv: row width disagrees with header");
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += csv_number(values[i]);
  }
  body_ += '\n';
}

void CsvWriter::commit() {
  if (committed_) throw Error("csv: commit called twice for " + path_);
  committed_ = true;
  atomic_write(path_, body_);
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return int(i);
  throw DomainError("csv: no column named " + name);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open");
  CsvTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (lineno == 1) {
      t.header = cells;
      continue;
    }
    if (t.header.empty())
      throw ParseError(path + ":1: missing header row");
    if (cells.size() != t.header.size())
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected " + std::to_string(t.header.size()) +
                       " cells, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (size_t i = 0; i < cells.size(); ++i) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cells[i].c_str(), &end);
      // ERANGE with a finite result is gradual underflow; tiny JSA tails
      // are written subnormal and must round-trip
      if (end == cells[i].c_str() || *end != '\0' ||
          (errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL)))
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": field '" + t.header[i] +
                         "' is not a number: '" + cells[i] + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ParseError(path + ": empty file");
  return t;
}

}  // namespace spdc
