// Copyright 2026 The qjump Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qjump/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qjump/errors.hpp"

namespace qjump {

namespace {

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && *begin == ' ') ++begin;
  if (begin == end) return false;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string csv_field(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorCode::Internal, "format_double failed");
  return std::string(buf, ptr);
}

void write_density_matrix(const DensityMatrix& rho, std::ostream& out) {
  const auto d = rho.matrix.rows();
  out << d << '\n' << format_double(rho.lognorm) << '\n';
  for (std::ptrdiff_t a = 0; a < d; ++a) {
    for (std::ptrdiff_t b = 0; b < d; ++b) {
      out << format_double(rho.matrix(a, b).real()) << ' ' << format_double(rho.matrix(a, b).imag()) << '\n';
    }
  }
}

DensityMatrix read_density_matrix(std::istream& in) {
  std::ptrdiff_t d = 0;
  DensityMatrix rho;
  if (!(in >> d) || d < 1 || (d & (d - 1)) != 0) throw IoError("density matrix: bad dimension");
  std::string token;
  if (!(in >> token) || !parse_number(token, rho.lognorm)) throw IoError("density matrix: bad lognorm");
  rho.matrix.resize(d, d);
  for (std::ptrdiff_t a = 0; a < d; ++a) {
    for (std::ptrdiff_t b = 0; b < d; ++b) {
      std::string re, im;
      double x = 0.0, y = 0.0;
      if (!(in >> re >> im) || !parse_number(re, x) || !parse_number(im, y)) {
        throw IoError("density matrix: truncated or malformed entry");
      }
      rho.matrix(a, b) = Complex(x, y);
    }
  }
  return rho;
}

void save_density_matrix(const DensityMatrix& rho, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_density_matrix(rho, out);
}

DensityMatrix load_density_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_density_matrix(in);
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.comments.push_back(line);
      continue;
    }
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw IoError("csv: row " + std::to_string(table.rows.size() + 1) + " has " +
                    std::to_string(cells.size()) + " cells, header has " +
                    std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw IoError("csv: missing header row");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_csv(in);
}

std::vector<CsvMismatch> compare_csv(const CsvTable& actual, const CsvTable& expected,
                                     const std::map<std::string, double>& abs_tol,
                                     double default_abs_tol, double rel_tol) {
  std::vector<CsvMismatch> out;
  if (actual.header != expected.header) {
    out.push_back({0, "<header>", "", ""});
    return out;
  }
  if (actual.rows.size() != expected.rows.size()) {
    out.push_back({0, "<rows>", std::to_string(expected.rows.size()), std::to_string(actual.rows.size())});
    return out;
  }
  for (std::size_t r = 0; r < actual.rows.size(); ++r) {
    for (std::size_t c = 0; c < actual.header.size(); ++c) {
      const std::string& a = actual.rows[r][c];
      const std::string& e = expected.rows[r][c];
      double x = 0.0, y = 0.0;
      bool ok = false;
      if (parse_number(a, x) && parse_number(e, y)) {
        const auto it = abs_tol.find(actual.header[c]);
        const double tol = (it == abs_tol.end() ? default_abs_tol : it->second) + rel_tol * std::abs(y);
        ok = std::abs(x - y) <= tol || (std::isnan(x) && std::isnan(y));
      } else {
        ok = a == e;
      }
      if (!ok) out.push_back({r + 1, actual.header[c], e, a});
    }
  }
  return out;
}

}  // namespace qjump
