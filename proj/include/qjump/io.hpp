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

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qjump/lindblad.hpp"

namespace qjump {

/// Shortest round-trip decimal form ("%.17g"), locale independent.
std::string format_double(double v);

/// Free text made safe for one unquoted CSV cell (',' -> ';', newlines -> ' ').
std::string csv_field(std::string text);

/// Text dump: dim, lognorm, then dim*dim lines "re im" in row-major order.
void write_density_matrix(const DensityMatrix& rho, std::ostream& out);
DensityMatrix read_density_matrix(std::istream& in);
void save_density_matrix(const DensityMatrix& rho, const std::string& path);
DensityMatrix load_density_matrix(const std::string& path);

/// Comma-separated table; lines starting with '#' are comments.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  ///< -1 if absent
};

CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

struct CsvMismatch {
  std::size_t row = 0;
  std::string column;
  std::string expected;
  std::string actual;
};

/// Numeric cells compared with |a - b| <= abs_tol[col] + rel_tol * |b|
/// (defaults when a column is not listed); other cells must match exactly.
std::vector<CsvMismatch> compare_csv(const CsvTable& actual, const CsvTable& expected,
                                     const std::map<std::string, double>& abs_tol,
                                     double default_abs_tol, double rel_tol);

}  // namespace qjump
