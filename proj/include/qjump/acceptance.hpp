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

#include <cstdint>
#include <string>
#include <vector>

namespace qjump {

struct CriterionResult {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20260401;
};

/// "A1" .. "A14".
std::vector<std::string> acceptance_ids();
std::string acceptance_title(const std::string& id);

/// Runs one criterion; numerical failures inside it become FAIL results.
CriterionResult run_criterion(const std::string& id, const AcceptanceOptions& options = {});
std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& ids,
                                            const AcceptanceOptions& options = {});

/// "PASS A1 <title> | <detail> (1.2s)".
std::string format_result(const CriterionResult& r);

}  // namespace qjump
