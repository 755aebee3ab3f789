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

// Runs the acceptance criteria and prints one PASS/FAIL line each.
// Usage: qjump_acceptance [--seed S] [ID ...]

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "qjump/acceptance.hpp"

int main(int argc, char** argv) {
  qjump::AcceptanceOptions opts;
  std::vector<std::string> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else {
      ids.push_back(a);
    }
  }
  if (ids.empty()) ids = qjump::acceptance_ids();
  int failed = 0;
  for (const auto& id : ids) {
    const auto r = qjump::run_criterion(id, opts);
    std::cout << qjump::format_result(r) << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
