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

#include <cstddef>
#include <functional>

namespace qjump {

/// Worker count: explicit setting, else QJUMP_THREADS, else hardware concurrency.
int thread_count();
/// n <= 0 restores the default.
void set_thread_count(int n);

/// Runs body(i) for i in [0, n). Work is claimed dynamically, so callers must
/// write results into index-addressed slots. If any body throws, the
/// exception of the smallest failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qjump
