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

#include <doctest.h>

#include <atomic>
#include <sstream>
#include <vector>

#include "qjump/dense_oracle.hpp"
#include "qjump/io.hpp"
#include "qjump/lindblad.hpp"
#include "qjump/parallel.hpp"

using namespace qjump;

TEST_CASE("number formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678}) CHECK(std::stod(format_double(v)) == v);
  CHECK(csv_field("a,b\nc") == "a;b c");
}

TEST_CASE("density matrix text round trip") {
  DensityMatrix rho{product_state(2, 0.1, 0.2, 0.3), -1.25};
  std::stringstream ss;
  write_density_matrix(rho, ss);
  const auto back = read_density_matrix(ss);
  CHECK(back.lognorm == -1.25);
  CHECK((back.matrix - rho.matrix).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("csv comparison") {
  std::istringstream a("# c\nx,y,s\n1.0,2.0,ok\n"), b("x,y,s\n1.0000001,2.1,ok\n");
  const auto ta = parse_csv(a), tb = parse_csv(b);
  CHECK(ta.comments.size() == 1);
  CHECK(ta.column("y") == 1);
  CHECK(ta.column("z") == -1);
  CHECK(compare_csv(ta, tb, {{"y", 0.2}}, 1e-6, 0.0).empty());
  const auto m = compare_csv(ta, tb, {}, 1e-6, 0.0);
  REQUIRE(m.size() == 1);
  CHECK(m[0].column == "y");
  std::istringstream c("x,y,s\n1.0,2.0,fail\n");
  CHECK(compare_csv(ta, parse_csv(c), {}, 1.0, 0.0).size() == 1);
}

TEST_CASE("golden three-site steady state") {
  ModelParams p;
  p.N = 3;
  p.J = 1.0;
  p.h = 1.0;
  p.gamma = 0.5;
  p.alpha = 1.1;
  p.sums = SumMode::FiniteN;
  const auto ref = load_density_matrix(QJUMP_GOLDEN_DIR "/steady_state_n3.txt");
  const auto ss = steady_state(p);
  CHECK((ss.matrix - ref.matrix).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("parallel loop covers every index once") {
  const int before = thread_count();
  set_thread_count(3);
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), [&](std::size_t i) {
    hits[i]++;
    parallel_for(2, [&](std::size_t) {});
  });
  for (auto& h : hits) CHECK(h.load() == 1);
  set_thread_count(before);
  CHECK(thread_count() == before);
}
