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

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "qjump/qjump.h"

TEST_CASE("params lifecycle and errors") {
  qj_params* p = nullptr;
  REQUIRE(qj_params_create(&p) == QJ_OK);
  CHECK(qj_params_set(p, "gamma", 0.7) == QJ_OK);
  double g = 0.0;
  CHECK(qj_params_get(p, "gamma", &g) == QJ_OK);
  CHECK(g == 0.7);
  CHECK(qj_params_set(p, "nope", 1.0) == QJ_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(qj_last_error()) > 0);
  CHECK(qj_params_set_sums(p, "weird") == QJ_ERR_INVALID_ARGUMENT);
  CHECK(qj_params_set(p, "J", -1.0) == QJ_OK);
  CHECK(qj_params_validate(p) == QJ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(qj_status_name(QJ_ERR_UNPHYSICAL)) == "unphysical");
  qj_params_destroy(p);
  CHECK(qj_params_create(nullptr) == QJ_ERR_INVALID_ARGUMENT);
}

TEST_CASE("dense distribution through the C interface") {
  qj_params* p = nullptr;
  REQUIRE(qj_params_create(&p) == QJ_OK);
  qj_params_set(p, "N", 2);
  qj_params_set(p, "Nc", 1);
  qj_params_set(p, "h", 0.8);
  qj_params_set(p, "gamma", 0.4);
  qj_params_set(p, "alpha", 0.0);
  qj_params_set_sums(p, "finite");
  const int sites[2] = {0, 1};
  qj_distribution* d = nullptr;
  REQUIRE(qj_fcs_dense(p, 3.0, 0, sites, 2, &d) == QJ_OK);
  int rank = 0, grid = 0;
  size_t len = 0;
  CHECK(qj_distribution_shape(d, &rank, &grid, &len) == QJ_OK);
  CHECK(rank == 1);
  std::vector<double> probs(len);
  CHECK(qj_distribution_probs(d, probs.data(), 2) == QJ_ERR_DIMENSION);
  CHECK(qj_distribution_probs(d, probs.data(), probs.size()) == QJ_OK);
  double sum = 0.0;
  for (double v : probs) sum += v;
  CHECK(sum == doctest::Approx(1.0));
  double mean = 0, var = 0;
  CHECK(qj_distribution_moments(d, 0, &mean, &var) == QJ_OK);
  CHECK(mean > 0.0);
  double cov = 0.0;
  CHECK(qj_distribution_covariance(d, &cov) != QJ_OK);
  qj_distribution_destroy(d);
  qj_params_destroy(p);
}

TEST_CASE("analytic waiting times") {
  double mean = 0, var = 0;
  int div = 0;
  CHECK(qj_wtd_moments(1.0, 0.9, 0.5, &mean, &var, &div) == QJ_OK);
  CHECK(div == 0);
  CHECK(mean > 0.0);
  CHECK(qj_wtd_moments(1.0, 0.9, 1.5, &mean, &var, &div) == QJ_OK);
  CHECK(div == 1);
  const double t[3] = {0.5, 1.0, 2.0};
  double pdf[3], cdf[3];
  CHECK(qj_wtd_analytic_pdf(1.0, 0.9, 0.5, t, 3, pdf) == QJ_OK);
  CHECK(qj_wtd_analytic_cdf(1.0, 0.9, 0.5, t, 3, cdf) == QJ_OK);
  CHECK((cdf[0] < cdf[1] && cdf[1] < cdf[2]));
  CHECK(qj_mx_star(1.0, 1.0, 2.0) == 0.0);
}

TEST_CASE("threads and acceptance listing") {
  const int before = qj_get_threads();
  qj_set_threads(2);
  CHECK(qj_get_threads() == 2);
  qj_set_threads(before);
  CHECK(qj_acceptance_count() == 14);
  CHECK(std::string(qj_acceptance_id(0)) == "A1");
  CHECK(qj_acceptance_id(99) == nullptr);
  int passed = 0;
  char buf[512];
  CHECK(qj_acceptance_run("A99", 1, &passed, buf, sizeof buf) == QJ_ERR_INVALID_ARGUMENT);
  CHECK(std::string(qj_version()).size() > 0);
}
