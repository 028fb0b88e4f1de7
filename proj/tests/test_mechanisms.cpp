// Copyright 2026 The DAME Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "dame/mechanisms.hpp"
#include "dame/random.hpp"

using dame::BitVector;
using dame::FlipProbability;
using dame::PrivacyBudget;
using dame::Rng;

TEST_CASE("privacy budget validation") {
  CHECK_THROWS_AS(PrivacyBudget(0.0), std::invalid_argument);
  CHECK_THROWS_AS(PrivacyBudget(-1.0), std::invalid_argument);
  CHECK(PrivacyBudget(0.5).strict_regime());
  CHECK(PrivacyBudget(22.0 / 35.0).strict_regime());
  CHECK_FALSE(PrivacyBudget(0.7).strict_regime());
}

TEST_CASE("keep probability") {
  // e^{alpha/6}/(1 + e^{alpha/6}) at alpha = 22/35, frozen independently.
  CHECK_THAT(FlipProbability::from_alpha(22.0 / 35.0).pi,
             Catch::Matchers::WithinAbs(0.5261665489536685, 1e-15));
  CHECK(FlipProbability::from_alpha(1e-9).pi > 0.5);
  CHECK_THROWS_AS(FlipProbability(0.5), std::invalid_argument);
  CHECK_THROWS_AS(FlipProbability(1.2), std::invalid_argument);
}

TEST_CASE("randomized response keeps everything at pi = 1") {
  Rng rng = dame::make_rng(1);
  const BitVector in = {0, 1, 1, 1};
  CHECK(dame::randomized_response(in, FlipProbability(1.0), rng) == in);
}

TEST_CASE("randomized response rejects more than 3 ones") {
  Rng rng = dame::make_rng(1);
  const BitVector in = {1, 1, 1, 1};
  CHECK_THROWS_AS(dame::randomized_response(in, FlipProbability(0.6), rng),
                  std::invalid_argument);
}

TEST_CASE("randomized response flip frequency") {
  const FlipProbability pi = FlipProbability::from_alpha(22.0 / 35.0);
  Rng rng = dame::make_rng(2);
  const BitVector zeros(4, 0);
  const int trials = 100000;
  std::int64_t ones = 0;
  for (int t = 0; t < trials; ++t) {
    const BitVector out = dame::randomized_response(zeros, pi, rng);
    for (const auto b : out) ones += b;
  }
  const double freq = double(ones) / (4.0 * trials);
  const double expect = 1.0 - pi.pi;  // ~0.47383
  const double se = std::sqrt(expect * (1.0 - expect) / (4.0 * trials));
  CHECK(std::abs(freq - expect) < 4.0 * se);
}

TEST_CASE("laplace noise moments") {
  Rng rng = dame::make_rng(3);
  const int draws = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < draws; ++t) {
    const double x = dame::laplace_noise(1.0, rng);
    sum += x;
    sum_sq += x * x;
  }
  const double var = sum_sq / draws - (sum / draws) * (sum / draws);
  CHECK(std::abs(var - 2.0) < 0.02);

  double sum5 = 0.0;
  for (int t = 0; t < draws; ++t) sum5 += dame::laplace_noise(5.0, rng);
  CHECK(std::abs(sum5 / draws) < 3.0 * std::sqrt(50.0) / 1000.0);

  CHECK_THROWS_AS(dame::laplace_noise(0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(dame::laplace_noise(-1.0, rng), std::invalid_argument);
}

TEST_CASE("randomized response audit is exact") {
  // 6 ln(e^{alpha/6}) = alpha algebraically.
  for (const double alpha : {0.6, 22.0 / 35.0, 0.05, 1.3}) {
    CHECK_THAT(dame::audit_rr_privacy(FlipProbability::from_alpha(alpha)),
               Catch::Matchers::WithinAbs(alpha, 1e-12));
  }
  // Leaks nothing in the uniform-response limit.
  CHECK(dame::audit_rr_privacy(FlipProbability::from_alpha(1e-12)) < 1e-11);
}

TEST_CASE("laplace audit is exact") {
  CHECK(dame::audit_laplace_privacy(2.0, 1.0) == 0.5);
  const double tau = 0.387;
  CHECK_THAT(dame::audit_laplace_privacy(14.0 * tau / 0.6, 14.0 * tau),
             Catch::Matchers::WithinAbs(0.6, 1e-12));
  CHECK_THROWS_AS(dame::audit_laplace_privacy(0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(dame::audit_laplace_privacy(1.0, 0.0),
                  std::invalid_argument);
}

TEST_CASE("flip probability distance inequality") {
  // (1/2 - pi_{alpha/6})^2 >= alpha^2 / 579 on (0, 1].
  for (int i = 1; i <= 200; ++i) {
    const double alpha = double(i) / 200.0;
    const double pi = FlipProbability::from_alpha(alpha).pi;
    CHECK((0.5 - pi) * (0.5 - pi) >= alpha * alpha / 579.0);
  }
}
