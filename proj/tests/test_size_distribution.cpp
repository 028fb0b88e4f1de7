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
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "dame/data_distribution.hpp"
#include "dame/size_distribution.hpp"

using dame::DataDistribution;
using dame::Rng;
using dame::SizeDistribution;
using dame::UserDataset;

namespace {

std::vector<SizeDistribution> all_families() {
  return {SizeDistribution::point_mass(4),
          SizeDistribution::two_spike(1, 100, 0.5),
          SizeDistribution::two_spike(1000, 10000, 0.9),
          SizeDistribution::zero_truncated_poisson(5.0),
          SizeDistribution::zero_truncated_poisson(250.0),
          SizeDistribution::uniform_odd(7),
          SizeDistribution::truncated_binomial(50.0)};
}

}  // namespace

TEST_CASE("pmf point values") {
  CHECK(SizeDistribution::point_mass(4).pmf(4) == 1.0);
  CHECK(SizeDistribution::two_spike(1, 100, 0.5).pmf(100) == 0.5);
  CHECK(SizeDistribution::two_spike(1, 100, 0.5).pmf(7) == 0.0);
  // 5 e^-5 / (1 - e^-5), frozen independently.
  CHECK_THAT(SizeDistribution::zero_truncated_poisson(5.0).pmf(1),
             Catch::Matchers::WithinAbs(0.03391827453152116, 1e-9));
}

TEST_CASE("pmf sums to one over the support") {
  for (const auto& d : all_families()) {
    double total = 0.0;
    for (const auto& atom : d.atoms()) total += atom.second;
    CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-9));
    CHECK(d.min_support() >= 1);
    CHECK(std::isfinite(d.mean()));
  }
}

TEST_CASE("survival variants") {
  for (const auto& d : all_families()) {
    CHECK(d.survival_geq(1) == Catch::Approx(1.0).margin(1e-12));
    for (std::int64_t a = 0; a <= d.max_support() + 2; a += 7)
      CHECK(d.survival_gt(a) == d.survival_geq(a + 1));
    // Non-increasing in a.
    double prev = d.survival_geq(0);
    for (std::int64_t a = 1; a <= d.max_support() + 1; ++a) {
      const double cur = d.survival_geq(a);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }
  CHECK(SizeDistribution::two_spike(1, 100, 0.3).survival_geq(2) ==
        Catch::Approx(0.3).margin(1e-12));
  CHECK(SizeDistribution::point_mass(4).survival_gt(4) == 0.0);
}

TEST_CASE("sqrt moments") {
  CHECK(SizeDistribution::point_mass(4).sqrt_moment_capped(4) == 2.0);
  CHECK_THAT(SizeDistribution::two_spike(1, 100, 0.5).sqrt_moment_capped(100),
             Catch::Matchers::WithinAbs(5.5, 1e-12));
  for (const auto& d : all_families()) {
    CHECK(d.sqrt_moment_capped(1) == Catch::Approx(1.0).margin(1e-12));
    CHECK(d.sqrt_moment_below(0) == 0.0);
    // Non-decreasing in cap and bounded by the full sqrt moment.
    double prev = 0.0;
    for (std::int64_t cap = 1; cap <= d.max_support() + 2;
         cap += std::max<std::int64_t>(1, d.max_support() / 13)) {
      const double cur = d.sqrt_moment_capped(cap);
      CHECK(cur >= prev - 1e-15);
      CHECK(cur <= d.sqrt_moment() + 1e-12);
      prev = cur;
      // Sanity ordering between the capped and indicator moments.
      CHECK(d.sqrt_moment_below(cap) +
                std::sqrt(double(cap)) * d.survival_geq(cap + 1) <=
            d.sqrt_moment_capped(cap) + std::sqrt(double(cap)) + 1e-12);
    }
  }
  CHECK(SizeDistribution::point_mass(4).sqrt_moment_below(4) == 2.0);
  CHECK_THAT(SizeDistribution::two_spike(1, 100, 0.3).sqrt_moment_below(50),
             Catch::Matchers::WithinAbs(0.7, 1e-12));
}

TEST_CASE("debias gap sum") {
  CHECK(SizeDistribution::point_mass(4).debias_gap_sum(4) == 0.0);
  CHECK_THAT(SizeDistribution::two_spike(1, 100, 0.5).debias_gap_sum(100),
             Catch::Matchers::WithinAbs(4.5, 1e-12));
  for (const auto& d : all_families()) {
    CHECK(std::abs(d.debias_gap_sum(1)) < 1e-15);
    // Direct-summation cross-check.
    for (const std::int64_t mt : {3LL, 10LL, 64LL}) {
      double direct = 0.0;
      for (std::int64_t i = 1; i <= mt; ++i)
        direct += (std::sqrt(double(mt)) - std::sqrt(double(i))) * d.pmf(i);
      CHECK_THAT(d.debias_gap_sum(mt),
                 Catch::Matchers::WithinAbs(direct, 1e-10));
    }
  }
}

TEST_CASE("uniform odd support") {
  const auto d = SizeDistribution::uniform_odd(5);
  CHECK(d.min_support() == 1);
  CHECK(d.max_support() == 9);
  for (std::int64_t i = 1; i <= 9; ++i)
    CHECK_THAT(d.pmf(i), Catch::Matchers::WithinAbs(1.0 / 9.0, 1e-12));
}

TEST_CASE("sampling matches the pmf") {
  const auto d = SizeDistribution::two_spike(2, 9, 0.25);
  Rng rng = dame::make_rng(42);
  int hits9 = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    const auto v = d.sample(rng);
    CHECK((v == 2 || v == 9));
    hits9 += (v == 9);
  }
  // 3 sigma band around 0.25.
  CHECK(std::abs(double(hits9) / trials - 0.25) <
        3.0 * std::sqrt(0.25 * 0.75 / trials));
}

TEST_CASE("size distribution json round trip") {
  for (const auto& d : all_families()) {
    const auto d2 = SizeDistribution::from_json(d.to_json());
    REQUIRE(d2.atoms().size() == d.atoms().size());
    for (std::size_t i = 0; i < d.atoms().size(); ++i) {
      CHECK(d2.atoms()[i].first == d.atoms()[i].first);
      CHECK_THAT(d2.atoms()[i].second,
                 Catch::Matchers::WithinAbs(d.atoms()[i].second, 1e-12));
    }
  }
  CHECK_THROWS_AS(SizeDistribution::from_json(
                      {{"kind", "point_mass"}, {"m", 3}, {"bogus", 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SizeDistribution::from_json({{"kind", "nope"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SizeDistribution::from_json(nlohmann::json::array()),
                  std::invalid_argument);
}

TEST_CASE("size distribution validation") {
  CHECK_THROWS_AS(SizeDistribution::point_mass(0), std::invalid_argument);
  CHECK_THROWS_AS(SizeDistribution::two_spike(1, 10, 1.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(SizeDistribution::zero_truncated_poisson(-1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SizeDistribution::uniform_odd(0), std::invalid_argument);
  CHECK_THROWS_AS(SizeDistribution::truncated_binomial(2000.0, 1000),
                  std::invalid_argument);
}

TEST_CASE("data distribution true mean and sampling") {
  CHECK(DataDistribution::two_point(0.2).true_mean() == 0.2);
  CHECK(DataDistribution::point_mass(0.3).true_mean() == 0.3);
  CHECK(DataDistribution::uniform_interval(-0.5, 0.9).true_mean() ==
        Catch::Approx(0.2));

  Rng rng = dame::make_rng(7);
  const auto pm = DataDistribution::point_mass(0.3);
  CHECK(pm.sample_empirical_mean(1000000, rng) == 0.3);

  const auto rademacher = DataDistribution::two_point(0.0);
  for (int t = 0; t < 100; ++t) {
    const double v = rademacher.sample_empirical_mean(1, rng);
    CHECK((v == -1.0 || v == 1.0));
  }
}

TEST_CASE("two point empirical mean concentrates") {
  const auto mu = DataDistribution::two_point(0.2);
  Rng rng = dame::make_rng(11);
  const int draws = 10000;
  const std::int64_t m = 10000;
  double sum = 0.0;
  for (int t = 0; t < draws; ++t) sum += mu.sample_empirical_mean(m, rng);
  const double avg = sum / draws;
  // Var of one empirical mean is (1 - theta^2)/m.
  const double se = std::sqrt((1.0 - 0.04) / double(m) / double(draws));
  CHECK(std::abs(avg - 0.2) < 5.0 * se);
}

TEST_CASE("empirical mean of a million samples matches the true mean") {
  const auto mu = DataDistribution::uniform_interval(-0.5, 0.9);
  Rng rng = dame::make_rng(13);
  // One draw of a size-10^6 empirical mean is the average of 10^6 samples.
  const double avg = mu.sample_empirical_mean(1000000, rng);
  const double se = (0.9 - (-0.5)) / std::sqrt(12.0) / 1000.0;
  CHECK(std::abs(avg - 0.2) < 5.0 * se);
}

TEST_CASE("binomial fast path matches direct simulation") {
  // Two-sample KS on the distribution of the size-m empirical mean: the
  // O(1) binomial path against an explicit m-draw loop.
  const double theta = 0.3;
  const std::int64_t m = 7;
  const int draws = 100000;
  const auto mu = DataDistribution::two_point(theta);
  const double p1 = 0.5 * (1.0 + theta);

  std::vector<int> fast(std::size_t(m) + 1, 0), slow(std::size_t(m) + 1, 0);
  Rng rng = dame::make_rng(17);
  for (int t = 0; t < draws; ++t) {
    const double v = mu.sample_empirical_mean(m, rng);
    const auto ones = std::int64_t(std::llround((v * m + m) / 2.0));
    ++fast[std::size_t(ones)];
  }
  for (int t = 0; t < draws; ++t) {
    std::int64_t ones = 0;
    for (std::int64_t i = 0; i < m; ++i) ones += dame::bernoulli(p1, rng);
    ++slow[std::size_t(ones)];
  }

  double cdf_f = 0.0, cdf_s = 0.0, ks = 0.0;
  for (std::size_t k = 0; k <= std::size_t(m); ++k) {
    cdf_f += double(fast[k]) / draws;
    cdf_s += double(slow[k]) / draws;
    ks = std::max(ks, std::abs(cdf_f - cdf_s));
  }
  // Two-sample KS critical value at level 1e-3 with n = m = 1e5.
  CHECK(ks < 0.008718);
}

TEST_CASE("user dataset validation") {
  CHECK_NOTHROW(UserDataset(1, -1.0));
  CHECK_NOTHROW(UserDataset(5, 0.25));
  CHECK_THROWS_AS(UserDataset(0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(UserDataset(3, 1.5), std::invalid_argument);
}

TEST_CASE("data distribution json round trip") {
  for (const auto& mu :
       {DataDistribution::two_point(0.2),
        DataDistribution::uniform_interval(-0.25, 0.75),
        DataDistribution::point_mass(-0.4)}) {
    const auto mu2 = DataDistribution::from_json(mu.to_json());
    CHECK(mu2.kind() == mu.kind());
    CHECK(mu2.true_mean() == mu.true_mean());
  }
  CHECK_THROWS_AS(
      DataDistribution::from_json({{"kind", "two_point"}, {"th", 0.1}}),
      std::invalid_argument);
}
