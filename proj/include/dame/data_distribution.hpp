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

#ifndef DAME_DATA_DISTRIBUTION_HPP
#define DAME_DATA_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dame/random.hpp"

namespace dame {

// The per-sample law mu on [-1, 1] with true mean theta. The protocol only
// ever consumes empirical means, so the sampler produces them directly; for
// the two-point law the mean of m draws is (2B - m)/m with B ~ Bin(m, p),
// which makes m = 10^6 cost O(1).
class DataDistribution {
 public:
  enum class Kind { kTwoPoint, kUniformInterval, kPointMass };

  // Support {-1, +1}, P(+1) = (1 + theta)/2.
  static DataDistribution two_point(double theta) {
    require(theta >= -1.0 && theta <= 1.0, "two_point: theta must be in [-1, 1]");
    DataDistribution d(Kind::kTwoPoint);
    d.theta_ = theta;
    return d;
  }

  static DataDistribution uniform_interval(double lo, double hi) {
    require(lo >= -1.0 && hi <= 1.0 && lo < hi,
            "uniform_interval: need -1 <= lo < hi <= 1");
    DataDistribution d(Kind::kUniformInterval);
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
  }

  static DataDistribution point_mass(double x) {
    require(x >= -1.0 && x <= 1.0, "point_mass: x must be in [-1, 1]");
    DataDistribution d(Kind::kPointMass);
    d.x_ = x;
    return d;
  }

  static DataDistribution from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Kind kind() const { return kind_; }

  double true_mean() const {
    switch (kind_) {
      case Kind::kTwoPoint: return theta_;
      case Kind::kUniformInterval: return 0.5 * (lo_ + hi_);
      case Kind::kPointMass: return x_;
    }
    return 0.0;
  }

  // Distributed exactly as the mean of m i.i.d. draws from mu.
  double sample_empirical_mean(std::int64_t m, Rng& rng) const {
    require(m >= 1, "sample_empirical_mean: m must be >= 1");
    switch (kind_) {
      case Kind::kTwoPoint: {
        std::binomial_distribution<std::int64_t> bin(m, 0.5 * (1.0 + theta_));
        const std::int64_t ones = bin(rng);
        return double(2 * ones - m) / double(m);
      }
      case Kind::kUniformInterval: {
        double sum = 0.0;
        for (std::int64_t t = 0; t < m; ++t)
          sum += lo_ + (hi_ - lo_) * uniform_unit(rng);
        return sum / double(m);
      }
      case Kind::kPointMass:
        return x_;
    }
    return 0.0;
  }

 private:
  explicit DataDistribution(Kind kind) : kind_(kind) {}

  static void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  }

  Kind kind_;
  double theta_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  double x_ = 0.0;
};

// A user's dataset in sufficient-statistic form: the protocol never reads
// individual samples, only (m, empirical mean).
struct UserDataset {
  std::int64_t m = 1;
  double empirical_mean = 0.0;

  UserDataset() = default;
  UserDataset(std::int64_t m_in, double mean_in)
      : m(m_in), empirical_mean(mean_in) {
    if (m < 1) throw std::invalid_argument("UserDataset: m must be >= 1");
    if (empirical_mean < -1.0 || empirical_mean > 1.0)
      throw std::invalid_argument(
          "UserDataset: empirical mean must be in [-1, 1]");
  }
};

inline DataDistribution DataDistribution::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("data distribution: expected {\"kind\": ...}");
  const std::string kind = j.at("kind").get<std::string>();
  static const std::vector<std::string> known_keys = {"kind", "theta", "lo",
                                                      "hi", "x"};
  for (const auto& item : j.items()) {
    if (std::find(known_keys.begin(), known_keys.end(), item.key()) ==
        known_keys.end())
      throw std::invalid_argument("data distribution: unknown key '" +
                                  item.key() + "'");
  }
  if (kind == "two_point") return two_point(j.at("theta").get<double>());
  if (kind == "uniform_interval")
    return uniform_interval(j.at("lo").get<double>(),
                            j.at("hi").get<double>());
  if (kind == "point_mass") return point_mass(j.at("x").get<double>());
  throw std::invalid_argument("data distribution: unknown kind '" + kind +
                              "'");
}

inline nlohmann::json DataDistribution::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::kTwoPoint:
      j["kind"] = "two_point";
      j["theta"] = theta_;
      break;
    case Kind::kUniformInterval:
      j["kind"] = "uniform_interval";
      j["lo"] = lo_;
      j["hi"] = hi_;
      break;
    case Kind::kPointMass:
      j["kind"] = "point_mass";
      j["x"] = x_;
      break;
  }
  return j;
}

}  // namespace dame

#endif  // DAME_DATA_DISTRIBUTION_HPP
