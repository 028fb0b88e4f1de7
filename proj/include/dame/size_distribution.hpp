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

#ifndef DAME_SIZE_DISTRIBUTION_HPP
#define DAME_SIZE_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dame/random.hpp"

namespace dame {

// The dataset-size law M over the positive integers. All moments the
// protocol and bounds need are precomputed over an explicit atom list;
// unbounded families (Poisson, Binomial) are zero-truncated so that
// P(m = 0) = 0, and their upper tail is cut once the remaining mass
// drops below `tail_tolerance`.
class SizeDistribution {
 public:
  enum class Kind {
    kPointMass,
    kTwoSpike,
    kZeroTruncatedPoisson,
    kUniformOdd,
    kTruncatedBinomial,
  };

  static constexpr double kDefaultTailTolerance = 1e-12;

  static SizeDistribution point_mass(std::int64_t m) {
    require(m >= 1, "point_mass: m must be >= 1");
    SizeDistribution d(Kind::kPointMass);
    d.atoms_ = {{m, 1.0}};
    d.finalize();
    return d;
  }

  // M(m1) = 1 - rho, M(m2) = rho.
  static SizeDistribution two_spike(std::int64_t m1, std::int64_t m2,
                                    double rho) {
    require(m1 >= 1 && m2 >= 1, "two_spike: support must be in N*");
    require(rho >= 0.0 && rho <= 1.0, "two_spike: rho must be in [0, 1]");
    SizeDistribution d(Kind::kTwoSpike);
    if (m1 == m2) {
      d.atoms_ = {{m1, 1.0}};
    } else {
      d.atoms_ = {{m1, 1.0 - rho}, {m2, rho}};
      if (m1 > m2) std::swap(d.atoms_[0], d.atoms_[1]);
    }
    d.finalize();
    return d;
  }

  static SizeDistribution zero_truncated_poisson(
      double lambda, double tail_tolerance = kDefaultTailTolerance) {
    require(lambda > 0.0, "zero_truncated_poisson: lambda must be > 0");
    SizeDistribution d(Kind::kZeroTruncatedPoisson, tail_tolerance);
    d.lambda_ = lambda;
    const double log_norm = std::log1p(-std::exp(-lambda));
    double cum = 0.0;
    for (std::int64_t i = 1;; ++i) {
      const double log_p =
          -lambda + i * std::log(lambda) - std::lgamma(double(i) + 1.0) -
          log_norm;
      const double p = std::exp(log_p);
      if (p > 0.0) d.atoms_.push_back({i, p});
      cum += p;
      if (cum >= 1.0 - tail_tolerance && double(i) > lambda) break;
      require(i < (1 << 26), "zero_truncated_poisson: tail did not converge");
    }
    d.finalize();
    return d;
  }

  // Uniform over {1, ..., 2*lambda - 1}.
  static SizeDistribution uniform_odd(std::int64_t lambda) {
    require(lambda >= 1, "uniform_odd: lambda must be >= 1");
    SizeDistribution d(Kind::kUniformOdd);
    d.lambda_ = double(lambda);
    const std::int64_t hi = 2 * lambda - 1;
    const double p = 1.0 / double(hi);
    d.atoms_.reserve(std::size_t(hi));
    for (std::int64_t i = 1; i <= hi; ++i) d.atoms_.push_back({i, p});
    d.finalize();
    return d;
  }

  // Binomial(trials, lambda / trials), zero-truncated.
  static SizeDistribution truncated_binomial(
      double lambda, std::int64_t trials = 1000,
      double tail_tolerance = kDefaultTailTolerance) {
    require(trials >= 1, "truncated_binomial: trials must be >= 1");
    require(lambda > 0.0 && lambda <= double(trials),
            "truncated_binomial: lambda must be in (0, trials]");
    SizeDistribution d(Kind::kTruncatedBinomial, tail_tolerance);
    d.lambda_ = lambda;
    d.trials_ = trials;
    const double p = lambda / double(trials);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double log_norm =
        (p < 1.0) ? std::log1p(-std::exp(double(trials) * log_q)) : 0.0;
    const double log_choose_n = std::lgamma(double(trials) + 1.0);
    for (std::int64_t k = 1; k <= trials; ++k) {
      const double log_pk = log_choose_n - std::lgamma(double(k) + 1.0) -
                            std::lgamma(double(trials - k) + 1.0) +
                            k * log_p + (trials - k) * log_q - log_norm;
      const double pk = std::exp(log_pk);
      if (pk > 0.0) d.atoms_.push_back({k, pk});
    }
    d.finalize();
    return d;
  }

  static SizeDistribution from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Kind kind() const { return kind_; }
  double tail_tolerance() const { return tail_tolerance_; }

  // P(m = i); 0 outside the stored support.
  double pmf(std::int64_t i) const {
    const auto it = find_atom(i);
    return (it != atoms_.end() && it->first == i) ? it->second : 0.0;
  }

  // P(m >= a).
  double survival_geq(std::int64_t a) const {
    const auto idx = std::size_t(find_atom(a) - atoms_.begin());
    return suffix_prob_[idx];
  }

  // P(m > a).
  double survival_gt(std::int64_t a) const { return survival_geq(a + 1); }

  // E[sqrt(m ^ cap)] where ^ is min.
  double sqrt_moment_capped(std::int64_t cap) const {
    require(cap >= 1, "sqrt_moment_capped: cap must be >= 1");
    return sqrt_moment_below(cap) + std::sqrt(double(cap)) * survival_gt(cap);
  }

  // E[sqrt(m) 1{m <= a}].
  double sqrt_moment_below(std::int64_t a) const {
    require(a >= 0, "sqrt_moment_below: a must be >= 0");
    const auto idx = std::size_t(find_atom(a + 1) - atoms_.begin());
    return prefix_sqrt_[idx];
  }

  double sqrt_moment() const { return prefix_sqrt_.back(); }

  double mean() const { return mean_; }

  // sum_{i=1}^{m_tilde} (sqrt(m_tilde) - sqrt(i)) M(i); the bias the
  // shrinkage step induces, removed by the debias identity.
  double debias_gap_sum(std::int64_t m_tilde) const {
    require(m_tilde >= 1, "debias_gap_sum: m_tilde must be >= 1");
    const double p_below = total_mass() - survival_gt(m_tilde);
    return std::sqrt(double(m_tilde)) * p_below - sqrt_moment_below(m_tilde);
  }

  std::int64_t min_support() const { return atoms_.front().first; }
  std::int64_t max_support() const { return atoms_.back().first; }
  double total_mass() const { return suffix_prob_.front(); }

  std::int64_t sample(Rng& rng) const {
    const double u = uniform_unit(rng) * total_mass();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    const auto idx = std::min(std::size_t(it - cdf_.begin()),
                              atoms_.size() - 1);
    return atoms_[idx].first;
  }

  const std::vector<std::pair<std::int64_t, double>>& atoms() const {
    return atoms_;
  }

 private:
  explicit SizeDistribution(Kind kind,
                            double tail_tolerance = kDefaultTailTolerance)
      : kind_(kind), tail_tolerance_(tail_tolerance) {}

  static void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  }

  std::vector<std::pair<std::int64_t, double>>::const_iterator find_atom(
      std::int64_t v) const {
    return std::lower_bound(
        atoms_.begin(), atoms_.end(), v,
        [](const auto& a, std::int64_t x) { return a.first < x; });
  }

  void finalize() {
    require(!atoms_.empty(), "size distribution has empty support");
    // Renormalize after tail truncation so survival(1) is 1 up to rounding.
    double total = 0.0;
    for (const auto& a : atoms_) total += a.second;
    for (auto& a : atoms_) a.second /= total;
    const std::size_t n = atoms_.size();
    suffix_prob_.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;)
      suffix_prob_[i] = suffix_prob_[i + 1] + atoms_[i].second;
    prefix_sqrt_.assign(n + 1, 0.0);
    cdf_.assign(n, 0.0);
    double cum = 0.0;
    mean_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      prefix_sqrt_[i + 1] =
          prefix_sqrt_[i] + std::sqrt(double(atoms_[i].first)) *
                                atoms_[i].second;
      cum += atoms_[i].second;
      cdf_[i] = cum;
      mean_ += double(atoms_[i].first) * atoms_[i].second;
    }
  }

  Kind kind_;
  double tail_tolerance_;
  std::vector<std::pair<std::int64_t, double>> atoms_;  // sorted by value
  std::vector<double> suffix_prob_;  // suffix_prob_[i] = sum_{j>=i} p_j
  std::vector<double> prefix_sqrt_;  // prefix_sqrt_[i] = sum_{j<i} sqrt(v_j) p_j
  std::vector<double> cdf_;
  double mean_ = 0.0;
  double lambda_ = 0.0;
  std::int64_t trials_ = 0;
};

inline SizeDistribution SizeDistribution::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("size distribution: expected {\"kind\": ...}");
  const std::string kind = j.at("kind").get<std::string>();
  const double tol = j.value("tail_tolerance", kDefaultTailTolerance);
  static const std::vector<std::string> known_keys = {
      "kind", "m", "m1", "m2", "rho", "lambda", "trials", "tail_tolerance"};
  for (const auto& item : j.items()) {
    if (std::find(known_keys.begin(), known_keys.end(), item.key()) ==
        known_keys.end())
      throw std::invalid_argument("size distribution: unknown key '" +
                                  item.key() + "'");
  }
  if (kind == "point_mass")
    return point_mass(j.at("m").get<std::int64_t>());
  if (kind == "two_spike")
    return two_spike(j.at("m1").get<std::int64_t>(),
                     j.at("m2").get<std::int64_t>(),
                     j.at("rho").get<double>());
  if (kind == "zero_truncated_poisson")
    return zero_truncated_poisson(j.at("lambda").get<double>(), tol);
  if (kind == "uniform_odd")
    return uniform_odd(j.at("lambda").get<std::int64_t>());
  if (kind == "truncated_binomial")
    return truncated_binomial(j.at("lambda").get<double>(),
                              j.value("trials", std::int64_t{1000}), tol);
  throw std::invalid_argument("size distribution: unknown kind '" + kind +
                              "'");
}

inline nlohmann::json SizeDistribution::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::kPointMass:
      j["kind"] = "point_mass";
      j["m"] = atoms_.front().first;
      break;
    case Kind::kTwoSpike:
      j["kind"] = "two_spike";
      j["m1"] = atoms_.front().first;
      j["m2"] = atoms_.back().first;
      j["rho"] = atoms_.back().second;
      break;
    case Kind::kZeroTruncatedPoisson:
      j["kind"] = "zero_truncated_poisson";
      j["lambda"] = lambda_;
      break;
    case Kind::kUniformOdd:
      j["kind"] = "uniform_odd";
      j["lambda"] = std::int64_t(lambda_);
      break;
    case Kind::kTruncatedBinomial:
      j["kind"] = "truncated_binomial";
      j["lambda"] = lambda_;
      j["trials"] = trials_;
      break;
  }
  return j;
}

}  // namespace dame

#endif  // DAME_SIZE_DISTRIBUTION_HPP
