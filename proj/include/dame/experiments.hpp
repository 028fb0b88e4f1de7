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

#ifndef DAME_EXPERIMENTS_HPP
#define DAME_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dame/bounds.hpp"
#include "dame/data_distribution.hpp"
#include "dame/protocol.hpp"
#include "dame/random.hpp"
#include "dame/size_distribution.hpp"

namespace dame {

namespace detail {

// Stream salts separating data generation from mechanism randomness.
inline constexpr std::uint64_t kDataStream = 0x64617461ULL;
inline constexpr std::uint64_t kMechStream = 0x6d656368ULL;
inline constexpr std::uint64_t kKentStream = 0x6b656e74ULL;

// Runs fn(i) for i in [0, count); results must be written to
// preallocated storage indexed by i, so the schedule cannot change them.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  threads = std::max(threads, 1);
  if (threads == 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([count, threads, w, &fn] {
      for (std::int64_t i = w; i < count; i += threads) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

enum class Algorithm { kDame, kDuchiItem, kKentHomogeneous };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kDame: return "dame";
    case Algorithm::kDuchiItem: return "duchi_item";
    case Algorithm::kKentHomogeneous: return "kent_homogeneous";
  }
  return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "dame") return Algorithm::kDame;
  if (s == "duchi_item") return Algorithm::kDuchiItem;
  if (s == "kent_homogeneous") return Algorithm::kKentHomogeneous;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

struct Scenario {
  SizeDistribution size_dist;
  DataDistribution data_dist;
  std::int64_t n = 2;
  double alpha = 0.5;
  std::int64_t trials = 1;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kDame;
  bool noise_suppressed = false;  // test-only path

  static Scenario from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RiskEstimate {
  double mean_sq_error = 0.0;
  double ci_half_width_99 = 0.0;
  std::int64_t trials = 0;
};

// Item-level baseline: every user releases its empirical mean plus
// Laplace(2 / alpha) noise; the estimate is the plain average.
inline double baseline_duchi(std::span<const UserDataset> users,
                             PrivacyBudget alpha, std::uint64_t seed,
                             bool noise_suppressed = false) {
  if (users.empty())
    throw std::invalid_argument("baseline_duchi: need at least 1 user");
  double sum = 0.0;
  for (std::size_t u = 0; u < users.size(); ++u) {
    double release = users[u].empirical_mean;
    if (!noise_suppressed) {
      Rng rng = make_rng(seed, u, detail::kMechStream);
      release += laplace_noise(2.0 / alpha.alpha, rng);
    }
    sum += release;
  }
  return sum / double(users.size());
}

// Homogeneous-size baseline: truncates every user to the minimum dataset
// size (resampling the empirical mean exactly from mu at that size) and
// runs the protocol with the matching point-mass size law, under which
// the debias step is the identity.
inline double baseline_kent(std::span<const UserDataset> users,
                            const DataDistribution& mu, PrivacyBudget alpha,
                            std::uint64_t seed,
                            bool noise_suppressed = false) {
  if (users.size() < 2)
    throw std::invalid_argument("baseline_kent: need at least 2 users");
  std::int64_t m_min = users[0].m;
  for (const auto& u : users) m_min = std::min(m_min, u.m);

  std::vector<UserDataset> truncated;
  truncated.reserve(users.size());
  for (std::size_t u = 0; u < users.size(); ++u) {
    Rng rng = make_rng(seed, u, detail::kKentStream);
    truncated.emplace_back(m_min, mu.sample_empirical_mean(m_min, rng));
  }

  const SizeDistribution m_law = SizeDistribution::point_mass(m_min);
  const std::int64_t m_tilde =
      solve_m_tilde(m_law, std::int64_t(users.size()), alpha).m_tilde;
  DameOptions opt;
  opt.noise_suppressed = noise_suppressed;
  return run_dame(truncated, m_law, alpha, m_tilde, seed, opt)
      .final_estimate;
}

// Monte Carlo risk at a fixed mu: averages (theta_hat - theta)^2 over
// independent protocol executions. Fully determined by the scenario seed;
// per-trial generators are derived from (seed, trial), so results do not
// depend on the number of worker threads.
inline RiskEstimate estimate_risk(const Scenario& s, int threads = 1) {
  if (s.trials < 1)
    throw std::invalid_argument("estimate_risk: trials must be >= 1");
  const PrivacyBudget alpha(s.alpha);
  const double theta = s.data_dist.true_mean();

  std::int64_t dame_m_tilde = 1;
  if (s.algorithm == Algorithm::kDame)
    dame_m_tilde = solve_m_tilde(s.size_dist, s.n, alpha).m_tilde;

  std::vector<double> sq_errors(std::size_t(s.trials), 0.0);
  detail::parallel_for(s.trials, threads, [&](std::int64_t trial) {
    const std::uint64_t trial_seed = mix64(s.seed, std::uint64_t(trial));
    std::vector<UserDataset> users;
    users.reserve(std::size_t(s.n));
    for (std::int64_t u = 0; u < s.n; ++u) {
      Rng rng = make_rng(trial_seed, std::uint64_t(u), detail::kDataStream);
      const std::int64_t m = s.size_dist.sample(rng);
      users.emplace_back(m, s.data_dist.sample_empirical_mean(m, rng));
    }

    double estimate = 0.0;
    switch (s.algorithm) {
      case Algorithm::kDame: {
        DameOptions opt;
        opt.noise_suppressed = s.noise_suppressed;
        estimate = run_dame(users, s.size_dist, alpha, dame_m_tilde,
                            trial_seed, opt)
                       .final_estimate;
        break;
      }
      case Algorithm::kDuchiItem:
        estimate =
            baseline_duchi(users, alpha, trial_seed, s.noise_suppressed);
        break;
      case Algorithm::kKentHomogeneous:
        estimate = baseline_kent(users, s.data_dist, alpha, trial_seed,
                                 s.noise_suppressed);
        break;
    }
    const double err = estimate - theta;
    sq_errors[std::size_t(trial)] = err * err;
  });

  RiskEstimate r;
  r.trials = s.trials;
  double sum = 0.0;
  for (const double e : sq_errors) sum += e;
  r.mean_sq_error = sum / double(s.trials);
  double var = 0.0;
  for (const double e : sq_errors) {
    const double d = e - r.mean_sq_error;
    var += d * d;
  }
  var = (s.trials > 1) ? var / double(s.trials - 1) : 0.0;
  // 99% two-sided normal quantile.
  r.ci_half_width_99 = 2.5758293035489004 * std::sqrt(var / double(s.trials));
  return r;
}

// ---------------------------------------------------------------------------
// Figure-style grids.

enum class SizeFamily { kPoisson, kUniform, kBinomial };

inline std::string to_string(SizeFamily f) {
  switch (f) {
    case SizeFamily::kPoisson: return "poisson";
    case SizeFamily::kUniform: return "uniform";
    case SizeFamily::kBinomial: return "binomial";
  }
  return "?";
}

struct BoundGridRow {
  std::string family;
  double param = 0.0;        // lambda, or n alpha^2 for the sweep
  double n_alpha_sq = 0.0;
  std::int64_t m_tilde = 1;
  double lower = 0.0;
  std::int64_t lower_argmax_a = 0;
  double upper = 0.0;
};

inline SizeDistribution make_family(SizeFamily family, double lambda) {
  switch (family) {
    case SizeFamily::kPoisson:
      return SizeDistribution::zero_truncated_poisson(lambda);
    case SizeFamily::kUniform:
      return SizeDistribution::uniform_odd(
          std::max<std::int64_t>(std::int64_t(std::llround(lambda)), 1));
    case SizeFamily::kBinomial:
      return SizeDistribution::truncated_binomial(lambda);
  }
  throw std::invalid_argument("unknown size family");
}

// Bound grid over the family parameter at fixed n alpha^2. The upper
// bound is evaluated in rate form (constants stripped): with the proof
// constants the criterion forces m_tilde = 1 at moderate n alpha^2 and
// the capped bound is flat in lambda, hiding the scaling the grid is
// meant to show. The lower bound keeps its exact constants.
inline std::vector<BoundGridRow> run_figure_s1(SizeFamily family,
                                               double n_alpha_sq = 500.0,
                                               int grid_points = 100,
                                               double lambda_lo = 5.0,
                                               double lambda_hi = 500.0) {
  if (grid_points < 2)
    throw std::invalid_argument("run_figure_s1: need at least 2 grid points");
  const BoundConstants rate = BoundConstants::rate();
  const std::int64_t n = std::max<std::int64_t>(
      std::int64_t(std::llround(n_alpha_sq)), 2);
  const PrivacyBudget alpha(1.0);  // n alpha^2 = n exactly

  std::vector<BoundGridRow> rows;
  rows.reserve(std::size_t(grid_points));
  const double log_lo = std::log(lambda_lo);
  const double log_hi = std::log(lambda_hi);
  for (int i = 0; i < grid_points; ++i) {
    const double lambda = std::exp(
        log_lo + (log_hi - log_lo) * double(i) / double(grid_points - 1));
    const SizeDistribution dist = make_family(family, lambda);
    BoundGridRow row;
    row.family = to_string(family);
    row.param = lambda;
    row.n_alpha_sq = double(n);
    const auto lb = lower_bound(dist, n, alpha);
    row.lower = lb.first;
    row.lower_argmax_a = lb.second;
    const auto ub = upper_bound(dist, n, alpha, rate);
    row.upper = ub.value;
    row.m_tilde = ub.m_tilde;
    rows.push_back(std::move(row));
  }
  return rows;
}

// The n alpha^2 sweep at a fixed Poisson(lambda) size law.
inline std::vector<BoundGridRow> run_figure_s1_sweep(
    double lambda = 5.0, double nas_lo = 1e2, double nas_hi = 1e6,
    int grid_points = 100) {
  if (grid_points < 2)
    throw std::invalid_argument("run_figure_s1_sweep: need >= 2 grid points");
  const BoundConstants rate = BoundConstants::rate();
  const SizeDistribution dist =
      SizeDistribution::zero_truncated_poisson(lambda);
  std::vector<BoundGridRow> rows;
  rows.reserve(std::size_t(grid_points));
  const double log_lo = std::log(nas_lo);
  const double log_hi = std::log(nas_hi);
  for (int i = 0; i < grid_points; ++i) {
    const std::int64_t n = std::max<std::int64_t>(
        std::int64_t(std::llround(std::exp(
            log_lo + (log_hi - log_lo) * double(i) / double(grid_points - 1)))),
        2);
    const PrivacyBudget alpha(1.0);
    BoundGridRow row;
    row.family = "poisson_nas_sweep";
    row.param = double(n);
    row.n_alpha_sq = double(n);
    const auto lb = lower_bound(dist, n, alpha);
    row.lower = lb.first;
    row.lower_argmax_a = lb.second;
    const auto ub = upper_bound(dist, n, alpha, rate);
    row.upper = ub.value;
    row.m_tilde = ub.m_tilde;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct BenchmarkRow {
  std::string algorithm;
  std::string param_name;
  double param_value = 0.0;
  std::int64_t n = 0;
  double alpha = 0.0;
  std::int64_t trials = 0;
  double mse = 0.0;
  double ci99 = 0.0;
};

// Two-spike benchmark of the three algorithms over a rho grid.
inline std::vector<BenchmarkRow> run_figure_s2(
    std::int64_t m1, std::int64_t m2, std::int64_t n, double alpha,
    int rho_points, std::int64_t trials, std::uint64_t seed,
    int threads = 1) {
  if (rho_points < 2)
    throw std::invalid_argument("run_figure_s2: need >= 2 rho points");
  std::vector<BenchmarkRow> rows;
  const Algorithm algorithms[] = {Algorithm::kDame, Algorithm::kDuchiItem,
                                  Algorithm::kKentHomogeneous};
  for (int i = 0; i < rho_points; ++i) {
    const double rho = double(i) / double(rho_points - 1);
    for (const Algorithm algo : algorithms) {
      Scenario s{SizeDistribution::two_spike(m1, m2, rho),
                 DataDistribution::two_point(0.0),
                 n,
                 alpha,
                 trials,
                 mix64(seed, std::uint64_t(i),
                       std::uint64_t(algo) + 1),
                 algo};
      const RiskEstimate est = estimate_risk(s, threads);
      rows.push_back({to_string(algo), "rho", rho, n, alpha, trials,
                      est.mean_sq_error, est.ci_half_width_99});
    }
  }
  return rows;
}

inline Scenario Scenario::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known_keys = {
      "size_dist", "data_dist", "n",         "alpha",
      "trials",    "seed",      "algorithm", "noise_suppressed"};
  for (const auto& item : j.items()) {
    if (std::find(known_keys.begin(), known_keys.end(), item.key()) ==
        known_keys.end())
      throw std::invalid_argument("scenario: unknown key '" + item.key() +
                                  "'");
  }
  Scenario s{SizeDistribution::from_json(j.at("size_dist")),
             DataDistribution::from_json(j.at("data_dist")),
             j.at("n").get<std::int64_t>(),
             j.at("alpha").get<double>(),
             j.at("trials").get<std::int64_t>(),
             j.value("seed", std::uint64_t{0}),
             algorithm_from_string(j.value("algorithm", std::string("dame")))};
  if (s.n < 1 || s.trials < 1)
    throw std::invalid_argument("scenario: n and trials must be >= 1");
  if (!(s.alpha > 0.0))
    throw std::invalid_argument("scenario: alpha must be > 0");
  return s;
}

inline nlohmann::json Scenario::to_json() const {
  nlohmann::json j;
  j["size_dist"] = size_dist.to_json();
  j["data_dist"] = data_dist.to_json();
  j["n"] = n;
  j["alpha"] = alpha;
  j["trials"] = trials;
  j["seed"] = seed;
  j["algorithm"] = dame::to_string(algorithm);
  return j;
}

}  // namespace dame

#endif  // DAME_EXPERIMENTS_HPP
