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

#ifndef DAME_PROTOCOL_HPP
#define DAME_PROTOCOL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "dame/data_distribution.hpp"
#include "dame/mechanisms.hpp"
#include "dame/random.hpp"
#include "dame/size_distribution.hpp"

namespace dame {

// Half-width of the localisation bins:
// tau = sqrt(2 ln(8 (sqrt(m_tilde n alpha^2) v 1)) / m_tilde).
inline double compute_tau(std::int64_t m_tilde, std::int64_t n,
                          PrivacyBudget alpha) {
  if (m_tilde < 1) throw std::invalid_argument("compute_tau: m_tilde >= 1");
  if (n < 2) throw std::invalid_argument("compute_tau: n >= 2");
  const double nas = double(n) * alpha.alpha * alpha.alpha;
  const double arg = std::max(std::sqrt(double(m_tilde) * nas), 1.0);
  return std::sqrt(2.0 * std::log(8.0 * arg) / double(m_tilde));
}

// The tau-grid over [-1, 1]: bins I_j = [-1 + 2 tau (j-1), -1 + 2 tau j)
// for j < bin_count, with the last bin clipped to end at +1 inclusive.
class BinPartition {
 public:
  explicit BinPartition(double tau) : tau_(tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("BinPartition: tau > 0");
    bin_count_ = (tau >= 1.0) ? 1 : std::int64_t(std::ceil(1.0 / tau));
  }

  double tau() const { return tau_; }
  std::int64_t bin_count() const { return bin_count_; }

  double lower(std::int64_t j) const { return -1.0 + 2.0 * tau_ * double(j); }
  double upper(std::int64_t j) const {
    return (j == bin_count_ - 1) ? 1.0
                                 : -1.0 + 2.0 * tau_ * double(j + 1);
  }
  double midpoint(std::int64_t j) const {
    return 0.5 * (lower(j) + upper(j));
  }

  // Index of the unique bin containing x; x = 1 lands in the last bin.
  std::int64_t bin_index(double x) const {
    if (x < -1.0 || x > 1.0)
      throw std::invalid_argument("bin_index: x must be in [-1, 1]");
    const auto j = std::int64_t(std::floor((x + 1.0) / (2.0 * tau_)));
    return std::clamp(j, std::int64_t{0}, bin_count_ - 1);
  }

 private:
  double tau_;
  std::int64_t bin_count_;
};

using VoteVector = BitVector;

// Localisation vote: ones at the bin containing the empirical
// mean and its in-range neighbors; all-zero for users with m < m_tilde.
inline VoteVector localisation_vote(const UserDataset& user,
                                    const BinPartition& part,
                                    std::int64_t m_tilde) {
  VoteVector votes(std::size_t(part.bin_count()), 0);
  if (user.m < m_tilde) return votes;
  const std::int64_t j = part.bin_index(user.empirical_mean);
  for (std::int64_t k = j - 1; k <= j + 1; ++k)
    if (k >= 0 && k < part.bin_count()) votes[std::size_t(k)] = 1;
  return votes;
}

// The elected bin with its enlarged interval [L, U] and midpoint s.
// U - L <= 14 tau, which is the Laplace sensitivity of the release step.
struct CandidateBin {
  std::int64_t index = 0;
  double lower = -1.0;  // L = (l_j - 6 tau) v -1
  double upper = 1.0;   // U = (u_j + 6 tau) ^ 1
  double midpoint = 0.0;

  static CandidateBin at(const BinPartition& part, std::int64_t j) {
    CandidateBin c;
    c.index = j;
    c.lower = std::max(part.lower(j) - 6.0 * part.tau(), -1.0);
    c.upper = std::min(part.upper(j) + 6.0 * part.tau(), 1.0);
    c.midpoint = part.midpoint(j);
    return c;
  }
};

// Argmax of the column sums of the privatized votes; ties broken by the
// lowest bin index.
inline CandidateBin elect_candidate(std::span<const VoteVector> votes,
                                    const BinPartition& part) {
  if (votes.empty())
    throw std::invalid_argument("elect_candidate: empty vote list");
  std::vector<std::int64_t> sums(std::size_t(part.bin_count()), 0);
  for (const auto& v : votes) {
    if (std::int64_t(v.size()) != part.bin_count())
      throw std::invalid_argument("elect_candidate: vote length mismatch");
    for (std::size_t j = 0; j < v.size(); ++j) sums[j] += v[j];
  }
  const auto it = std::max_element(sums.begin(), sums.end());
  return CandidateBin::at(part, std::int64_t(it - sums.begin()));
}

// Shrinkage towards the candidate midpoint: users with m < m_tilde
// pull their mean towards s by factor sqrt(m ^ m_tilde)/sqrt(m_tilde);
// users with m >= m_tilde are untouched.
inline double shrink_estimate(const UserDataset& user,
                              const CandidateBin& cand,
                              std::int64_t m_tilde) {
  const double w = std::sqrt(double(std::min(user.m, m_tilde))) /
                   std::sqrt(double(m_tilde));
  return w * user.empirical_mean + (1.0 - w) * cand.midpoint;
}

// Projection onto [L, U] plus Laplace(14 tau / alpha) noise. The
// noise-suppressed path exists for deterministic pipeline tests only and
// is never reachable from the CLI's private paths.
inline double noisy_release(double shrunk, const CandidateBin& cand,
                            double tau, PrivacyBudget alpha, Rng& rng,
                            bool noise_suppressed = false) {
  const double projected = std::clamp(shrunk, cand.lower, cand.upper);
  if (noise_suppressed) return projected;
  return projected + laplace_noise(14.0 * tau / alpha.alpha, rng);
}

// Bias correction: inverts the shrinkage bias in expectation using the
// known size law M.
inline double debias(double mean_of_releases, const CandidateBin& cand,
                     const SizeDistribution& dist, std::int64_t m_tilde) {
  const double denom = dist.sqrt_moment_capped(m_tilde);
  const double gap = dist.debias_gap_sum(m_tilde);
  return (mean_of_releases * std::sqrt(double(m_tilde)) -
          gap * cand.midpoint) /
         denom;
}

// The only data the statistician sees: privatized vote vectors and noisy
// per-user estimates. Never contains raw empirical means.
struct ProtocolTranscript {
  std::vector<VoteVector> privatized_votes;
  std::vector<double> noisy_estimates;
  CandidateBin candidate;
  double tau = 0.0;
  std::int64_t m_tilde = 1;
  double final_estimate = 0.0;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tau"] = tau;
    j["m_tilde"] = m_tilde;
    j["candidate"] = {{"index", candidate.index},
                      {"lower", candidate.lower},
                      {"upper", candidate.upper},
                      {"midpoint", candidate.midpoint}};
    nlohmann::json votes = nlohmann::json::array();
    for (const auto& v : privatized_votes) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto b : v) row.push_back(int(b));
      votes.push_back(std::move(row));
    }
    j["privatized_votes"] = std::move(votes);
    j["noisy_estimates"] = noisy_estimates;
    j["final_estimate"] = final_estimate;
    return j;
  }
};

struct DameOptions {
  // Test-only: suppress Laplace noise and randomized response.
  bool noise_suppressed = false;
  // Test-only: skip the election and force this candidate bin index.
  std::optional<std::int64_t> forced_bin;
};

// The full two-phase DAME pipeline. The first floor(n/2) users vote, the
// remaining users release noisy shrunk estimates; odd n drops the last
// user. Each user draws from a generator derived from (seed, u) so that
// execution order does not change results.
inline ProtocolTranscript run_dame(std::span<const UserDataset> users,
                                   const SizeDistribution& dist,
                                   PrivacyBudget alpha, std::int64_t m_tilde,
                                   std::uint64_t seed,
                                   const DameOptions& options = {}) {
  const auto n = std::int64_t(users.size());
  if (n < 2) throw std::invalid_argument("run_dame: need at least 2 users");
  const std::int64_t n_even = n - (n % 2);
  const std::int64_t half = n_even / 2;

  ProtocolTranscript t;
  t.m_tilde = m_tilde;
  t.tau = compute_tau(m_tilde, n_even, alpha);
  const BinPartition part(t.tau);
  const FlipProbability pi = FlipProbability::from_alpha(alpha.alpha);

  t.privatized_votes.reserve(std::size_t(half));
  for (std::int64_t u = 0; u < half; ++u) {
    VoteVector v = localisation_vote(users[std::size_t(u)], part, m_tilde);
    if (!options.noise_suppressed) {
      Rng rng = make_rng(seed, std::uint64_t(u), 0x766f7465ULL);
      v = randomized_response(v, pi, rng);
    }
    t.privatized_votes.push_back(std::move(v));
  }

  t.candidate = options.forced_bin
                    ? CandidateBin::at(part, *options.forced_bin)
                    : elect_candidate(t.privatized_votes, part);

  t.noisy_estimates.reserve(std::size_t(half));
  double sum = 0.0;
  for (std::int64_t u = half; u < n_even; ++u) {
    const double shrunk =
        shrink_estimate(users[std::size_t(u)], t.candidate, m_tilde);
    Rng rng = make_rng(seed, std::uint64_t(u), 0x72656c65ULL);
    const double release = noisy_release(shrunk, t.candidate, t.tau, alpha,
                                         rng, options.noise_suppressed);
    t.noisy_estimates.push_back(release);
    sum += release;
  }

  const double mean_release = sum / double(half);
  t.final_estimate = debias(mean_release, t.candidate, dist, m_tilde);
  return t;
}

}  // namespace dame

#endif  // DAME_PROTOCOL_HPP
