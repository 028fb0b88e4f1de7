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

#ifndef DAME_BOUNDS_HPP
#define DAME_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "dame/mechanisms.hpp"
#include "dame/size_distribution.hpp"

namespace dame {

// Constants of the risk bounds. The defaults are the exact values from the
// proofs; rate() strips the multiplicative constants (keeping the log
// argument scale) so that figure-style grids show the bound *rates* rather
// than saturating at the trivial cap.
struct BoundConstants {
  double c1 = std::exp(-9.0) / 16.0;
  double c2 = 24.0;
  double c3 = 1570.0;
  double c4 = 8.0;
  double c5 = 868.5;  // = 579 * 3/2

  static BoundConstants defaults() { return BoundConstants{}; }

  static BoundConstants rate() {
    BoundConstants c;
    c.c3 = 1.0;
    c.c5 = 1.0;
    return c;
  }
};

// phi(a) = c5/(n a^2) * ln[c4 (a n a^2 v 1) / ln(c4 (a n a^2 v 1))].
inline double phi(std::int64_t a, double n_alpha_sq,
                  const BoundConstants& c = BoundConstants::defaults()) {
  if (a < 1) throw std::invalid_argument("phi: a must be >= 1");
  if (!(n_alpha_sq > 0.0))
    throw std::invalid_argument("phi: n_alpha_sq must be > 0");
  const double x = c.c4 * std::max(double(a) * n_alpha_sq, 1.0);
  return c.c5 / n_alpha_sq * std::log(x / std::log(x));
}

// psi(a) = P(m >= a)^2 - (phi(a) ^ 1); the m_tilde feasibility criterion.
inline double psi(const SizeDistribution& dist, std::int64_t a,
                  double n_alpha_sq,
                  const BoundConstants& c = BoundConstants::defaults()) {
  const double s = dist.survival_geq(a);
  return s * s - std::min(phi(a, n_alpha_sq, c), 1.0);
}

struct MTildeResult {
  std::int64_t m_tilde = 1;
  int iterations = 0;       // psi evaluations spent bracketing + bisecting
  double psi_at_result = 0.0;
  double psi_above = 0.0;   // psi at the first infeasible point
  bool bracket_extended = false;
  bool used_linear_scan = false;  // binary-search invariant self-check failed
};

// Rounding slack for the feasibility test: survival(1)^2 can sit a few ulp
// below 1 while phi ^ 1 is exactly 1, and the criterion must still accept
// a = 1. Applied identically by the solver and any reference scan.
inline constexpr double kPsiSlack = 1e-9;

// Largest a with psi(a) >= 0, by binary search over
// [1, ceil(exp(n alpha^2)) ^ 2^31]. survival is non-increasing in a and
// phi non-decreasing, so psi is non-increasing and the search is exact.
// If the nominal upper end is still feasible (possible when P(m >= a) = 1
// far beyond exp(n alpha^2)), the bracket is extended to just past the
// support maximum, where psi < 0 is guaranteed.
inline MTildeResult solve_m_tilde(
    const SizeDistribution& dist, std::int64_t n, PrivacyBudget alpha,
    const BoundConstants& c = BoundConstants::defaults()) {
  const double nas = double(n) * alpha.alpha * alpha.alpha;
  MTildeResult r;

  const std::int64_t hard_cap = std::int64_t(1) << 31;
  std::int64_t hi = (nas >= 21.0)
                        ? hard_cap
                        : std::max<std::int64_t>(
                              std::int64_t(std::ceil(std::exp(nas))), 2);
  hi = std::min(hi, hard_cap);
  const std::int64_t support_end = dist.max_support() + 1;
  hi = std::min(hi, support_end);

  const auto feasible = [&](std::int64_t a) {
    ++r.iterations;
    return psi(dist, a, nas, c) >= -kPsiSlack;
  };

  while (feasible(hi) && hi < support_end) {
    r.bracket_extended = true;
    hi = std::min(hi * 2, support_end);
  }
  if (psi(dist, hi, nas, c) >= -kPsiSlack) {
    // Only possible at hi = support_end, where survival is 0; treat the
    // whole support as feasible.
    r.m_tilde = dist.max_support();
    r.psi_at_result = psi(dist, r.m_tilde, nas, c);
    r.psi_above = psi(dist, support_end, nas, c);
    return r;
  }

  std::int64_t lo = 1;  // psi(1) >= 0 always: survival(1) = 1
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  r.m_tilde = lo;
  r.psi_at_result = psi(dist, lo, nas, c);
  r.psi_above = psi(dist, hi, nas, c);

  // Self-check: the search assumed psi non-increasing, which holds because
  // survival is non-increasing and phi non-decreasing. If rounding ever
  // breaks the bracket anyway, redo the search as a linear scan.
  if (r.psi_at_result < -kPsiSlack || r.psi_above >= -kPsiSlack) {
    r.used_linear_scan = true;
    std::int64_t best = 1;
    for (std::int64_t a = 1; a < support_end; ++a) {
      if (psi(dist, a, nas, c) >= -kPsiSlack) best = a;
    }
    r.m_tilde = best;
    r.psi_at_result = psi(dist, best, nas, c);
    r.psi_above = psi(dist, std::min(best + 1, support_end), nas, c);
  }
  return r;
}

// Minimax lower bound:
// max_a c1 exp(-c2 n a^2 P(m > a)^2) / (n a^2 E[sqrt(m) 1{m <= a}]^2 v 1).
// Both P(m > a) and the indicator moment are constant between support
// atoms, so scanning {0} + atoms + a_max is an exhaustive scan.
inline std::pair<double, std::int64_t> lower_bound(
    const SizeDistribution& dist, std::int64_t n, PrivacyBudget alpha,
    std::int64_t a_max = -1,
    const BoundConstants& c = BoundConstants::defaults()) {
  const double nas = double(n) * alpha.alpha * alpha.alpha;
  if (a_max < 0) {
    // Default: stop once the tail is numerically negligible, where the
    // exponential factor is 1 to 12 digits (the "a -> infinity" term).
    a_max = dist.max_support();
    for (const auto& atom : dist.atoms()) {
      if (dist.survival_gt(atom.first) < 1e-8) {
        a_max = atom.first;
        break;
      }
    }
  }

  const auto term = [&](std::int64_t a) {
    const double tail = dist.survival_gt(a);
    const double moment = dist.sqrt_moment_below(a);
    const double denom = std::max(nas * moment * moment, 1.0);
    return c.c1 * std::exp(-c.c2 * nas * tail * tail) / denom;
  };

  double best = term(0);
  std::int64_t best_a = 0;
  const auto consider = [&](std::int64_t a) {
    const double v = term(a);
    if (v > best) {
      best = v;
      best_a = a;
    }
  };
  for (const auto& atom : dist.atoms()) {
    if (atom.first > a_max) break;
    consider(atom.first);
  }
  consider(a_max);
  return {best, best_a};
}

struct UpperBoundResult {
  double value = 4.0;
  std::int64_t m_tilde = 1;
  int solver_iterations = 0;
};

// Risk upper bound at m_tilde = solve_m_tilde, capped at 4.
inline UpperBoundResult upper_bound(
    const SizeDistribution& dist, std::int64_t n, PrivacyBudget alpha,
    const BoundConstants& c = BoundConstants::defaults()) {
  const double nas = double(n) * alpha.alpha * alpha.alpha;
  const MTildeResult sol = solve_m_tilde(dist, n, alpha, c);
  const double moment = dist.sqrt_moment_capped(sol.m_tilde);
  const double arg = std::max(std::sqrt(double(sol.m_tilde) * nas), 1.0);
  UpperBoundResult r;
  r.m_tilde = sol.m_tilde;
  r.solver_iterations = sol.iterations;
  r.value =
      std::min(c.c3 * std::log(c.c4 * arg) / (nas * moment * moment), 4.0);
  return r;
}

struct RiskBounds {
  double lower = 0.0;
  std::int64_t lower_argmax_a = 0;
  double upper = 4.0;
  std::int64_t m_tilde = 1;
  double n_alpha_sq = 0.0;
};

inline RiskBounds evaluate_bounds(
    const SizeDistribution& dist, std::int64_t n, PrivacyBudget alpha,
    const BoundConstants& c = BoundConstants::defaults()) {
  RiskBounds b;
  b.n_alpha_sq = double(n) * alpha.alpha * alpha.alpha;
  const auto lb = lower_bound(dist, n, alpha, -1, c);
  b.lower = lb.first;
  b.lower_argmax_a = lb.second;
  const auto ub = upper_bound(dist, n, alpha, c);
  b.upper = ub.value;
  b.m_tilde = ub.m_tilde;
  return b;
}

enum class ToyRegime { kItemLevel, kIntermediate, kUserLevel };

inline std::string to_string(ToyRegime r) {
  switch (r) {
    case ToyRegime::kItemLevel: return "item_level";
    case ToyRegime::kIntermediate: return "intermediate";
    case ToyRegime::kUserLevel: return "user_level";
  }
  return "?";
}

struct ToyRegimeResult {
  ToyRegime regime = ToyRegime::kItemLevel;
  std::int64_t a = 1;    // effective dataset size of the regime
  double value = 0.0;    // displayed rate expression with explicit constants
};

// Piecewise regimes of the two-spike law M(1) = 1 - rho, M(m) = rho.
inline ToyRegimeResult toy_regimes(
    double rho, std::int64_t m, std::int64_t n, PrivacyBudget alpha,
    const BoundConstants& c = BoundConstants::defaults()) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("toy_regimes: rho must be in [0, 1]");
  if (m < 2) throw std::invalid_argument("toy_regimes: m must be >= 2");
  const double nas = double(n) * alpha.alpha * alpha.alpha;
  if (nas < 1.0)
    throw std::domain_error(
        "toy_regimes: requires n alpha^2 >= 1 (below it the trivial bound 4 "
        "applies)");

  const double rho_sq = rho * rho;
  const auto log_term = [&](std::int64_t a) {
    return std::log(c.c4 * std::max(double(a) * nas, 1.0));
  };
  const auto mixture = [&](std::int64_t a) {
    const double mix = (1.0 - rho) + rho * std::sqrt(double(a));
    return c.c3 * log_term(a) / (nas * mix * mix);
  };

  ToyRegimeResult r;
  if (rho_sq >= phi(m, nas, c)) {
    r.regime = ToyRegime::kUserLevel;
    r.a = m;
    r.value = mixture(m);
    return r;
  }
  // Largest a in {2, ..., m-1} with phi(a) <= rho^2; phi is non-decreasing.
  std::int64_t a_star = 0;
  for (std::int64_t lo = 2, hi = m - 1; lo <= hi;) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (phi(mid, nas, c) <= rho_sq) {
      a_star = mid;
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  if (a_star == 0) {
    r.regime = ToyRegime::kItemLevel;
    r.a = 1;
    r.value = c.c3 * log_term(1) / nas;
    return r;
  }
  r.regime = ToyRegime::kIntermediate;
  r.a = a_star;
  r.value = std::min(mixture(a_star),
                     std::exp(-rho_sq * nas / c.c5) / rho_sq);
  return r;
}

struct TwoPointDivergences {
  double tv = 0.0;
  double kl = 0.0;
};

// TV and KL between the two-point laws with means -delta and +delta
// (P(1) = (1 -+ delta)/2). Valid for delta in [0, 1/2].
inline TwoPointDivergences two_point_divergences(double delta) {
  if (!(delta >= 0.0 && delta <= 0.5))
    throw std::invalid_argument(
        "two_point_divergences: delta must be in [0, 1/2]");
  TwoPointDivergences d;
  d.tv = delta;
  d.kl = (delta == 0.0)
             ? 0.0
             : delta * std::log((1.0 + delta) / (1.0 - delta));
  return d;
}

}  // namespace dame

#endif  // DAME_BOUNDS_HPP
