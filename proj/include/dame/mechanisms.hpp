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

#ifndef DAME_MECHANISMS_HPP
#define DAME_MECHANISMS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dame/random.hpp"

namespace dame {

// Per-user local privacy budget.
struct PrivacyBudget {
  double alpha;

  explicit PrivacyBudget(double a) : alpha(a) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  }

  // The analysis assumes alpha <= 22/35; larger budgets are allowed but
  // the bound formulas are not guaranteed outside that range.
  bool strict_regime() const { return alpha <= 22.0 / 35.0; }
};

// Keep-probability of the randomized response mechanism,
// pi = e^{alpha/6} / (1 + e^{alpha/6}).
struct FlipProbability {
  double pi;

  explicit FlipProbability(double p) : pi(p) {
    if (!(pi > 0.5 && pi <= 1.0))
      throw std::invalid_argument("keep-probability must be in (1/2, 1]");
  }

  static FlipProbability from_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    const double e = std::exp(alpha / 6.0);
    return FlipProbability(e / (1.0 + e));
  }
};

using BitVector = std::vector<std::uint8_t>;

// Randomized response on binary vectors: each coordinate is kept with
// probability pi and flipped otherwise. Inputs with more than 3 ones are
// rejected at the boundary; the privacy accounting assumes two inputs
// differ in at most 6 coordinates.
inline BitVector randomized_response(const BitVector& bits,
                                     FlipProbability pi, Rng& rng) {
  std::size_t ones = 0;
  for (const auto b : bits) ones += (b != 0);
  if (ones > 3)
    throw std::invalid_argument(
        "randomized_response: vote vectors must have at most 3 ones");
  BitVector out(bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j) {
    const bool keep = uniform_unit(rng) < pi.pi;
    out[j] = keep ? bits[j] : std::uint8_t(1 - bits[j]);
  }
  return out;
}

// Standard Laplace scaled by `scale`, via inverse CDF from a single
// uniform draw.
inline double laplace_noise(double scale, Rng& rng) {
  if (!(scale > 0.0)) throw std::invalid_argument("laplace scale must be > 0");
  const double u = uniform_unit(rng) - 0.5;
  const double sign = (u < 0.0) ? 1.0 : -1.0;
  return scale * sign * std::log1p(-2.0 * std::abs(u));
}

// Exact worst-case log-likelihood ratio of the randomized response
// mechanism over 3-hot inputs: two such vectors differ in at most 6
// coordinates, each contributing ln(pi / (1 - pi)).
inline double audit_rr_privacy(FlipProbability pi) {
  return 6.0 * std::log(pi.pi / (1.0 - pi.pi));
}

// Exact sup of the Laplace log-density ratio for inputs differing by at
// most `sensitivity`.
inline double audit_laplace_privacy(double scale, double sensitivity) {
  if (!(scale > 0.0) || !(sensitivity > 0.0))
    throw std::invalid_argument("scale and sensitivity must be > 0");
  return sensitivity / scale;
}

}  // namespace dame

#endif  // DAME_MECHANISMS_HPP
