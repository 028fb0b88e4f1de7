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

#ifndef DAME_RANDOM_HPP
#define DAME_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace dame {

// All sampling paths take a caller-owned generator so that replay and
// parallel schedules stay deterministic.
using Rng = std::mt19937_64;

// splitmix64 finaliser, used to derive independent streams from
// (seed, trial, user) tuples.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ b);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(mix64(a, b) ^ c);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

inline Rng make_rng(std::uint64_t seed, std::uint64_t a) {
  return Rng(mix64(seed, a));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return Rng(mix64(seed, a, b));
}

// Uniform draw in the open interval (0, 1); never returns an endpoint.
inline double uniform_unit(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline bool bernoulli(double p, Rng& rng) { return uniform_unit(rng) < p; }

}  // namespace dame

#endif  // DAME_RANDOM_HPP
