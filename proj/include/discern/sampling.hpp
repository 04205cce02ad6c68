// Copyright 2026 The Discern Authors.
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

/**
 * @file
 * Sampling machinery: outcome distributions of an observable in a
 * state, the uncertainty-weighted threshold identification rule, the
 * concentration bound 1/(n delta^2), and seeded Monte Carlo trials of
 * the misidentification probability.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "discern/discrimination.hpp"
#include "discern/linalg.hpp"

namespace discern {

// ---------------------------------------------------------------------------
// Deterministic RNG streams
// ---------------------------------------------------------------------------

/// splitmix64 step; also used as a finalizing mixer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// Small counter-based generator. Streams are derived from a master
/// seed and a stream index, so trial i always consumes the same draws
/// no matter in which order (or on how many threads) trials execute.
/// Identical across platforms: only 64-bit integer arithmetic and one
/// exact float scaling are involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Stream for (master seed, index): decorrelates the linearly related
  /// splitmix states by hashing both coordinates.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(seed ^ mix64(index + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (used for seeded test generators).
  double gaussian() {
    double u1 = uniform(), u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::acos(-1.0) * u2);
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Outcome distributions
// ---------------------------------------------------------------------------

/// Discrete probability measure on the real line: the distribution of
/// measured values of an observable in a fixed state, or any test
/// distribution with finitely many atoms.
struct OutcomeDistribution {
  std::vector<double> values;
  std::vector<double> probs;
  double mean = 0.0;
  double variance = 0.0;

  double sigma() const { return std::sqrt(variance); }
};

/// Builds a distribution from atoms, validating normalization within
/// 1e-10 and clamping tiny negative weights (>= -1e-12) to zero.
inline OutcomeDistribution make_distribution(std::vector<double> values,
                                             std::vector<double> probs) {
  if (values.size() != probs.size() || values.empty())
    throw std::invalid_argument("make_distribution: values/probs size mismatch");
  double total = 0.0;
  for (double& p : probs) {
    if (p < -1e-12) throw std::invalid_argument("make_distribution: negative probability");
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("make_distribution: probabilities do not sum to 1");
  OutcomeDistribution d{std::move(values), std::move(probs), 0.0, 0.0};
  double m = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    m += d.probs[i] * d.values[i];
    m2 += d.probs[i] * d.values[i] * d.values[i];
  }
  d.mean = m;
  d.variance = std::max(m2 - m * m, 0.0);
  return d;
}

/// Distribution of measurement outcomes of A in the pure state psi:
/// support on the (merged) spectrum, weights <psi, P_a psi>.
inline OutcomeDistribution outcome_distribution(const Hermitian& a, const Vector& psi) {
  require_unit(psi, "outcome_distribution");
  if (a.dim() != psi.dim())
    throw std::invalid_argument("outcome_distribution: dimension mismatch");
  const SpectralDecomposition dec = eigendecompose(a);
  std::vector<double> probs(dec.eigenvalues.size());
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    double p = std::real(inner(psi, dec.projectors[k].apply(psi)));
    probs[k] = std::clamp(p, 0.0, 1.0);
  }
  return make_distribution(dec.eigenvalues, std::move(probs));
}

// ---------------------------------------------------------------------------
// Threshold rule
// ---------------------------------------------------------------------------

/// The split point X0 of [X1, X2] weighted by the opposite
/// uncertainties, and the discernability of the two distributions:
///   X0 = (sigma2 X1 + sigma1 X2) / (sigma1 + sigma2),
///   delta = (X2 - X1) / (sigma1 + sigma2).
struct ThresholdRule {
  double x1 = 0.0;
  double x2 = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double x0 = 0.0;
  double delta = 0.0;
  bool swapped = false;  // true when the inputs arrived with mean1 > mean2
};

inline ThresholdRule threshold(const OutcomeDistribution& d1, const OutcomeDistribution& d2) {
  ThresholdRule r;
  r.swapped = d1.mean > d2.mean;
  const OutcomeDistribution& lo = r.swapped ? d2 : d1;
  const OutcomeDistribution& hi = r.swapped ? d1 : d2;
  r.x1 = lo.mean;
  r.x2 = hi.mean;
  r.sigma1 = lo.sigma();
  r.sigma2 = hi.sigma();
  if (std::abs(r.x2 - r.x1) <= 1e-12)
    throw std::invalid_argument("threshold: indistinguishable by mean");
  const double ssum = r.sigma1 + r.sigma2;
  if (ssum <= 1e-12) throw std::invalid_argument("threshold: degenerate (zero total deviation)");
  r.x0 = (r.sigma2 * r.x1 + r.sigma1 * r.x2) / ssum;
  r.delta = (r.x2 - r.x1) / ssum;
  return r;
}

/// Misidentification bound 1/(n delta^2).
inline double chebyshev_bound(double delta, std::uint64_t n) {
  if (!(delta > 0.0)) throw std::invalid_argument("chebyshev_bound: delta must be positive");
  if (n == 0) throw std::invalid_argument("chebyshev_bound: n must be positive");
  return 1.0 / (static_cast<double>(n) * delta * delta);
}

/// Identification from an n-sample mean: label 1 below X0, label 2 at
/// or above it. The tie at X0 goes to label 2 by convention (it has
/// measure zero for generic spectra).
inline int identify(double mean, const ThresholdRule& rule) { return mean < rule.x0 ? 1 : 2; }

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// One draw by inverse CDF over the atom list.
inline double draw(const OutcomeDistribution& dist, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < dist.values.size(); ++i) {
    acc += dist.probs[i];
    if (u < acc) return dist.values[i];
  }
  return dist.values.back();
}

/// Mean of n independent draws.
inline double sample_mean(const OutcomeDistribution& dist, std::uint64_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_mean: n must be positive");
  double s = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) s += draw(dist, rng);
  return s / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Monte Carlo experiment
// ---------------------------------------------------------------------------

/// Result of a repeated identification experiment.
struct TrialReport {
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  double p1 = 0.5;
  std::uint64_t errors = 0;
  double empirical_error = 0.0;
  double cheb_bound = 0.0;
  std::uint64_t seed = 0;
};

/// Runs `trials` independent identification experiments: each draws the
/// true state with prior p1, samples n outcomes of A in that state, and
/// identifies the state from the sample mean via the threshold rule.
///
/// Trial t consumes only the stream derived from (seed, t), so the
/// report is bit-identical for a fixed seed regardless of execution
/// order or parallelism.
///
/// The perfectly-distinguishable corner (both outcome distributions
/// deterministic with distinct values, i.e. orthogonal states measured
/// in their eigenbasis) bypasses the threshold construction: the split
/// point is the midpoint, the discernability is infinite and the bound
/// is 0.
inline TrialReport run_experiment(const Hermitian& a, const StatePair& pair, double p1,
                                  std::uint64_t n, std::uint64_t trials, std::uint64_t seed) {
  if (!(p1 > 0.0 && p1 < 1.0)) throw std::invalid_argument("run_experiment: p1 must be in (0,1)");
  if (n == 0 || trials == 0)
    throw std::invalid_argument("run_experiment: n and trials must be positive");

  const DiscriminationStats st = discernability(a, pair);
  if (st.status == DeltaStatus::undefined)
    throw std::invalid_argument("run_experiment: undefined discernability (common eigenvectors)");

  const OutcomeDistribution dist_v = outcome_distribution(a, pair.v);
  const OutcomeDistribution dist_w = outcome_distribution(a, pair.w);

  ThresholdRule rule;
  if (st.status == DeltaStatus::infinite) {
    rule.swapped = dist_v.mean > dist_w.mean;
    rule.x1 = std::min(dist_v.mean, dist_w.mean);
    rule.x2 = std::max(dist_v.mean, dist_w.mean);
    rule.x0 = 0.5 * (rule.x1 + rule.x2);
    rule.delta = std::numeric_limits<double>::infinity();
  } else {
    rule = threshold(dist_v, dist_w);
  }

  TrialReport rep;
  rep.n = n;
  rep.trials = trials;
  rep.p1 = p1;
  rep.seed = seed;
  rep.cheb_bound = st.status == DeltaStatus::infinite ? 0.0 : chebyshev_bound(rule.delta, n);

  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, t);
    const bool true_is_v = rng.uniform() < p1;
    const double m = sample_mean(true_is_v ? dist_v : dist_w, n, rng);
    const int label = identify(m, rule);
    // label 1 names the lower-mean distribution; map back to v/w.
    const bool predicted_v = rule.swapped ? (label == 2) : (label == 1);
    if (predicted_v != true_is_v) ++rep.errors;
  }
  rep.empirical_error = static_cast<double>(rep.errors) / static_cast<double>(trials);
  return rep;
}

// ---------------------------------------------------------------------------
// Concentration checks
// ---------------------------------------------------------------------------

struct TailEstimate {
  double empirical_tail = 0.0;
  double bound = 0.0;
};

/// Monte Carlo estimate of P(|m_n - mean| >= t) paired with the
/// concentration bound (1/n)(sigma/t)^2.
inline TailEstimate chebyshev_check(const OutcomeDistribution& dist, double t, std::uint64_t n,
                                    std::uint64_t trials, std::uint64_t seed) {
  if (!(t > 0.0)) throw std::invalid_argument("chebyshev_check: t must be positive");
  if (n == 0 || trials == 0)
    throw std::invalid_argument("chebyshev_check: n and trials must be positive");
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < trials; ++k) {
    Rng rng = Rng::stream(seed, k);
    if (std::abs(sample_mean(dist, n, rng) - dist.mean) >= t) ++hits;
  }
  return {static_cast<double>(hits) / static_cast<double>(trials),
          dist.variance / (static_cast<double>(n) * t * t)};
}

/// Exact tail probability P(|m_n - mean| >= t) by exhaustive
/// enumeration of all |atoms|^n outcome strings. Cheap for the small
/// instances it is restricted to and free of sampling error, so it
/// anchors the statistical tests.
inline double exact_tail_probability(const OutcomeDistribution& dist, double t, unsigned n) {
  if (!(t > 0.0)) throw std::invalid_argument("exact_tail_probability: t must be positive");
  if (n == 0) throw std::invalid_argument("exact_tail_probability: n must be positive");
  const std::size_t k = dist.values.size();
  double strings = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (strings > 4.2e6)
    throw std::invalid_argument("exact_tail_probability: enumeration too large (> 4.2e6 strings)");

  double tail = 0.0;
  std::vector<unsigned> idx(n, 0);
  while (true) {
    double prob = 1.0, sum = 0.0;
    for (unsigned i = 0; i < n; ++i) {
      prob *= dist.probs[idx[i]];
      sum += dist.values[idx[i]];
    }
    if (std::abs(sum / n - dist.mean) >= t) tail += prob;
    unsigned pos = 0;
    while (pos < n && ++idx[pos] == k) idx[pos++] = 0;
    if (pos == n) break;
  }
  return tail;
}

}  // namespace discern
