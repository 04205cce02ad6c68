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
 * Derivative-free verification that tan(theta) is the true maximum of
 * the discernability and that the minimum-error formula is the true
 * maximum of the detection probability: multistart Nelder-Mead over
 * Hermitian matrices, and grid search with local refinement over
 * rank-one projectors.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "discern/discrimination.hpp"
#include "discern/linalg.hpp"
#include "discern/sampling.hpp"

namespace discern {

// ---------------------------------------------------------------------------
// Hermitian parametrization
// ---------------------------------------------------------------------------

/// Real coordinates of a dim x dim Hermitian matrix: the dim diagonal
/// entries followed by (Re, Im) of the strict upper triangle in row
/// order. Bijective with the Hermitian matrices; an upper entry is
/// re + i*im.
struct HermitianParams {
  std::size_t dim = 0;
  std::vector<double> params;  // length dim * dim
};

inline Hermitian to_hermitian(const HermitianParams& p) {
  const std::size_t d = p.dim;
  if (p.params.size() != d * d)
    throw std::invalid_argument("to_hermitian: parameter count must equal dim^2");
  Hermitian a(d);
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) a(i, i) = p.params[k++];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      const double re = p.params[k++];
      const double im = p.params[k++];
      a(i, j) = cplx(re, im);
      a(j, i) = cplx(re, -im);
    }
  return a;
}

inline HermitianParams from_hermitian(const Hermitian& a) {
  const std::size_t d = a.dim();
  HermitianParams p{d, std::vector<double>(d * d)};
  std::size_t k = 0;
  for (std::size_t i = 0; i < d; ++i) p.params[k++] = a(i, i).real();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      p.params[k++] = a(i, j).real();
      p.params[k++] = a(i, j).imag();
    }
  return p;
}

// ---------------------------------------------------------------------------
// Nelder-Mead
// ---------------------------------------------------------------------------

namespace detail {

/// Plain Nelder-Mead maximizer (works on -f internally). Deterministic:
/// no randomness beyond the supplied start simplex. Returns the best
/// vertex found; `evals` accumulates objective calls.
inline std::pair<std::vector<double>, double> nelder_mead_max(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
    double step, std::size_t max_evals, double ftol, std::size_t& evals) {
  const std::size_t n = start.size();
  const double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;

  std::vector<std::vector<double>> x(n + 1, start);
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) {
    fx[i] = f(x[i]);
    ++evals;
  }

  auto order = [&] {
    // insertion sort: simplex is tiny and mostly ordered
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = i; j > 0 && fx[j] > fx[j - 1]; --j) {
        std::swap(fx[j], fx[j - 1]);
        std::swap(x[j], x[j - 1]);
      }
  };
  order();

  while (evals < max_evals) {
    if (std::abs(fx[0] - fx[n]) <= ftol * (std::abs(fx[0]) + ftol)) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += x[i][j] / static_cast<double>(n);

    auto at = [&](double coef) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (x[n][j] - centroid[j]);
      return p;
    };

    std::vector<double> xr = at(-reflect);
    double fr = f(xr);
    ++evals;
    if (fr > fx[0]) {
      std::vector<double> xe = at(-expand);
      double fe = f(xe);
      ++evals;
      if (fe > fr) {
        x[n] = std::move(xe);
        fx[n] = fe;
      } else {
        x[n] = std::move(xr);
        fx[n] = fr;
      }
    } else if (fr > fx[n - 1]) {
      x[n] = std::move(xr);
      fx[n] = fr;
    } else {
      const bool outside = fr > fx[n];
      std::vector<double> xc = at(outside ? -contract : contract);
      double fc = f(xc);
      ++evals;
      if (fc > (outside ? fr : fx[n])) {
        x[n] = std::move(xc);
        fx[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) x[i][j] = x[0][j] + shrink * (x[i][j] - x[0][j]);
          fx[i] = f(x[i]);
          ++evals;
        }
      }
    }
    order();
  }
  return {x[0], fx[0]};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Discernability maximization
// ---------------------------------------------------------------------------

struct SearchConfig {
  int restarts = 16;
  std::size_t max_evals = 20000;  // per restart
  double init_step = 0.5;        // initial simplex edge
  double seed_noise = 0.05;      // perturbation of family-seeded restarts
  double target_tol = 1e-4;      // convergence = within this of tan(theta)
  std::uint64_t seed = 1;
};

struct SearchResult {
  double best_value = 0.0;
  Hermitian best_operator{1};
  int restarts = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

/// Scale-normalized discernability objective. Undefined or nearly
/// degenerate points score -infinity: the 0/0 limit amplifies rounding
/// noise far beyond the soundness tolerance, so the region below a
/// relative uncertainty floor of 1e-5 is excluded rather than clamped.
/// Every admissible evaluation is asserted against the master
/// inequality: delta <= tan(theta) + 1e-9.
inline double delta_objective(const std::vector<double>& params, std::size_t dim,
                              const StatePair& pair, double tan_theta) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  Hermitian a = to_hermitian({dim, params});
  const double s = a.frobenius_norm();
  if (s < 1e-12) return neg_inf;
  a *= 1.0 / s;
  const double sv = uncertainty(a, pair.v);
  const double sw = uncertainty(a, pair.w);
  if (sv + sw < 1e-5) return neg_inf;
  const double delta =
      std::abs(expectation(a, pair.w) - expectation(a, pair.v)) / (sv + sw);
  if (delta > tan_theta + 1e-9)
    throw invariant_violation("maximize_delta: evaluation exceeded tan(theta) + 1e-9");
  return delta;
}

}  // namespace detail

/// Multistart derivative-free search for max_A delta_A over all
/// Hermitian A of dimension `dim`. Half the restarts start from random
/// Gaussian matrices, half from noise-perturbed members of the
/// saturating family, verifying both discovery of the optimum and its
/// stability. Deterministic for a fixed config; ties between restarts
/// keep the earliest.
inline SearchResult maximize_delta(const StatePair& pair, std::size_t dim,
                                   const SearchConfig& config = {}) {
  if (pair.orthogonal)
    throw std::domain_error("maximize_delta: bound infinite for orthogonal states");
  if (dim < pair.dim())
    throw std::invalid_argument("maximize_delta: dim smaller than the pair's dimension");

  // Embed the pair in the search dimension if needed.
  StatePair p = pair;
  if (dim > pair.dim()) {
    Vector v(dim), w(dim);
    for (std::size_t i = 0; i < pair.dim(); ++i) {
      v[i] = pair.v[i];
      w[i] = pair.w[i];
    }
    p = make_state_pair(v, w);
  }

  const double tan_theta = std::tan(p.theta);
  const std::size_t nparams = dim * dim;
  auto objective = [&](const std::vector<double>& q) {
    return detail::delta_objective(q, dim, p, tan_theta);
  };

  const double pi = std::acos(-1.0);
  SearchResult best;
  best.best_value = -std::numeric_limits<double>::infinity();
  best.restarts = config.restarts;

  for (int r = 0; r < config.restarts; ++r) {
    Rng rng = Rng::stream(config.seed, static_cast<std::uint64_t>(r));
    std::vector<double> start(nparams);
    if (r % 2 == 0) {
      for (double& q : start) q = rng.gaussian();
    } else {
      const double alpha = p.theta + rng.uniform() * (pi - 2.0 * p.theta);
      const Hermitian member = saturating_observable(p, alpha);
      start = from_hermitian(member).params;
      for (double& q : start) q += config.seed_noise * rng.gaussian();
    }
    auto [xbest, fbest] = detail::nelder_mead_max(objective, std::move(start), config.init_step,
                                                  config.max_evals, 1e-13, best.evaluations);
    if (fbest > best.best_value) {
      best.best_value = fbest;
      Hermitian a = to_hermitian({dim, xbest});
      a *= 1.0 / a.frobenius_norm();
      best.best_operator = std::move(a);
    }
  }
  if (!std::isfinite(best.best_value))
    throw invariant_violation("maximize_delta: no admissible evaluation in any restart");
  // Report the objective value at the returned operator (identical to
  // the tracked maximum by construction; recomputed for the contract).
  best.best_value = detail::delta_objective(from_hermitian(best.best_operator).params, dim, p,
                                            tan_theta);
  best.converged = best.best_value >= tan_theta - config.target_tol;
  return best;
}

// ---------------------------------------------------------------------------
// Detection-probability maximization
// ---------------------------------------------------------------------------

namespace detail {

/// Detection probability of the projective two-outcome measurement
/// {P_u, 1 - P_u} with u = cos(beta) e1 + e^{i phi} sin(beta) e2,
/// evaluated in the 2-dimensional restriction spanned by the pair.
inline double detection_objective(double beta, double phi, double half_theta, double p1) {
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double ch = std::cos(half_theta), sh = std::sin(half_theta);
  // v = (ch, -sh), w = (ch, sh) in the (e1, e2) basis.
  const double cross = 2.0 * cb * sb * ch * sh * std::cos(phi);
  const double diag = cb * cb * ch * ch + sb * sb * sh * sh;
  const double pv = diag - cross;  // |<u,v>|^2
  const double pw = diag + cross;  // |<u,w>|^2
  return p1 * pv + (1.0 - p1) * (1.0 - pw);
}

}  // namespace detail

/// Maximum of W(D) = p1 <v,P v> + p2 <w,(1-P) w> over rank-one
/// projectors P in the two-dimensional subspace spanned by the pair,
/// by grid search plus Nelder-Mead refinement. Matches
/// min_error_prob(theta, p1) within 1e-4 for reasonable resolutions.
inline double maximize_detection(const StatePair& pair, double p1,
                                 std::size_t grid_resolution = 64) {
  if (!(p1 > 0.0 && p1 < 1.0))
    throw std::invalid_argument("maximize_detection: p1 must be in (0,1)");
  if (grid_resolution < 8)
    throw std::invalid_argument("maximize_detection: grid resolution too small");
  const double pi = std::acos(-1.0);
  const double half_theta = pair.theta / 2.0;

  double best = -1.0, best_beta = 0.0, best_phi = 0.0;
  for (std::size_t i = 0; i <= grid_resolution; ++i) {
    const double beta = pi * static_cast<double>(i) / static_cast<double>(grid_resolution);
    for (std::size_t j = 0; j < grid_resolution; ++j) {
      const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(grid_resolution);
      const double w = detail::detection_objective(beta, phi, half_theta, p1);
      if (w > best) {
        best = w;
        best_beta = beta;
        best_phi = phi;
      }
    }
  }
  std::size_t evals = 0;
  auto [x, fx] = detail::nelder_mead_max(
      [&](const std::vector<double>& q) {
        return detail::detection_objective(q[0], q[1], half_theta, p1);
      },
      {best_beta, best_phi}, pi / static_cast<double>(grid_resolution), 4000, 1e-15, evals);
  return std::max(best, fx);
}

}  // namespace discern
