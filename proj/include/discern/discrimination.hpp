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
 * Closed-form two-state discrimination quantities: the discernability
 * delta_A, Fleming's bound tan(theta), the quantum master inequality,
 * the saturation-condition checker, the family of bound-saturating
 * observables, and the single-shot reference formulas.
 */

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "discern/linalg.hpp"

namespace discern {

// ---------------------------------------------------------------------------
// Discernability
// ---------------------------------------------------------------------------

enum class DeltaStatus {
  finite,     // delta = |mean_w - mean_v| / (sigma_v + sigma_w)
  infinite,   // distinct means, zero uncertainties: orthogonal eigenstates
  undefined,  // equal means, zero uncertainties: common eigenvectors
};

/// First two moments of an observable in both states plus the
/// discernability they define.
struct DiscriminationStats {
  double mean_v = 0.0;
  double mean_w = 0.0;
  double sigma_v = 0.0;
  double sigma_w = 0.0;
  DeltaStatus status = DeltaStatus::undefined;
  double delta = 0.0;  // +infinity / quiet NaN mirror the status

  bool defined() const { return status != DeltaStatus::undefined; }
};

/// delta_A = |<A>_w - <A>_v| / (Delta_v A + Delta_w A).
///
/// When both uncertainties vanish the ratio degenerates: equal means
/// give the tagged `undefined` value (the states are common
/// eigenvectors); distinct means are only possible for orthogonal
/// states, reported as infinite discernability. Distinct means with
/// vanishing uncertainties for theta < pi/2 cannot happen analytically
/// and are surfaced as numerical corruption.
inline DiscriminationStats discernability(const Hermitian& a, const StatePair& pair) {
  if (a.dim() != pair.dim()) throw std::invalid_argument("discernability: dimension mismatch");
  DiscriminationStats st;
  st.mean_v = expectation(a, pair.v);
  st.mean_w = expectation(a, pair.w);
  st.sigma_v = uncertainty(a, pair.v);
  st.sigma_w = uncertainty(a, pair.w);
  const double ssum = st.sigma_v + st.sigma_w;
  const double diff = std::abs(st.mean_w - st.mean_v);
  if (ssum > tol::degenerate) {
    st.status = DeltaStatus::finite;
    st.delta = diff / ssum;
  } else if (diff <= tol::degenerate * std::max(1.0, std::abs(st.mean_v))) {
    st.status = DeltaStatus::undefined;
    st.delta = std::numeric_limits<double>::quiet_NaN();
  } else if (pair.orthogonal) {
    st.status = DeltaStatus::infinite;
    st.delta = std::numeric_limits<double>::infinity();
  } else {
    throw invariant_violation(
        "discernability: vanishing uncertainties with distinct means for non-orthogonal states");
  }
  return st;
}

/// tan(theta): the least upper bound of delta_A over all observables.
inline double fleming_bound(const StatePair& pair) {
  if (pair.orthogonal)
    throw std::domain_error("fleming_bound: bound infinite for orthogonal states");
  return std::tan(pair.theta);
}

// ---------------------------------------------------------------------------
// Quantum master inequality
// ---------------------------------------------------------------------------

/// Gap of the master inequality for raw unit vectors:
///   (Delta_v A + Delta_w A) * sqrt(1 - |<w,v>|^2) - |<A>_w - <A>_v| * |<w,v>|.
/// Nonnegative for every Hermitian A; parallel vectors give 0 for any A.
inline double qmie_gap(const Hermitian& a, const Vector& v, const Vector& w) {
  if (a.dim() != v.dim() || v.dim() != w.dim())
    throw std::invalid_argument("qmie_gap: dimension mismatch");
  const double c = std::min(std::abs(inner(w, v)), 1.0);
  const double s = std::sqrt(1.0 - c * c);
  const double lhs = std::abs(expectation(a, w) - expectation(a, v)) * c;
  const double rhs = (uncertainty(a, v) + uncertainty(a, w)) * s;
  const double gap = rhs - lhs;
  if (gap < -1e-10)
    throw invariant_violation("qmie_gap: master inequality violated beyond tolerance");
  return gap;
}

inline double check_qmie(const Hermitian& a, const StatePair& pair) {
  return qmie_gap(a, pair.v, pair.w);
}

// ---------------------------------------------------------------------------
// The saturating family
// ---------------------------------------------------------------------------

struct Onb {
  Vector e1;
  Vector e2;
};

/// Orthonormal basis of span{v,w}:
///   e1 = (v + w) / (2 cos(theta/2)),  e2 = (w - v) / (2 sin(theta/2)),
/// so that v = cos(theta/2) e1 - sin(theta/2) e2 and
///         w = cos(theta/2) e1 + sin(theta/2) e2.
inline Onb build_onb(const StatePair& pair) {
  const double ch = std::cos(pair.theta / 2.0);
  const double sh = std::sin(pair.theta / 2.0);
  Vector e1 = pair.v + pair.w;
  e1 *= cplx(1.0 / (2.0 * ch), 0.0);
  Vector e2 = pair.w - pair.v;
  e2 *= cplx(1.0 / (2.0 * sh), 0.0);
  return {std::move(e1), std::move(e2)};
}

/// Parameters of one member of the bound-saturating family, together
/// with the basis it is expressed in.
struct SaturatingFamilySpec {
  double alpha = 0.0;
  double lambda_scale = 1.0;
  double mu_shift = 0.0;
  Onb basis;
};

inline SaturatingFamilySpec family_spec(const StatePair& pair, double alpha,
                                        double lambda_scale = 1.0, double mu_shift = 0.0,
                                        bool allow_outside_range = false) {
  const double pi = std::acos(-1.0);
  if (!allow_outside_range) {
    // Slack of 1e-9 admits decimal truncations of the boundary values;
    // admitted angles are clamped onto the exact range.
    if (alpha < pair.theta - 1e-9 || alpha > pi - pair.theta + 1e-9)
      throw std::invalid_argument("saturating_observable: alpha outside saturating range");
    alpha = std::clamp(alpha, pair.theta, pi - pair.theta);
  }
  if (lambda_scale == 0.0)
    throw std::invalid_argument("saturating_observable: lambda_scale must be nonzero");
  return {alpha, lambda_scale, mu_shift, build_onb(pair)};
}

/// Observable saturating Fleming's bound:
///   lambda * [cos(alpha)(E11 - E22) + sin(alpha)(E12 + E21)] + mu * Id,
/// with E_ij = |e_i><e_j| and alpha in [theta, pi - theta]. The operator
/// acts as zero on the orthogonal complement of span{v,w} before the mu
/// shift; its restriction to the span is traceless with determinant -1
/// (spectrum {+1,-1}) before scaling.
///
/// `allow_outside_range` bypasses the alpha-range guard so sweeps can
/// demonstrate that members outside [theta, pi - theta] fall short of
/// the bound; it does not change the construction.
inline Hermitian saturating_observable(const StatePair& pair, double alpha,
                                       double lambda_scale = 1.0, double mu_shift = 0.0,
                                       bool allow_outside_range = false) {
  const SaturatingFamilySpec fs =
      family_spec(pair, alpha, lambda_scale, mu_shift, allow_outside_range);
  Hermitian a = Hermitian::outer(fs.basis.e1);
  a -= Hermitian::outer(fs.basis.e2);
  a *= std::cos(fs.alpha);
  Hermitian x = Hermitian::sym_outer(fs.basis.e1, fs.basis.e2);
  x *= std::sin(fs.alpha);
  a += x;
  a *= lambda_scale;
  if (mu_shift != 0.0) {
    Hermitian id = Hermitian::identity(pair.dim());
    id *= mu_shift;
    a += id;
  }
  return a;
}

/// The alpha = pi/2 member, (|w><w| - |v><v|) / sin(theta): among all
/// maximizers of delta_A it also maximizes the difference of
/// expectation values.
inline Hermitian simple_optimal(const StatePair& pair) {
  if (pair.orthogonal)
    throw std::domain_error("simple_optimal: undefined for orthogonal states");
  Hermitian a = Hermitian::outer(pair.w);
  a -= Hermitian::outer(pair.v);
  a *= 1.0 / std::sin(pair.theta);
  return a;
}

// ---------------------------------------------------------------------------
// Saturation conditions
// ---------------------------------------------------------------------------

/// Diagnosis of the two saturation conditions: (i) A stabilizes
/// span{v,w}; (ii) <w,Av> = lambda <w,v> with lambda real inside the
/// closed interval bounded by the two expectation values. Residuals are
/// relative to the shift-invariant operator scale ||A - (tr A / d) Id||.
struct SaturationReport {
  bool stabilizes_subspace = false;
  double subspace_residual = 0.0;
  cplx lambda{0.0, 0.0};
  double lambda_imag_residual = 0.0;
  bool lambda_in_hull = false;
  bool saturated = false;
  double qmie_gap = 0.0;
  bool orthogonal_case = false;
  double tolerance = 0.0;
};

/// Checks the saturation conditions for a nontrivial (A, pair):
/// Delta_v A + Delta_w A must exceed tol (relative to the operator
/// scale). For theta < pi/2, `saturated` holds exactly when
/// delta_A = tan(theta) up to tolerance. Orthogonal pairs are reported
/// separately: the nontrivial orthogonal case never saturates, and the
/// lambda quotient is undefined there (NaN).
inline SaturationReport check_saturation(const Hermitian& a, const StatePair& pair,
                                         double tolerance = 1e-9) {
  if (a.dim() != pair.dim()) throw std::invalid_argument("check_saturation: dimension mismatch");
  SaturationReport rep;
  rep.tolerance = tolerance;
  rep.orthogonal_case = pair.orthogonal;

  const std::size_t d = a.dim();
  cplx tr = 0.0;
  for (std::size_t i = 0; i < d; ++i) tr += a(i, i);
  Hermitian a0 = a;
  Hermitian id = Hermitian::identity(d);
  id *= tr.real() / static_cast<double>(d);
  a0 -= id;
  const double scale = std::max(a0.frobenius_norm(), 1e-300);

  const double sv = uncertainty(a, pair.v);
  const double sw = uncertainty(a, pair.w);
  // The uncertainty sum is compared against the full operator norm:
  // an operator numerically proportional to the identity is trivial
  // even though its traceless part vanishes.
  if (sv + sw <= tolerance * std::max(scale, a.frobenius_norm()))
    throw std::invalid_argument(
        "check_saturation: trivial case (both states eigenvectors with a common eigenvalue)");

  const Onb onb = build_onb(pair);
  const Vector av = a.apply(pair.v);
  const Vector aw = a.apply(pair.w);
  double res = 0.0;
  for (const Vector* x : {&av, &aw}) {
    Vector r = *x;
    r -= inner(onb.e1, *x) * onb.e1;
    r -= inner(onb.e2, *x) * onb.e2;
    res = std::max(res, norm(r));
  }
  rep.subspace_residual = res / scale;
  rep.stabilizes_subspace = rep.subspace_residual <= tolerance;

  const double mv = expectation(a, pair.v);
  const double mw = expectation(a, pair.w);
  const cplx w_av = inner(pair.w, av);

  if (pair.orthogonal) {
    // <w,v> = 0: the quotient is undefined; saturation would require
    // both uncertainties to vanish, excluded by the nontrivial guard.
    rep.lambda = cplx(std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN());
    rep.lambda_imag_residual = std::abs(w_av) / scale;
    rep.lambda_in_hull = false;
    rep.saturated = false;
  } else {
    rep.lambda = w_av / cplx(pair.cos_theta, 0.0);
    rep.lambda_imag_residual = std::abs(rep.lambda.imag()) / scale;
    const double slack = tolerance * scale;
    const double lo = std::min(mv, mw) - slack;
    const double hi = std::max(mv, mw) + slack;
    rep.lambda_in_hull = rep.lambda.real() >= lo && rep.lambda.real() <= hi;
    rep.saturated = rep.stabilizes_subspace && rep.lambda_imag_residual <= tolerance &&
                    rep.lambda_in_hull;
  }
  rep.qmie_gap = qmie_gap(a, pair.v, pair.w);
  return rep;
}

// ---------------------------------------------------------------------------
// Single-shot reference formulas
// ---------------------------------------------------------------------------

/// Maximal detection probability for minimum-error discrimination with
/// priors (p1, 1-p1), as a function of cos(theta):
///   (1 + sqrt(1 - 4 p1 p2 cos^2(theta))) / 2.
inline double min_error_prob_cos(double cos_theta, double p1) {
  if (!(p1 > 0.0 && p1 < 1.0)) throw std::invalid_argument("min_error_prob: p1 must be in (0,1)");
  if (cos_theta < 0.0 || cos_theta > 1.0)
    throw std::invalid_argument("min_error_prob: cos(theta) must lie in [0,1]");
  const double p2 = 1.0 - p1;
  return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * p1 * p2 * cos_theta * cos_theta));
}

inline double min_error_prob(double theta, double p1) {
  const double pi2 = std::acos(-1.0) / 2.0;
  if (theta < 0.0 || theta > pi2 + 1e-9)
    throw std::invalid_argument("min_error_prob: theta must lie in [0, pi/2]");
  return min_error_prob_cos(std::clamp(std::cos(theta), 0.0, 1.0), p1);
}

/// Branch of the unambiguous-discrimination maximum:
/// 1 if sqrt(min(p1,p2)/max(p1,p2)) >= cos(theta), else 2.
inline int unambiguous_regime_cos(double cos_theta, double p1) {
  const double p2 = 1.0 - p1;
  return std::sqrt(std::min(p1, p2) / std::max(p1, p2)) >= cos_theta ? 1 : 2;
}

/// Maximal detection probability for unambiguous discrimination:
///   1 - 2 sqrt(p1 p2) cos(theta)       if sqrt(min/max) >= cos(theta),
///   max(p1, p2) sin^2(theta)           otherwise.
inline double unambiguous_max_cos(double cos_theta, double p1) {
  if (!(p1 > 0.0 && p1 < 1.0))
    throw std::invalid_argument("unambiguous_max: p1 must be in (0,1)");
  if (cos_theta < 0.0 || cos_theta > 1.0)
    throw std::invalid_argument("unambiguous_max: cos(theta) must lie in [0,1]");
  const double p2 = 1.0 - p1;
  if (unambiguous_regime_cos(cos_theta, p1) == 1)
    return 1.0 - 2.0 * std::sqrt(p1 * p2) * cos_theta;
  return std::max(p1, p2) * (1.0 - cos_theta * cos_theta);
}

inline double unambiguous_max(double theta, double p1) {
  const double pi2 = std::acos(-1.0) / 2.0;
  if (!(theta > 0.0) || theta > pi2 + 1e-9)
    throw std::invalid_argument("unambiguous_max: theta must lie in (0, pi/2]");
  return unambiguous_max_cos(std::clamp(std::cos(theta), 0.0, 1.0), p1);
}

inline int unambiguous_regime(double theta, double p1) {
  return unambiguous_regime_cos(std::clamp(std::cos(theta), 0.0, 1.0), p1);
}

// ---------------------------------------------------------------------------
// Detection probability of a labeled measurement
// ---------------------------------------------------------------------------

/// Outcome label: which hypothesis an eigenvalue is taken to indicate.
enum class OutcomeLabel : int { inconclusive = 0, state1 = 1, state2 = 2 };

/// Probability of correct identification when measuring A once on a
/// state drawn with priors (p1, 1-p1):
///   W = p1 * sum_{a -> 1} <v, P_a v> + p2 * sum_{a -> 2} <w, P_a w>.
/// `assignment` maps eigenvalues to labels; every eigenvalue of A must
/// be matched (within the eigenvalue-merge resolution).
inline double detection_prob(const Hermitian& a, const StatePair& pair, double p1,
                             const std::vector<std::pair<double, OutcomeLabel>>& assignment) {
  if (!(p1 > 0.0 && p1 < 1.0)) throw std::invalid_argument("detection_prob: p1 must be in (0,1)");
  const SpectralDecomposition dec = eigendecompose(a);
  double radius = 1.0;
  for (double l : dec.eigenvalues) radius = std::max(radius, std::abs(l));
  const double match_eps = 1e-9 * radius;

  const double p2 = 1.0 - p1;
  double w = 0.0;
  for (std::size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    const double lam = dec.eigenvalues[k];
    const OutcomeLabel* found = nullptr;
    for (const auto& [value, label] : assignment) {
      if (std::abs(value - lam) <= match_eps) {
        found = &label;
        break;
      }
    }
    if (!found)
      throw std::invalid_argument("detection_prob: unmapped eigenvalue " + std::to_string(lam));
    if (*found == OutcomeLabel::state1)
      w += p1 * std::real(inner(pair.v, dec.projectors[k].apply(pair.v)));
    else if (*found == OutcomeLabel::state2)
      w += p2 * std::real(inner(pair.w, dec.projectors[k].apply(pair.w)));
  }
  return w;
}

}  // namespace discern
