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
 * Small dense complex linear algebra for two-state discrimination:
 * unit vectors, Hermitian operators, expectations, uncertainties,
 * spectral decomposition, and the angle between pure states.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace discern {

using cplx = std::complex<double>;

/// Numerical tolerances. Defaults reflect the accuracy ladder of the
/// library: constructor identities ~1e-12, derived equalities ~1e-10.
/// Functions that depend on a tolerance accept it as a parameter so
/// callers can override per call.
namespace tol {
inline constexpr double unit = 1e-12;           // |<psi,psi> - 1|
inline constexpr double hermitian = 1e-12;      // entrywise A - A^dagger
inline constexpr double reconstruction = 1e-10; // spectral identities
inline constexpr double eig_merge_rel = 1e-9;   // eigenvalue clustering, relative to spectral radius
inline constexpr double degenerate = 1e-12;     // zero-uncertainty / equal-mean cutoffs
}  // namespace tol

/// Thrown when a numerical invariant that is a theorem in exact
/// arithmetic fails beyond tolerance. Distinct from std::invalid_argument
/// (caller error) so front ends can report it loudly.
class invariant_violation : public std::runtime_error {
 public:
  explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Vector
// ---------------------------------------------------------------------------

/// Dense complex column vector of fixed dimension >= 1.
class Vector {
 public:
  explicit Vector(std::size_t dim) : a_(check_dim(dim)) {}
  Vector(std::initializer_list<cplx> entries) : a_(entries) {
    check_dim(a_.size());
  }
  explicit Vector(std::vector<cplx> entries) : a_(std::move(entries)) {
    check_dim(a_.size());
  }

  static Vector basis(std::size_t dim, std::size_t k) {
    Vector e(dim);
    e[k] = 1.0;
    return e;
  }

  std::size_t dim() const { return a_.size(); }
  cplx& operator[](std::size_t i) { return a_[i]; }
  const cplx& operator[](std::size_t i) const { return a_[i]; }
  const std::vector<cplx>& entries() const { return a_; }

  Vector& operator+=(const Vector& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    require_same_dim(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Vector& operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(cplx s, Vector a) { return a *= s; }

  bool operator==(const Vector&) const = default;

 private:
  std::size_t check_dim(std::size_t d) const {
    if (d < 1) throw std::invalid_argument("vector dimension must be >= 1");
    return d;
  }
  void require_same_dim(const Vector& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("vector dimension mismatch");
  }

  std::vector<cplx> a_;
};

/// Sesquilinear inner product, conjugate-linear in the first argument.
inline cplx inner(const Vector& u, const Vector& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("inner: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < u.dim(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

inline double norm(const Vector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) s += std::norm(v[i]);
  return std::sqrt(s);
}

inline bool is_unit(const Vector& v, double eps = tol::unit) {
  double n2 = 0.0;
  for (std::size_t i = 0; i < v.dim(); ++i) n2 += std::norm(v[i]);
  return std::abs(n2 - 1.0) <= eps;
}

inline void require_unit(const Vector& v, const char* what) {
  if (!is_unit(v)) throw std::invalid_argument(std::string(what) + ": vector is not unit norm");
}

inline Vector normalized(const Vector& v) {
  double n = norm(v);
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  Vector r = v;
  r *= cplx(1.0 / n, 0.0);
  return r;
}

// ---------------------------------------------------------------------------
// Hermitian operator
// ---------------------------------------------------------------------------

/// Dense Hermitian matrix. Entries are stored row-major; construction
/// from raw entries validates A = A^dagger entrywise.
class Hermitian {
 public:
  explicit Hermitian(std::size_t dim) : dim_(check_dim(dim)), m_(dim * dim, cplx(0.0)) {}

  /// Validating constructor from row-major entries.
  static Hermitian from_entries(std::size_t dim, std::vector<cplx> entries,
                                double eps = tol::hermitian) {
    if (entries.size() != dim * dim)
      throw std::invalid_argument("Hermitian: entry count does not match dim*dim");
    Hermitian a(dim);
    a.m_ = std::move(entries);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) {
        cplx d = a(i, j) - std::conj(a(j, i));
        if (std::abs(d) > eps)
          throw std::invalid_argument("Hermitian: matrix is not self-adjoint within tolerance");
      }
    return a;
  }

  static Hermitian identity(std::size_t dim) {
    Hermitian a(dim);
    for (std::size_t i = 0; i < dim; ++i) a(i, i) = 1.0;
    return a;
  }

  static Hermitian diagonal(const std::vector<double>& d) {
    Hermitian a(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) a(i, i) = d[i];
    return a;
  }

  /// Rank-one projector-like term  |x><x|.
  static Hermitian outer(const Vector& x) {
    Hermitian a(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
      for (std::size_t j = 0; j < x.dim(); ++j) a(i, j) = x[i] * std::conj(x[j]);
    return a;
  }

  /// Hermitian pair term  |x><y| + |y><x|.
  static Hermitian sym_outer(const Vector& x, const Vector& y) {
    if (x.dim() != y.dim()) throw std::invalid_argument("sym_outer: dimension mismatch");
    Hermitian a(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
      for (std::size_t j = 0; j < x.dim(); ++j)
        a(i, j) = x[i] * std::conj(y[j]) + y[i] * std::conj(x[j]);
    return a;
  }

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t i, std::size_t j) { return m_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_[i * dim_ + j]; }
  const std::vector<cplx>& entries() const { return m_; }

  Vector apply(const Vector& v) const {
    if (v.dim() != dim_) throw std::invalid_argument("apply: dimension mismatch");
    Vector r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) s += m_[i * dim_ + j] * v[j];
      r[i] = s;
    }
    return r;
  }

  Hermitian& operator+=(const Hermitian& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < m_.size(); ++k) m_[k] += o.m_[k];
    return *this;
  }
  Hermitian& operator-=(const Hermitian& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < m_.size(); ++k) m_[k] -= o.m_[k];
    return *this;
  }
  /// Scaling is restricted to real factors; complex scaling would leave
  /// the Hermitian cone.
  Hermitian& operator*=(double s) {
    for (auto& x : m_) x *= s;
    return *this;
  }

  friend Hermitian operator+(Hermitian a, const Hermitian& b) { return a += b; }
  friend Hermitian operator-(Hermitian a, const Hermitian& b) { return a -= b; }
  friend Hermitian operator*(double s, Hermitian a) { return a *= s; }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : m_) s += std::norm(x);
    return std::sqrt(s);
  }

  bool operator==(const Hermitian&) const = default;

 private:
  std::size_t check_dim(std::size_t d) const {
    if (d < 1) throw std::invalid_argument("matrix dimension must be >= 1");
    return d;
  }
  void require_same_dim(const Hermitian& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
  }

  std::size_t dim_;
  std::vector<cplx> m_;
};

/// <psi, A psi>. The imaginary part vanishes for Hermitian A; values
/// beyond 1e-12 indicate a corrupted operator and are reported.
inline double expectation(const Hermitian& a, const Vector& psi) {
  require_unit(psi, "expectation");
  cplx e = inner(psi, a.apply(psi));
  if (std::abs(e.imag()) > 1e-12)
    throw invariant_violation("expectation: non-real value for Hermitian operator");
  return e.real();
}

/// Uncertainty of A in the pure state psi: sqrt(<A^2> - <A>^2).
/// Evaluated as the norm of A psi - <A> psi, which equals the moment
/// difference in exact arithmetic but keeps the radicand a sum of
/// squares, so near-eigenvector states come out at ~1e-16 instead of
/// the ~1e-8 the cancellation form would give.
inline double uncertainty(const Hermitian& a, const Vector& psi) {
  require_unit(psi, "uncertainty");
  Vector apsi = a.apply(psi);
  cplx mean = inner(psi, apsi);
  if (std::abs(mean.imag()) > 1e-12)
    throw invariant_violation("uncertainty: non-real expectation for Hermitian operator");
  double s = 0.0;
  for (std::size_t i = 0; i < psi.dim(); ++i) s += std::norm(apsi[i] - mean.real() * psi[i]);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

/// Distinct eigenvalues in ascending order together with the orthogonal
/// projectors onto the corresponding eigenspaces.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<Hermitian> projectors;
  std::vector<int> multiplicities;
  std::size_t dim = 0;
};

namespace detail {

/// One cyclic complex Jacobi sweep set: diagonalizes a Hermitian matrix
/// in place, accumulating the unitary in `vecs` (columns = eigenvectors).
/// Each 2x2 pivot block is phased to a real symmetric block and rotated
/// exactly as in the real Jacobi method.
inline void jacobi_hermitian(std::vector<cplx>& a, std::vector<cplx>& vecs, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> cplx& { return a[i * n + j]; };
  auto vt = [&](std::size_t i, std::size_t j) -> cplx& { return vecs[i * n + j]; };

  double scale = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) scale = std::max(scale, std::abs(a[k]));
  if (scale == 0.0) return;

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(at(p, q));
    if (std::sqrt(off) <= 1e-15 * scale * static_cast<double>(n)) return;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = at(p, q);
        const double g = std::abs(apq);
        if (g <= 1e-300) continue;
        const cplx phase = apq / g;  // apq = g * phase
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        // Rotation angle for the phased real block [[app, g], [g, aqq]].
        const double tau = (aqq - app) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary: columns p,q mix as  col_p' = c*col_p - s*conj(phase)*col_q,
        //                              col_q' = s*phase*col_p + c*col_q.
        const cplx sp = s * phase;
        const cplx spc = s * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - spc * akq;
          at(k, q) = sp * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - sp * aqk;
          at(q, k) = spc * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = vt(k, p), vkq = vt(k, q);
          vt(k, p) = c * vkp - spc * vkq;
          vt(k, q) = sp * vkp + c * vkq;
        }
      }
    }
  }
  throw invariant_violation("eigendecompose: Jacobi iteration did not converge");
}

}  // namespace detail

/// Spectral decomposition of a Hermitian operator. Eigenvalues closer
/// than `merge_rel` times the spectral radius are merged into a single
/// eigenspace, so near-degenerate spectra do not produce spurious
/// outcome labels.
inline SpectralDecomposition eigendecompose(const Hermitian& a,
                                            double merge_rel = tol::eig_merge_rel) {
  const std::size_t n = a.dim();
  // Symmetrize first: drift of order 1e-16 from upstream arithmetic is
  // folded back so the iteration sees an exactly Hermitian matrix.
  std::vector<cplx> work(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      work[i * n + j] = 0.5 * (a(i, j) + std::conj(a(j, i)));
  std::vector<cplx> vecs(n * n, cplx(0.0));
  for (std::size_t i = 0; i < n; ++i) vecs[i * n + i] = 1.0;

  detail::jacobi_hermitian(work, vecs, n);

  std::vector<double> lam(n);
  for (std::size_t i = 0; i < n; ++i) lam[i] = work[i * n + i].real();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return lam[i] < lam[j]; });

  double radius = 0.0;
  for (double l : lam) radius = std::max(radius, std::abs(l));
  const double merge_eps = merge_rel * std::max(1.0, radius);

  SpectralDecomposition dec;
  dec.dim = n;
  std::size_t k = 0;
  while (k < n) {
    std::size_t start = k;
    double sum = lam[order[k]];
    ++k;
    while (k < n && lam[order[k]] - lam[order[k - 1]] <= merge_eps) {
      sum += lam[order[k]];
      ++k;
    }
    const int mult = static_cast<int>(k - start);
    Hermitian proj(n);
    for (std::size_t m = start; m < k; ++m) {
      const std::size_t col = order[m];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          proj(i, j) += vecs[i * n + col] * std::conj(vecs[j * n + col]);
    }
    dec.eigenvalues.push_back(sum / mult);
    dec.projectors.push_back(std::move(proj));
    dec.multiplicities.push_back(mult);
  }
  return dec;
}

// ---------------------------------------------------------------------------
// State pairs
// ---------------------------------------------------------------------------

/// Angle between the pure states spanned by v and w:
/// arccos(|<v,w>|), clamped into [0, pi/2]. Phase-invariant.
inline double angle_between(const Vector& v, const Vector& w) {
  require_unit(v, "angle_between");
  require_unit(w, "angle_between");
  double c = std::abs(inner(v, w));
  return std::acos(std::clamp(c, 0.0, 1.0));
}

/// Two unit vectors with the phase convention <v,w> real and >= 0
/// applied at construction, so downstream closed forms may assume
/// <v,w> = cos(theta).
struct StatePair {
  Vector v;
  Vector w;
  double theta = 0.0;      // in (0, pi/2]
  double cos_theta = 0.0;  // == <v,w> after alignment
  bool orthogonal = false;

  std::size_t dim() const { return v.dim(); }
};

/// Builds a StatePair, aligning the phase of w. Parallel pairs
/// (|<v,w>| within 1e-12 of 1) are rejected: theta = 0 admits no
/// discrimination. Orthogonal pairs are admitted but flagged.
inline StatePair make_state_pair(const Vector& v, const Vector& w) {
  if (v.dim() != w.dim()) throw std::invalid_argument("make_state_pair: dimension mismatch");
  require_unit(v, "make_state_pair");
  require_unit(w, "make_state_pair");
  const cplx g = inner(v, w);
  const double mag = std::abs(g);
  if (mag >= 1.0 - 1e-12)
    throw std::invalid_argument("make_state_pair: states are parallel (theta = 0)");
  Vector w2 = w;
  if (mag > 0.0) w2 *= std::conj(g) / mag;  // now <v,w2> = |g| >= 0
  StatePair p{v, std::move(w2), 0.0, 0.0, false};
  p.cos_theta = std::clamp(mag, 0.0, 1.0);
  p.theta = std::acos(p.cos_theta);
  p.orthogonal = mag <= tol::degenerate;
  return p;
}

/// Canonical pair with angle theta placed symmetrically about the first
/// coordinate axis of an ambient space of dimension `dim` >= 2:
///   v = cos(theta/2) e1 - sin(theta/2) e2,
///   w = cos(theta/2) e1 + sin(theta/2) e2.
inline StatePair canonical_pair(double theta, std::size_t dim = 2) {
  const double pi2 = std::acos(-1.0) / 2.0;
  // A slack of 1e-9 admits decimal truncations of pi/2.
  if (!(theta > 0.0) || theta > pi2 + 1e-9)
    throw std::invalid_argument("canonical_pair: theta must lie in (0, pi/2]");
  theta = std::min(theta, pi2);
  if (dim < 2) throw std::invalid_argument("canonical_pair: dimension must be >= 2");
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  Vector v(dim), w(dim);
  v[0] = c;
  v[1] = -s;
  w[0] = c;
  w[1] = s;
  return make_state_pair(v, w);
}

}  // namespace discern
