#pragma once

#include <cmath>
#include <cstdint>

#include "discern/linalg.hpp"
#include "discern/sampling.hpp"

namespace testutil {

inline discern::Vector random_unit(discern::Rng& rng, std::size_t dim) {
  discern::Vector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = discern::cplx(rng.gaussian(), rng.gaussian());
  return discern::normalized(v);
}

inline discern::Hermitian random_hermitian(discern::Rng& rng, std::size_t dim) {
  discern::Hermitian a(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    a(i, i) = rng.gaussian();
    for (std::size_t j = i + 1; j < dim; ++j) {
      discern::cplx z(rng.gaussian(), rng.gaussian());
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  return a;
}

inline double max_entry_diff(const discern::Hermitian& a, const discern::Hermitian& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace testutil
