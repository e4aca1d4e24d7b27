#pragma once

// Forward direction: the loop g = k1(eta)^* diag(e^chi, e^-chi) k2(zeta) and
// its triangular factorization l m a u, both built directly from coordinates.

#include <optional>

#include "loopfact/rootsub.hpp"

namespace loopfact {

/// Truncation cap for the exponentials e^{+-chi_+}; in inexact mode they are
/// cut much earlier, once the remaining tail is negligible.
inline constexpr int kExpDegreeCap = 256;

/// g = l diag(m0 a0, det0 / (m0 a0)) u. For loops in SL(2), det0 = 1.
template <Coefficient T>
struct BasicTriangular {
  MatrixLoop<T> l;
  T m0{1};
  typename ScalarTraits<T>::Real a0{1};
  MatrixLoop<T> u;
  T det0{1};
};

using TriangularFactorization = BasicTriangular<Complex>;

/// e^{it}; exact mode only supports t = 0.
template <Coefficient T>
T unit_phase(double t);

template <Coefficient T>
MatrixLoop<T> assemble_loop(const BasicCoordinates<T>& coords, std::optional<IndexRange> out = std::nullopt);

template <Coefficient T>
BasicTriangular<T> assemble_triangular(const BasicCoordinates<T>& coords,
                                       std::optional<IndexRange> out = std::nullopt);

/// l diag(m0 a0, det0/(m0 a0)) u.
template <Coefficient T>
MatrixLoop<T> recompose(const BasicTriangular<T>& t, std::optional<IndexRange> out = std::nullopt);

}  // namespace loopfact
