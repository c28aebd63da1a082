#pragma once

// Small numerical building blocks shared by the translation units.

#include <span>
#include <vector>

namespace nlsob::detail {

// Number of corrected end weights in the Gregory rule (exact for degree 7).
inline constexpr int kGregoryOrder = 8;

/// Trapezoid weights on n equispaced nodes (unit step) with Gregory end
/// corrections at both ends.
std::vector<double> gregory_weights(int n);

/// Finite-difference / interpolation weights (Fornberg). Returns
/// weights[d][j] such that f^{(d)}(z) ~ sum_j weights[d][j] f(x_j).
std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> x, int max_deriv);

/// Coefficients a[j][k] of the Lagrange basis polynomials through nodes t:
/// L_j(u) = sum_k a[j][k] u^k.
std::vector<std::vector<double>> lagrange_monomial_coeffs(std::span<const double> t);

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> x_hi;  // len - x, filled by tanh_sinh only
};

/// Gauss-Legendre rule with `points` nodes mapped to [a, b].
QuadRule gauss_legendre(int points, double a, double b);

/// Truncated tanh-sinh rule on [0, len] with nodes clustered at 0 and len.
/// Node distances to both ends are computed without cancellation.
QuadRule tanh_sinh(double len, double step);

}  // namespace nlsob::detail
