#pragma once

#include <stdexcept>
#include <string>

namespace nlsob {

// Bad input: parameters out of range, malformed files, mismatched grids.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to deliver its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct SharpConstants {
  double c_hls = 0.0;       // sharp diagonal HLS constant C(N, alpha)
  double s_sob = 0.0;       // best Sobolev constant S(N)
  double s_hls = 0.0;       // best nonlocal Sobolev constant
  double bubble_amp = 0.0;  // U(0)
};

/// Problem parameters: dimension N >= 3 and Riesz exponent 0 < alpha < N.
/// Derived exponents and the sharp constants are filled in by make_params.
struct Params {
  int N = 3;
  double alpha = 1.0;
  double two_star_alpha = 0.0;  // (2N - alpha) / (N - 2)
  double two_star = 0.0;        // 2N / (N - 2)
  double q_weak = 0.0;          // N / (N - 2)
  SharpConstants constants;
};

Params make_params(int N, double alpha);

double gamma_fn(double x);

/// Surface area of the unit sphere S^{N-1} in R^N.
double sphere_area(int N);

double hls_sharp_constant(const Params& p);

/// Rayleigh quotient ||grad V||^2 / ||V||_{2*}^2 of the Talenti profile,
/// by trapezoid quadrature in log r over n nodes.
double sobolev_constant(int N, int n = 4096);

SharpConstants hls_sobolev_constant(const Params& p);

}  // namespace nlsob
