#include "nlsob/params.hpp"

#include <cmath>
#include <numbers>

#include "quadrature.hpp"

namespace nlsob {

Params make_params(int N, double alpha) {
  if (N < 3) throw ValidationError("dimension N must be >= 3");
  if (!(alpha > 0.0) || !(alpha < N)) throw ValidationError("alpha must lie in (0, N)");
  Params p;
  p.N = N;
  p.alpha = alpha;
  p.two_star_alpha = (2.0 * N - alpha) / (N - 2.0);
  p.two_star = 2.0 * N / (N - 2.0);
  p.q_weak = N / (N - 2.0);
  p.constants = hls_sobolev_constant(p);
  return p;
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw ValidationError("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

double sphere_area(int N) {
  if (N < 2) throw ValidationError("sphere_area: N must be >= 2");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / gamma_fn(0.5 * N);
}

double hls_sharp_constant(const Params& p) {
  const double N = p.N;
  const double a = p.alpha;
  const double log_c = std::lgamma(0.5 * (N - a)) + 0.5 * a * std::log(std::numbers::pi) -
                       std::lgamma(N - 0.5 * a) +
                       (N - a) / N * (std::lgamma(N) - std::lgamma(0.5 * N));
  return std::exp(log_c);
}

double sobolev_constant(int N, int n) {
  if (N < 3) throw ValidationError("sobolev_constant: N must be >= 3");
  if (n < 2 * detail::kGregoryOrder) throw ValidationError("sobolev_constant: too few nodes");
  const double x0 = std::log(1e-6);
  const double x1 = std::log(1e6);
  const double h = (x1 - x0) / (n - 1);
  const double c = std::pow(N * (N - 2.0), 0.25 * (N - 2.0));
  const double two_star = 2.0 * N / (N - 2.0);
  const auto w = detail::gregory_weights(n);

  // Integrands in x = log r carry the Jacobian r^N.
  auto grad = [&](double r) {
    const double dv = -(N - 2.0) * c * r * std::pow(1.0 + r * r, -0.5 * N);
    return dv * dv * std::pow(r, N);
  };
  auto mass = [&](double r) {
    return std::pow(c * std::pow(1.0 + r * r, -0.5 * (N - 2.0)), two_star) * std::pow(r, N);
  };

  double g = 0.0;
  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = std::exp(x0 + i * h);
    g += w[i] * h * grad(r);
    m += w[i] * h * mass(r);
  }
  const double r0 = std::exp(x0);
  const double r1 = std::exp(x1);
  g += grad(r0) / (N + 2.0) + grad(r1) / (N - 2.0);
  m += mass(r0) / N + mass(r1) / N;

  const double omega = sphere_area(N);
  return omega * g / std::pow(omega * m, 2.0 / two_star);
}

SharpConstants hls_sobolev_constant(const Params& p) {
  const double N = p.N;
  const double a = p.alpha;
  SharpConstants k;
  k.c_hls = hls_sharp_constant(p);
  k.s_sob = sobolev_constant(p.N);
  k.s_hls = k.s_sob / std::pow(k.c_hls, (N - 2.0) / (2.0 * N - a));
  k.bubble_amp = std::pow(k.s_sob, (N - a) * (2.0 - N) / (4.0 * (N - a + 2.0))) *
                 std::pow(k.c_hls, (2.0 - N) / (2.0 * (N - a + 2.0))) *
                 std::pow(N * (N - 2.0), 0.25 * (N - 2.0));
  return k;
}

}  // namespace nlsob
