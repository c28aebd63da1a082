#include "nlsob/functional.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "nlsob/riesz.hpp"
#include "quadrature.hpp"

namespace nlsob {

namespace {

constexpr int kEdge = 8;  // nodes excluded at each end for pointwise residuals

// Laplacian of a radial field, u'' + (N-1) u' / r.
std::vector<double> radial_laplacian(const RadialField& u, int N) {
  const auto du = differentiate(u);
  const auto d2u = differentiate(du);
  std::vector<double> lap(u.size());
  for (int i = 0; i < u.size(); ++i) lap[i] = d2u.value(i) + (N - 1) * du.value(i) / u.grid().node(i);
  return lap;
}

// Cumulative mass omega int_0^rho |u| r^{N-1} dr for rho anywhere on (0, inf),
// from quintic interpolation of |u| r^N in log r.
class CumulativeMass {
 public:
  CumulativeMass(const RadialField& u, int N) : u_(u), N_(N), n_(u.size()) {
    const auto& g = u.grid();
    F_.resize(n_);
    for (int j = 0; j < n_; ++j) F_[j] = std::abs(u.value(j)) * std::pow(g.node(j), N);
    for (int o = 0; o < 5; ++o) {
      std::array<double, 6> t{};
      for (int q = 0; q < 6; ++q) t[q] = q - o;
      lag_[o] = detail::lagrange_monomial_coeffs(t);
    }
    C_.resize(n_);
    C_[0] = std::abs(u.head_value()) * std::pow(g.r_min(), N) / N;
    for (int c = 0; c + 1 < n_; ++c) C_[c + 1] = C_[c] + partial(c, 1.0);
  }

  double operator()(double rho) const {
    const auto& g = u_.grid();
    const double omega = sphere_area(N_);
    if (rho <= g.r_min()) return omega * std::abs(u_.head_value()) * std::pow(rho, N_) / N_;
    if (rho >= g.r_max()) {
      const double tau = u_.tail_exponent();
      const double last = std::abs(u_.values().back());
      double extra = 0.0;
      if (last != 0.0 && !std::isinf(tau)) {
        const double R = g.r_max();
        extra = (tau == N_) ? last * std::pow(R, N_) * std::log(rho / R)
                            : last * std::pow(R, tau) * (std::pow(rho, N_ - tau) - std::pow(R, N_ - tau)) / (N_ - tau);
      }
      return omega * (C_.back() + extra);
    }
    const double t = (std::log(rho) - g.log_min()) / g.log_step();
    const int c = std::clamp(static_cast<int>(std::floor(t)), 0, n_ - 2);
    return omega * (C_[c] + partial(c, t - c));
  }

  double node(int k) const { return sphere_area(N_) * C_[k]; }

 private:
  // int_{x_c}^{x_c + u h} of the interpolant of F.
  double partial(int c, double u) const {
    const int s0 = std::clamp(c - 2, 0, n_ - 6);
    const auto& a = lag_[c - s0];
    double acc = 0.0;
    for (int q = 0; q < 6; ++q) {
      double poly = 0.0;
      double pw = u;
      for (int k = 0; k < 6; ++k) {
        poly += a[q][k] * pw / (k + 1);
        pw *= u;
      }
      acc += F_[s0 + q] * poly;
    }
    return acc * u_.grid().log_step();
  }

  const RadialField& u_;
  int N_;
  int n_;
  std::vector<double> F_;
  std::vector<double> C_;
  std::array<std::vector<std::vector<double>>, 5> lag_;
};

}  // namespace

double hls_energy(const RadialField& u, const Params& p) {
  const auto up = abs_power(u, p.two_star_alpha);
  return interaction_energy(up, up, p);
}

DeficitReport deficit(const RadialField& u, const Params& p) {
  bool zero = u.head_value() == 0.0;
  for (double v : u.values()) zero = zero && v == 0.0;
  if (zero) throw ValidationError("deficit of the zero field is undefined");
  DeficitReport rep;
  rep.grad_energy = h1_inner(u, u, 0, p.N);
  rep.hls_energy = hls_energy(u, p);
  rep.deficit = rep.grad_energy - p.constants.s_hls * std::pow(rep.hls_energy, 1.0 / p.two_star_alpha);
  return rep;
}

double el_residual(const RadialField& u, const Params& p) {
  const int n = u.size();
  if (n <= 2 * kEdge) throw ValidationError("grid too small for el_residual");
  const auto lap = radial_laplacian(u, p.N);
  const auto pot = riesz_potential(abs_power(u, p.two_star_alpha), p, 0);
  const auto nl = signed_power(u, p.two_star_alpha - 1.0);
  double res = 0.0;
  double scale = 0.0;
  for (int i = kEdge; i < n - kEdge; ++i) {
    const double rhs = pot.value(i) * nl.value(i);
    res = std::max(res, std::abs(-lap[i] - rhs));
    scale = std::max(scale, std::abs(rhs));
  }
  if (scale == 0.0) throw ValidationError("el_residual: nonlinear term vanishes");
  return res / scale;
}

double weak_norm(const RadialField& u, int N, double R, double q) {
  if (!(R > 0.0)) throw ValidationError("weak_norm: R must be positive");
  if (!(q > 1.0)) throw ValidationError("weak_norm: q must exceed 1");
  const auto& g = u.grid();
  const int n = u.size();

  double vmax = std::abs(u.head_value());
  for (double v : u.values()) vmax = std::max(vmax, std::abs(v));
  const double slack = 1e-10 * vmax;
  double prev = std::abs(u.head_value());
  for (int i = 0; i < n && g.node(i) <= R; ++i) {
    const double cur = std::abs(u.value(i));
    if (cur > prev + slack) throw ValidationError("weak_norm: |u| is not radially nonincreasing");
    prev = cur;
  }

  const CumulativeMass mass(u, N);
  const double omega = sphere_area(N);
  const double expo = (q - 1.0) / q;
  auto ratio = [&](double rho) { return mass(rho) / std::pow(omega * std::pow(rho, N) / N, expo); };

  double best = 0.0;
  int arg = -1;
  for (int i = 0; i < n && g.node(i) <= R; ++i) {
    const double v = mass.node(i) / std::pow(omega * std::pow(g.node(i), N) / N, expo);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  best = std::max(best, ratio(R));
  if (arg < 0) return best;

  const double lo = std::log(arg > 0 ? g.node(arg - 1) : g.node(0));
  const double hi = std::log(std::min(R, arg + 1 < n ? g.node(arg + 1) : R));
  if (hi > lo) {
    auto neg = [&](double x) { return -ratio(std::exp(x)); };
    const auto m = boost::math::tools::brent_find_minima(neg, lo, hi, 40);
    best = std::max(best, -m.second);
  }
  return best;
}

double strong_norm(const RadialField& u, int N, double q) {
  if (!(q >= 1.0)) throw ValidationError("strong_norm: q must be >= 1");
  return std::pow(integrate(abs_power(u, q), N), 1.0 / q);
}

}  // namespace nlsob
