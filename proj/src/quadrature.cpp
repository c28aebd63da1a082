#include "quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "nlsob/params.hpp"

namespace nlsob::detail {

namespace {

// Left-end corrections c_j, j < m: sum_j c_j j^k reproduces the
// Euler-Maclaurin end terms B_{k+1}/(k+1) (odd k) for k < m.
std::vector<double> gregory_corrections(int m) {
  Eigen::MatrixXd V(m, m);
  Eigen::VectorXd rhs(m);
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) V(k, j) = std::pow(static_cast<double>(j), k);
    rhs(k) = (k % 2 == 1) ? boost::math::bernoulli_b2n<double>((k + 1) / 2) / (k + 1) : 0.0;
  }
  Eigen::VectorXd c = V.fullPivLu().solve(rhs);
  return {c.data(), c.data() + m};
}

template <unsigned P>
void append_gauss(QuadRule& rule, double a, double b) {
  using G = boost::math::quadrature::gauss<double, P>;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0.0) {
      rule.x.push_back(mid);
      rule.w.push_back(half * ws[i]);
      continue;
    }
    rule.x.push_back(mid - half * xs[i]);
    rule.w.push_back(half * ws[i]);
    rule.x.push_back(mid + half * xs[i]);
    rule.w.push_back(half * ws[i]);
  }
}

}  // namespace

std::vector<double> gregory_weights(int n) {
  const int m = kGregoryOrder;
  if (n < 2 * m) throw ValidationError("gregory_weights: need at least 16 nodes");
  std::vector<double> w(n, 1.0);
  w.front() = w.back() = 0.5;
  const auto c = gregory_corrections(m);
  for (int j = 0; j < m; ++j) {
    w[j] += c[j];
    w[n - 1 - j] += c[j];
  }
  return w;
}

std::vector<std::vector<double>> fornberg_weights(double z, std::span<const double> x, int max_deriv) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(max_deriv + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<std::vector<double>> lagrange_monomial_coeffs(std::span<const double> t) {
  const int n = static_cast<int>(t.size());
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) V(i, k) = std::pow(t[i], k);
  // Row j of inv(V)^T holds the monomial coefficients of L_j.
  const Eigen::MatrixXd Vinv = V.inverse();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) a[j][k] = Vinv(k, j);
  return a;
}

QuadRule gauss_legendre(int points, double a, double b) {
  QuadRule rule;
  switch (points) {
    case 10: append_gauss<10>(rule, a, b); break;
    case 15: append_gauss<15>(rule, a, b); break;
    case 20: append_gauss<20>(rule, a, b); break;
    case 30: append_gauss<30>(rule, a, b); break;
    default: throw ValidationError("gauss_legendre: unsupported point count");
  }
  return rule;
}

QuadRule tanh_sinh(double len, double step) {
  QuadRule rule;
  constexpr double kTMax = 5.7;  // e^{-2u} reaches ~1e-200 at the ends
  const double half_pi = 0.5 * std::numbers::pi;
  const int count = static_cast<int>(std::floor(2.0 * kTMax / step));
  for (int k = 0; k <= count; ++k) {
    const double t = -kTMax + k * step;
    const double u = half_pi * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(u));
    // y measured from 0 is len / (1 + e^{-2u}); from len, len / (1 + e^{2u}).
    const double lo = len * e / (1.0 + e);
    const double hi = len / (1.0 + e);
    const double y = (u >= 0.0) ? hi : lo;
    const double yc = (u >= 0.0) ? lo : hi;
    const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    const double w = 0.5 * len * sech2 * half_pi * std::cosh(t) * step;
    if (y <= 0.0 || yc <= 0.0 || w == 0.0) continue;
    rule.x.push_back(y);
    rule.w.push_back(w);
    rule.x_hi.push_back(yc);
  }
  return rule;
}

}  // namespace nlsob::detail
