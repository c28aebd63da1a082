#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gegenbauer.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "doctest.h"
#include "nlsob/riesz.hpp"

using namespace nlsob;
using std::numbers::pi;

namespace {

// Newton potential of the unit ball indicator inside the ball.
double newton_ball_inside(int N, double r) { return sphere_area(N) * (r * r / N + 0.5 * (1.0 - r * r)); }

// Riesz potential of exp(-|x|^2): pi^{N/2} Gamma((N-a)/2) / Gamma(N/2) 1F1(a/2; N/2; -r^2).
double gaussian_potential(int N, double a, double r) {
  return std::pow(pi, 0.5 * N) * std::tgamma(0.5 * (N - a)) / std::tgamma(0.5 * N) *
         boost::math::hypergeometric_1F1(0.5 * a, 0.5 * N, -r * r);
}

// Funk-Hecke integral of the sector kernel by adaptive quadrature over the polar angle.
double sector_kernel_brute(int N, double a, int ell, double r, double s) {
  const double lam = 0.5 * (N - 2.0);
  const double g1 = boost::math::gegenbauer(ell, lam, 1.0);
  auto f = [&](double t) {
    const double d = r * r + s * s - 2.0 * r * s * std::cos(t);
    return std::pow(d, -0.5 * a) * boost::math::gegenbauer(ell, lam, std::cos(t)) / g1 * std::pow(std::sin(t), N - 2);
  };
  const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi, 20, 1e-14);
  return sphere_area(N - 1) * inner;
}

RadialField random_field(const RadialGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double a = n01(rng), b = n01(rng), c = n01(rng);
  return sample(g, [&](double r) { return (a + b * r + c * r * r) * std::exp(-r * r); }, 30.0, a);
}

}  // namespace

TEST_CASE("Newton oracle for the unit ball indicator") {
  for (int N : {3, 4, 5}) {
    const auto p = make_params(N, N - 2.0);
    const auto g = make_log_grid(1e-3, 1.0, 1024);
    const auto f = sample(g, [](double) { return 1.0; }, INFINITY, 1.0);
    const auto pot = riesz_potential(f, p, 0);
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i) err = std::max(err, std::abs(pot.value(i) / newton_ball_inside(N, g.node(i)) - 1.0));
    CHECK(err < 1e-9);
  }
}

TEST_CASE("Gaussian closed form, including the strongly singular range") {
  for (auto [N, a] : {std::pair{3, 1.0}, {3, 2.5}, {4, 2.0}, {5, 4.5}}) {
    const auto p = make_params(N, a);
    // The constant head model costs O(r_min^2) near the origin; push it below 1e-9.
    const auto g = make_log_grid(1e-5, 30.0, 2048);
    const auto f = sample(g, [](double r) { return std::exp(-r * r); }, INFINITY, 1.0);
    const auto pot = riesz_potential(f, p, 0);
    double err = 0.0;
    for (int i = 0; i < g.size(); i += 7) {
      const double r = g.node(i);
      if (r > 6.0) break;
      err = std::max(err, std::abs(pot.value(i) / gaussian_potential(N, a, r) - 1.0));
    }
    CHECK_MESSAGE(err < 1e-8, "N=" << N << " alpha=" << a);
  }
}

TEST_CASE("bubble potential closed form") {
  for (auto [N, a] : {std::pair{3, 1.0}, {3, 2.0}, {4, 2.0}, {5, 3.0}, {6, 4.0}}) {
    const auto p = make_params(N, a);
    const auto g = make_log_grid(1e-3, 1e3, 2048);
    const double A = p.constants.bubble_amp;
    const double q = p.two_star_alpha;
    const auto U = sample(g, [&](double r) { return A * std::pow(1 + r * r, -0.5 * (N - 2)); }, N - 2.0, A);
    const auto pot = riesz_potential(abs_power(U, q), p, 0);
    const double c = std::pow(pi, 0.5 * N) * std::tgamma(0.5 * (N - a)) / std::tgamma(N - 0.5 * a) * std::pow(A, q);
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i)
      err = std::max(err, std::abs(pot.value(i) / (c * std::pow(1 + g.node(i) * g.node(i), -0.5 * a)) - 1.0));
    CHECK_MESSAGE(err < 1e-9, "N=" << N << " alpha=" << a);
  }
}

TEST_CASE("sector kernels against Funk-Hecke quadrature") {
  for (auto [N, a] : {std::pair{3, 1.0}, {3, 0.5}, {5, 2.0}, {4, 1.5}})
    for (int ell = 0; ell <= 2; ++ell) {
      const auto p = make_params(N, a);
      for (double s : {0.2, 0.7, 1.6, 5.0}) {
        const double ref = sector_kernel_brute(N, a, ell, 1.0, s);
        CHECK_MESSAGE(riesz_kernel(p, ell, 1.0, s) == doctest::Approx(ref).epsilon(1e-10),
                      "N=" << N << " alpha=" << a << " ell=" << ell << " s=" << s);
      }
    }
}

TEST_CASE("Newton sector kernels") {
  for (int N : {3, 4, 5})
    for (int ell = 0; ell <= 2; ++ell) {
      const auto p = make_params(N, N - 2.0);
      for (auto [r, s] : {std::pair{1.0, 0.3}, {0.5, 2.0}, {3.0, 7.0}}) {
        const double lo = std::min(r, s), hi = std::max(r, s);
        const double ref = sphere_area(N) * (N - 2.0) / (2.0 * ell + N - 2.0) * std::pow(lo, ell) / std::pow(hi, ell + N - 2.0);
        CHECK(riesz_kernel(p, ell, r, s) == doctest::Approx(ref).epsilon(1e-11));
      }
    }
}

TEST_CASE("kernel symmetry and homogeneity") {
  const auto p = make_params(4, 2.7);
  for (int ell = 0; ell <= 2; ++ell)
    for (auto [r, s] : {std::pair{1.0, 0.3}, {0.5, 2.0}, {3.0, 3.1}}) {
      CHECK(riesz_kernel(p, ell, r, s) == doctest::Approx(riesz_kernel(p, ell, s, r)).epsilon(1e-12));
      const double t = 3.7;
      CHECK(riesz_kernel(p, ell, t * r, t * s) == doctest::Approx(std::pow(t, -p.alpha) * riesz_kernel(p, ell, r, s)).epsilon(1e-12));
    }
}

TEST_CASE("potential scales with the dilation") {
  const auto p = make_params(3, 1.5);
  const auto g = make_log_grid(1e-3, 1e3, 1024);
  const double lam = 4.0;
  auto fn = [](double r) { return 1.0 / std::pow(1.0 + r * r, 2.0); };
  const auto f = sample(g, fn, 4.0, 1.0);
  const auto fl = sample(g, [&](double r) { return fn(lam * r); }, 4.0, 1.0);
  const auto pf = riesz_potential(f, p);
  const auto pl = riesz_potential(fl, p);
  for (double r : {0.01, 0.1, 0.5, 2.0})
    CHECK(pl.at(r) == doctest::Approx(std::pow(lam, p.alpha - p.N) * pf.at(lam * r)).epsilon(1e-8));
}

TEST_CASE("interaction energy is positive definite per sector") {
  std::mt19937_64 rng(42);
  const auto p = make_params(3, 1.3);
  const auto g = make_log_grid(1e-3, 1e2, 512);
  for (int ell = 0; ell <= 2; ++ell)
    for (int t = 0; t < 4; ++t) {
      const auto f = random_field(g, rng);
      CHECK(interaction_energy(f, f, p, ell) > 0.0);
    }
}

TEST_CASE("potential of a decreasing profile decreases") {
  const auto p = make_params(5, 3.0);
  const auto g = make_log_grid(1e-3, 1e3, 1024);
  const auto f = sample(g, [](double r) { return 1.0 / (1.0 + r * r * r); }, 3.0, 1.0);
  const auto pot = riesz_potential(f, p);
  for (int i = 1; i < g.size(); ++i) CHECK(pot.value(i) < pot.value(i - 1));
}

TEST_CASE("HLS inequality with the sharp constant") {
  for (auto [N, a] : {std::pair{3, 1.0}, {4, 2.0}, {5, 3.5}}) {
    const auto p = make_params(N, a);
    const auto g = make_log_grid(1e-3, 1e3, 2048);
    const double t = 2.0 * N / (2.0 * N - a);
    auto quotient = [&](const RadialField& f) {
      const double nrm = std::pow(integrate(abs_power(f, t), N), 1.0 / t);
      return interaction_energy(f, f, p) / (nrm * nrm);
    };
    // Extremal: (1 + r^2)^{-(2N - a)/2}.
    const auto opt = sample(g, [&](double r) { return std::pow(1 + r * r, -0.5 * (2.0 * N - a)); }, 2.0 * N - a, 1.0);
    CHECK(quotient(opt) == doctest::Approx(p.constants.c_hls).epsilon(1e-8));
    const auto other = sample(g, [](double r) { return std::exp(-r); }, INFINITY, 1.0);
    CHECK(quotient(other) < p.constants.c_hls);
  }
}

TEST_CASE("kernel cache and profile") {
  const auto p = make_params(3, 1.0);
  const auto g = make_log_grid(1e-2, 1e2, 128);
  const auto k1 = angular_kernel(p, 1, g);
  const auto k2 = angular_kernel(p, 1, make_log_grid(1e-2, 1e2, 128));
  CHECK(k1.get() == k2.get());
  CHECK(angular_kernel(p, 0, g).get() != k1.get());
  CHECK(k1->profile().size() == 2u * (g.size() - 1));
  CHECK(k1->matrix().rows() == g.size());
}

TEST_CASE("riesz rejects bad input") {
  const auto p = make_params(3, 1.0);
  const auto g = make_log_grid(1e-2, 1e2, 128);
  const auto f = sample(g, [](double r) { return std::exp(-r); }, INFINITY, 1.0);
  CHECK_THROWS_AS(riesz_potential(f, p, kMaxEll + 1), ValidationError);
  CHECK_THROWS_AS(riesz_potential(f, p, -1), ValidationError);
  const auto h = make_log_grid(1e-2, 1e2, 256);
  const auto f2 = sample(h, [](double r) { return std::exp(-r); }, INFINITY, 1.0);
  CHECK_THROWS_AS(interaction_energy(f, f2, p), ValidationError);
}
