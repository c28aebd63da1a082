#include <cmath>

#include "doctest.h"
#include "nlsob/experiments.hpp"
#include "nlsob/functional.hpp"
#include "nlsob/manifold.hpp"

using namespace nlsob;

TEST_CASE("bubble construction") {
  const auto p = make_params(4, 2.0);
  const auto g = make_log_grid(1e-2, 1e2, 256);
  const auto U = bubble(p, {2.0, 3.0, {}}, g);
  CHECK(U.head_value() == doctest::Approx(2.0 * 3.0 * p.constants.bubble_amp));
  CHECK(U.tail_exponent() == 2.0);
  CHECK_THROWS_AS(bubble(p, {1.0, 1.0, {0.1, 0.0, 0.0, 0.0}}, g), ValidationError);
  CHECK_THROWS_AS(bubble(p, {1.0, -1.0, {}}, g), ValidationError);
  CHECK_NOTHROW(bubble(p, {1.0, 1.0, {0.0, 0.0, 0.0, 0.0}}, g));
}

TEST_CASE("dilation derivative matches a finite difference") {
  const auto p = make_params(3, 1.0);
  const auto g = make_log_grid(1e-3, 1e3, 1024);
  const double h = 1e-5;
  const auto fd = (0.5 / h) * (bubble(p, {1.0, 1.0 + h, {}}, g) - bubble(p, {1.0, 1.0 - h, {}}, g));
  const auto dl = bubble_dlambda(p, 1.0, g);
  for (int i = 0; i < g.size(); i += 50) CHECK(dl.value(i) == doctest::Approx(fd.value(i)).epsilon(1e-7).scale(1e-9));
}

TEST_CASE("tangent directions solve the linearized equation") {
  const auto g = make_log_grid(kDefaultRMin, kDefaultRMax, kDefaultGridN);
  for (auto [N, a] : {std::pair{3, 1.0}, {4, 2.0}, {6, 4.0}}) {
    const auto p = make_params(N, a);
    CHECK(linearized_residual(bubble_dlambda(p, 1.0, g), p, 1.0, 0) < 1e-5);
    CHECK(linearized_residual(bubble_dr(p, 1.0, g), p, 1.0, 1) < 1e-5);
    // U itself is not in the kernel: L U = -(p - 2) (...) U.
    CHECK(linearized_residual(bubble(p, {1.0, 1.0, {}}, g), p, 1.0, 0) > 1e-2);
    const auto U = bubble(p, {1.0, 1.0, {}}, g);
    CHECK(std::abs(h1_inner(U, bubble_dlambda(p, 1.0, g), 0, N)) < 1e-10);
    for (const auto& [ell, t] : tangent_basis(p, 1.0, g)) CHECK(h1_inner(t, t, ell, N) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("distance recovers the parameters of a scaled bubble") {
  const auto g = make_log_grid(kDefaultRMin, kDefaultRMax, kDefaultGridN);
  const auto p = make_params(3, 1.0);
  const auto d = dist_to_manifold(bubble(p, {3.0, 5.0, {}}, g), p);
  CHECK(d.best.c == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(d.best.lambda == doctest::Approx(5.0).epsilon(1e-5));
  CHECK(d.d < 1e-5 * std::sqrt(h1_inner(bubble(p, {3.0, 5.0, {}}, g), bubble(p, {3.0, 5.0, {}}, g), 0, 3)));
}

TEST_CASE("distance of an orthogonal perturbation equals its size") {
  const auto g = make_log_grid(kDefaultRMin, kDefaultRMax, kDefaultGridN);
  const auto p = make_params(4, 2.0);
  const auto w = project_orthogonal(random_direction(g, 3), p, 1.0, 0);
  const auto U = bubble(p, {1.0, 1.0, {}}, g);
  CHECK(std::abs(h1_inner(w, U, 0, 4)) < 1e-12);
  CHECK(std::abs(h1_inner(w, bubble_dlambda(p, 1.0, g), 0, 4)) < 1e-12);
  for (double eps : {1e-2, 1e-3}) {
    const auto d = dist_to_manifold(U + eps * w, p);
    CHECK(d.d == doctest::Approx(eps).epsilon(1e-3));
    CHECK(d.best.lambda == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(h1_inner(d.w, d.w, 0, 4) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("projection rejects tangent input") {
  const auto g = make_log_grid(1e-3, 1e3, 512);
  const auto p = make_params(3, 1.0);
  CHECK_THROWS_AS(project_orthogonal(bubble_dlambda(p, 1.0, g), p, 1.0, 0), ValidationError);
  CHECK_THROWS_AS(project_orthogonal(bubble_dr(p, 1.0, g), p, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(project_orthogonal(bubble(p, {1, 1, {}}, g), p, 1.0, -1), ValidationError);
}

TEST_CASE("distance reports an unbracketed minimum") {
  const auto g = make_log_grid(1e-3, 1e3, 512);
  const auto p = make_params(3, 1.0);
  auto f = [](double r) { return std::exp(-std::log(r) * std::log(r) / 50.0); };
  CHECK_THROWS_AS(dist_to_manifold(sample(g, f, 8.0, f(1e-3)), p), NumericalError);
  CHECK_THROWS_AS(dist_to_manifold(0.0 * bubble(p, {1, 1, {}}, g), p), ValidationError);
}
