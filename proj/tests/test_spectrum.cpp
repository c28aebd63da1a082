#include <cmath>
#include <random>

#include "doctest.h"
#include "nlsob/manifold.hpp"
#include "nlsob/spectrum.hpp"

using namespace nlsob;

namespace {

Eigen::VectorXd nodal(const RadialField& f) { return Eigen::Map<const Eigen::VectorXd>(f.values().data(), f.size()); }

const RadialGrid& small_grid() {
  static const RadialGrid g = make_log_grid(1e-3, 1e3, 384);
  return g;
}

}  // namespace

TEST_CASE("harmonic multiplicities") {
  CHECK(harmonic_multiplicity(3, 0) == 1);
  CHECK(harmonic_multiplicity(3, 1) == 3);
  CHECK(harmonic_multiplicity(3, 2) == 5);
  CHECK(harmonic_multiplicity(4, 2) == 9);
  CHECK(harmonic_multiplicity(6, 2) == 20);
}

TEST_CASE("sector forms: symmetry, semidefiniteness and the bubble") {
  for (auto [N, a] : {std::pair{3, 1.0}, {5, 3.0}}) {
    const auto p = make_params(N, a);
    for (int ell = 0; ell <= 2; ++ell) {
      const auto op = assemble_sector(p, ell, small_grid());
      const double an = op.A.norm(), bn = op.B.norm();
      CHECK((op.A - op.A.transpose()).norm() <= 1e-12 * an);
      CHECK((op.B - op.B.transpose()).norm() <= 1e-12 * bn);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.B, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
    }
    const auto op = assemble_sector(p, 0, small_grid());
    const auto U = nodal(bubble(p, {1, 1, {}}, small_grid()));
    CHECK(U.dot(op.A * U) == doctest::Approx(U.dot(op.B * U)).epsilon(1e-4));
    CHECK(rayleigh_quotient(op, U) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(rayleigh_quotient(op, nodal(bubble_dlambda(p, 1, small_grid()))) == doctest::Approx(p.two_star_alpha).epsilon(1e-3));
    const auto op1 = assemble_sector(p, 1, small_grid());
    CHECK(rayleigh_quotient(op1, nodal(bubble_dr(p, 1, small_grid()))) == doctest::Approx(p.two_star_alpha).epsilon(1e-3));
  }
  CHECK_THROWS_AS(assemble_sector(make_params(3, 1.0), 3, small_grid()), ValidationError);
}

TEST_CASE("nonlocal part is positive on random vectors") {
  const auto op = assemble_sector(make_params(4, 1.5), 0, small_grid());
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 5; ++t) {
    Eigen::VectorXd f(op.T.rows());
    for (int i = 0; i < f.size(); ++i) f(i) = n01(rng);
    CHECK(f.dot(op.T * f) >= 0.0);
  }
}

TEST_CASE("generalized eigenpairs") {
  for (auto [N, a] : {std::pair{3, 2.0}, {6, 4.0}}) {
    const auto p = make_params(N, a);
    const double q = p.two_star_alpha;
    const auto op0 = assemble_sector(p, 0, small_grid());
    const auto r0 = solve_generalized(op0, 4);
    REQUIRE(r0.eigenvalues.size() == 4u);
    CHECK(r0.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r0.eigenvalues[1] == doctest::Approx(q).epsilon(1e-3));
    const auto U = nodal(bubble(p, {1, 1, {}}, small_grid()));
    CHECK(b_cosine(op0, U, r0.eigenvectors.col(0)) > 0.999);
    CHECK(b_cosine(op0, nodal(bubble_dlambda(p, 1, small_grid())), r0.eigenvectors.col(1)) > 0.99);
    for (int j = 0; j < 4; ++j) {
      const Eigen::VectorXd v = r0.eigenvectors.col(j);
      CHECK(rayleigh_quotient(op0, v) == doctest::Approx(r0.eigenvalues[j]).epsilon(1e-10));
      CHECK(v.dot(op0.B * v) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(r0.eigenvalues[j] >= 1.0 - 1e-6);
      if (j > 0) CHECK(r0.eigenvalues[j] > r0.eigenvalues[j - 1]);
    }
    const auto op1 = assemble_sector(p, 1, small_grid());
    const auto r1 = solve_generalized(op1, 2);
    CHECK(r1.eigenvalues[0] == doctest::Approx(q).epsilon(1e-3));
    CHECK(b_cosine(op1, nodal(bubble_dr(p, 1, small_grid())), r1.eigenvectors.col(0)) > 0.99);
  }
  CHECK_THROWS_AS(solve_generalized(assemble_sector(make_params(3, 1.0), 0, small_grid()), 0), ValidationError);
}

TEST_CASE("merged spectrum and gap") {
  const auto p = make_params(6, 4.0);
  const auto gap = spectral_gap(p, small_grid(), 4);
  REQUIRE(gap.sectors.size() == 3u);
  const auto& m = gap.merged;
  CHECK(m.ell == -1);
  CHECK(std::is_sorted(m.eigenvalues.begin(), m.eigenvalues.end()));
  // 1, then 2 once (dilation) and N times (translations).
  CHECK(m.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-3));
  for (int j = 1; j <= 7; ++j) CHECK(m.eigenvalues[j] == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(m.eigenvalues[8] > 2.0 + 1e-3);
  CHECK(m.mu_gap == doctest::Approx(m.eigenvalues[8]));
  CHECK(m.k_count == 0);
  CHECK(m.b1_candidate == doctest::Approx(2.0 * (m.mu_gap - 2.0)));
  CHECK(gap.gap_within_bound == (m.mu_gap <= 2.55));
}
