#include "nlsob/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/binomial.hpp>

#include "nlsob/manifold.hpp"
#include "nlsob/riesz.hpp"
#include "quadrature.hpp"

namespace nlsob {

namespace {

constexpr double kDeflate = 1e-10;
constexpr double kNegativeTol = 1e-8;
constexpr double kMatchTol = 1e-3;
constexpr double kGapBound = 0.55;

// Dirichlet form int phi_x^2 r^{N-2} dx of the piecewise sixth-order Lagrange
// interpolant of the nodal values, integrated exactly per cell up to
// Gauss-Legendre error. Differentiating stencils directly leaves near-null
// boundary modes that show up as oscillations in the eigenvectors.
Eigen::MatrixXd stiffness(const RadialGrid& g, int N) {
  constexpr int kStencil = 6;
  const int n = g.size();
  const double h = g.log_step();
  const auto gl = detail::gauss_legendre(10, 0.0, 1.0);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> x(kStencil);
  Eigen::VectorXd d(kStencil);
  for (int m = 0; m + 1 < n; ++m) {
    const int s = std::clamp(m - kStencil / 2 + 1, 0, n - kStencil);
    for (int q = 0; q < kStencil; ++q) x[q] = s + q;
    Eigen::MatrixXd cell = Eigen::MatrixXd::Zero(kStencil, kStencil);
    for (std::size_t k = 0; k < gl.x.size(); ++k) {
      const double z = m + gl.x[k];
      const auto w = detail::fornberg_weights(z, x, 1);
      for (int q = 0; q < kStencil; ++q) d(q) = w[1][q] / h;
      const double rho = std::exp((N - 2.0) * (g.log_min() + z * h));
      cell.noalias() += (h * gl.w[k] * rho) * d * d.transpose();
    }
    K.block(s, s, kStencil, kStencil) += cell;
  }
  return K;
}

}  // namespace

int harmonic_multiplicity(int N, int ell) {
  if (ell == 0) return 1;
  if (ell == 1) return N;
  using boost::math::binomial_coefficient;
  return static_cast<int>(std::lround(binomial_coefficient<double>(N + ell - 1, ell) -
                                      binomial_coefficient<double>(N + ell - 3, ell - 2)));
}

SectorOperator assemble_sector(const Params& p, int ell, const RadialGrid& grid) {
  if (ell < 0 || ell > 2) throw ValidationError("assemble_sector: ell must be 0, 1 or 2");
  const int n = grid.size();
  const int N = p.N;
  const double q = p.two_star_alpha;
  const auto& wx = grid.log_weights();

  const auto U = bubble(p, {1.0, 1.0, {}}, grid);
  const auto pot = riesz_potential(abs_power(U, q), p, 0);

  SectorOperator op;
  op.ell = ell;
  op.grid = grid;
  op.params = p;
  op.potential.resize(n);
  for (int i = 0; i < n; ++i) op.potential(i) = pot.value(i) * std::pow(U.value(i), q - 2.0);

  // Dirichlet form in log r: int phi_x^2 r^{N-2} dx, plus the centrifugal term
  // and the exact contributions of harmonic extensions beyond the grid.
  Eigen::MatrixXd A = stiffness(grid, N);
  const double cent = ell * (ell + N - 2.0);
  for (int i = 0; i < n; ++i) A(i, i) += cent * wx[i] * std::pow(grid.node(i), N - 2.0);
  A(n - 1, n - 1) += (N - 2.0 + ell) * std::pow(grid.r_max(), N - 2.0);
  A(0, 0) += ell * std::pow(grid.r_min(), N - 2.0);

  Eigen::VectorXd mass(n);
  for (int i = 0; i < n; ++i) mass(i) = wx[i] * std::pow(grid.node(i), N) * op.potential(i);

  // Nonlocal form: weights w r^{N-alpha} U^{q-1} on the outer integral and
  // r^N U^{q-1} inside the kernel quadrature.
  const auto& W = angular_kernel(p, ell, grid)->matrix();
  Eigen::VectorXd left(n);
  Eigen::VectorXd right(n);
  for (int i = 0; i < n; ++i) {
    const double r = grid.node(i);
    const double u = std::pow(U.value(i), q - 1.0);
    left(i) = wx[i] * std::pow(r, N - p.alpha) * u;
    right(i) = std::pow(r, N) * u;
  }
  Eigen::MatrixXd T = left.asDiagonal() * W * right.asDiagonal();
  op.T = 0.5 * (T + T.transpose());

  op.A = A;
  op.A.diagonal() += mass;
  op.A = 0.5 * (op.A + op.A.transpose()).eval();
  op.B = op.T;
  op.B.diagonal() += mass;
  return op;
}

double rayleigh_quotient(const SectorOperator& op, const Eigen::VectorXd& v) {
  return v.dot(op.A * v) / v.dot(op.B * v);
}

double b_cosine(const SectorOperator& op, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return std::abs(u.dot(op.B * v)) / std::sqrt(u.dot(op.B * u) * v.dot(op.B * v));
}

// Deflate the numerical kernel of B, eliminate it through the Schur complement
// of A, and solve the reciprocal problem S^{-1} x = nu Lambda^{-1} x, whose
// largest eigenvalues nu = 1/mu are well conditioned.
SpectrumReport solve_generalized(const SectorOperator& op, int k) {
  const int n = static_cast<int>(op.A.rows());
  if (k < 1) throw ValidationError("solve_generalized: k must be positive");

  // A common Jacobi scaling is a congruence, so the spectrum is unchanged;
  // without it the deflation threshold would be set by the far field of B.
  const Eigen::VectorXd dinv = op.A.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd As = dinv.asDiagonal() * op.A * dinv.asDiagonal();
  const Eigen::MatrixXd Bs = dinv.asDiagonal() * op.B * dinv.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bsolve(Bs);
  if (bsolve.info() != Eigen::Success) throw NumericalError("eigendecomposition of B failed");
  const Eigen::VectorXd& lam = bsolve.eigenvalues();
  const double top = lam.maxCoeff();
  if (!(top > 0.0)) throw NumericalError("B has no positive part");
  if (lam.minCoeff() < -kNegativeTol * top) throw NumericalError("B is not positive semidefinite");
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (lam(i) > kDeflate * top) keep.push_back(i);
  const int m = static_cast<int>(keep.size());

  Eigen::MatrixXd Y(n, m);
  for (int j = 0; j < m; ++j) Y.col(j) = bsolve.eigenvectors().col(keep[j]) * std::sqrt(lam(keep[j]));

  Eigen::LLT<Eigen::MatrixXd> llt(As);
  if (llt.info() != Eigen::Success) throw NumericalError("A is not positive definite");
  const Eigen::MatrixXd X = llt.matrixL().solve(Y);
  const Eigen::MatrixXd M = X.transpose() * X;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> msolve(M);
  if (msolve.info() != Eigen::Success) throw NumericalError("reduced eigenproblem failed");

  const int count = std::min(k, m);
  SpectrumReport rep;
  rep.ell = op.ell;
  rep.eigenvectors.resize(n, count);
  for (int j = 0; j < count; ++j) {
    const int col = m - 1 - j;
    const double nu = msolve.eigenvalues()(col);
    if (!(nu > 0.0)) throw NumericalError("nonpositive reciprocal eigenvalue");
    const double mu = 1.0 / nu;
    // v = mu A^{-1} B v with B v = Y y.
    Eigen::VectorXd v = dinv.asDiagonal() * llt.matrixU().solve(X * msolve.eigenvectors().col(col));
    v *= mu;
    const double bn = v.dot(op.B * v);
    v /= std::sqrt(bn);
    // Fix the sign so the largest-magnitude entry is positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    rep.eigenvalues.push_back(mu);
    rep.eigenvectors.col(j) = v;
  }

  const double q = op.params.two_star_alpha;
  rep.mu_gap = std::numeric_limits<double>::quiet_NaN();
  for (double mu : rep.eigenvalues) {
    if (mu > q + kMatchTol) {
      rep.mu_gap = mu;
      break;
    }
  }
  for (double mu : rep.eigenvalues)
    if (mu > 1.0 + kMatchTol && mu < q - kMatchTol) ++rep.k_count;
  rep.b1_candidate = 2.0 * (rep.mu_gap - q);
  return rep;
}

GapReport spectral_gap(const Params& p, const RadialGrid& grid, int per_sector) {
  GapReport out;
  const double q = p.two_star_alpha;
  std::vector<double> all;
  for (int ell = 0; ell <= 2; ++ell) {
    auto rep = solve_generalized(assemble_sector(p, ell, grid), per_sector);
    const int mult = harmonic_multiplicity(p.N, ell);
    for (double mu : rep.eigenvalues) all.insert(all.end(), mult, mu);
    out.sectors.push_back(std::move(rep));
  }
  std::sort(all.begin(), all.end());
  SpectrumReport& mg = out.merged;
  mg.ell = -1;
  mg.eigenvalues = all;
  mg.mu_gap = std::numeric_limits<double>::quiet_NaN();
  for (double mu : all) {
    if (mu > q + kMatchTol) {
      mg.mu_gap = mu;
      break;
    }
  }
  for (double mu : all)
    if (mu > 1.0 + kMatchTol && mu < q - kMatchTol) ++mg.k_count;
  mg.b1_candidate = 2.0 * (mg.mu_gap - q);
  out.gap_within_bound = std::isfinite(mg.mu_gap) && mg.mu_gap <= q + kGapBound;
  return out;
}

GapReport spectral_gap(const Params& p) {
  return spectral_gap(p, make_log_grid(kDefaultRMin, kDefaultRMax, 1024));
}

}  // namespace nlsob
