#include "nlsob/manifold.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

#include "nlsob/functional.hpp"
#include "nlsob/riesz.hpp"

namespace nlsob {

namespace {

double norm_sq(const RadialField& u, int ell, int N) { return h1_inner(u, u, ell, N); }

RadialField normalized(const RadialField& u, int ell, int N) {
  return (1.0 / std::sqrt(norm_sq(u, ell, N))) * u;
}

// Initial scale: match the half-height radius of |u| to that of a bubble.
double scale_guess(const RadialField& u, int N) {
  const auto& g = u.grid();
  const double top = std::max(std::abs(u.head_value()), std::abs(u.value(0)));
  if (top == 0.0) return 1.0;
  for (int i = 1; i < u.size(); ++i) {
    if (std::abs(u.value(i)) <= 0.5 * top) {
      const double a = std::abs(u.value(i - 1)) - 0.5 * top;
      const double b = 0.5 * top - std::abs(u.value(i));
      const double t = (a + b > 0.0) ? a / (a + b) : 0.0;
      const double rh = std::exp(std::log(g.node(i - 1)) + t * g.log_step());
      return std::sqrt(std::pow(2.0, 2.0 / (N - 2.0)) - 1.0) / rh;
    }
  }
  return 1.0;
}

std::vector<RadialField> sector_tangents(const Params& p, double lambda, const RadialGrid& grid, int ell) {
  if (ell == 0) return {bubble(p, {1.0, lambda, {}}, grid), bubble_dlambda(p, lambda, grid)};
  if (ell == 1) return {bubble_dr(p, lambda, grid)};
  return {};
}

}  // namespace

RadialField bubble(const Params& p, const BubbleParams& bp, const RadialGrid& grid) {
  if (!(bp.lambda > 0.0)) throw ValidationError("bubble: lambda must be positive");
  for (double zi : bp.z)
    if (zi != 0.0) throw ValidationError("bubble: radial fields require z = 0");
  const double N = p.N;
  const double lam = bp.lambda;
  const double amp = bp.c * std::pow(lam, 0.5 * (N - 2.0)) * p.constants.bubble_amp;
  return sample(grid, [&](double r) { return amp * std::pow(1.0 + lam * lam * r * r, -0.5 * (N - 2.0)); },
                N - 2.0, amp);
}

RadialField bubble_dlambda(const Params& p, double lambda, const RadialGrid& grid) {
  if (!(lambda > 0.0)) throw ValidationError("bubble_dlambda: lambda must be positive");
  const double N = p.N;
  const double amp = 0.5 * (N - 2.0) * p.constants.bubble_amp * std::pow(lambda, 0.5 * (N - 4.0));
  const double l2 = lambda * lambda;
  return sample(grid, [&](double r) { return amp * (1.0 - l2 * r * r) * std::pow(1.0 + l2 * r * r, -0.5 * N); },
                N - 2.0, amp);
}

RadialField bubble_dr(const Params& p, double lambda, const RadialGrid& grid) {
  if (!(lambda > 0.0)) throw ValidationError("bubble_dr: lambda must be positive");
  const double N = p.N;
  const double amp = -(N - 2.0) * p.constants.bubble_amp * std::pow(lambda, 0.5 * (N - 2.0)) * lambda * lambda;
  const double l2 = lambda * lambda;
  return sample(grid, [&](double r) { return amp * r * std::pow(1.0 + l2 * r * r, -0.5 * N); }, N - 1.0, 0.0);
}

std::vector<std::pair<int, RadialField>> tangent_basis(const Params& p, double lambda, const RadialGrid& grid) {
  std::vector<std::pair<int, RadialField>> out;
  for (int ell : {0, 1})
    for (auto& t : sector_tangents(p, lambda, grid, ell)) out.emplace_back(ell, normalized(t, ell, p.N));
  return out;
}

double linearized_residual(const RadialField& v, const Params& p, double lambda, int ell) {
  const int N = p.N;
  const double q = p.two_star_alpha;
  const auto& g = v.grid();
  const auto U = bubble(p, {1.0, lambda, {}}, g);
  const auto Uq1 = abs_power(U, q - 1.0);
  const auto Uq2 = abs_power(U, q - 2.0);
  const auto nonlocal = product(riesz_potential(product(Uq1, v), p, ell), Uq1);
  const auto potential = product(riesz_potential(abs_power(U, q), p, 0), Uq2);

  const auto dv = differentiate(v);
  const auto d2v = differentiate(dv);
  const double cent = ell * (ell + N - 2.0);
  double res = 0.0;
  double scale = 0.0;
  for (int i = 8; i < g.size() - 8; ++i) {
    const double r = g.node(i);
    const double lap = d2v.value(i) + (N - 1) * dv.value(i) / r - cent * v.value(i) / (r * r);
    const double rhs = q * nonlocal.value(i) + (q - 1.0) * potential.value(i) * v.value(i);
    res = std::max(res, std::abs(-lap - rhs));
    scale = std::max(scale, std::abs(lap));
  }
  return res / scale;
}

Decomposition dist_to_manifold(const RadialField& u, const Params& p) {
  const int N = p.N;
  const auto& g = u.grid();
  const double uu = norm_sq(u, 0, N);
  if (!(uu > 0.0)) throw ValidationError("dist_to_manifold: zero field");

  auto objective = [&](double log_lam) {
    const auto B = bubble(p, {1.0, std::exp(log_lam), {}}, g);
    const double ub = h1_inner(u, B, 0, N);
    return 1.0 - ub * ub / (norm_sq(B, 0, N) * uu);
  };

  const double center = std::log(scale_guess(u, N));
  const double lo = center - std::log(100.0);
  const double hi = center + std::log(100.0);
  constexpr int kStarts = 3;
  constexpr int kBits = 34;  // about 1e-10 in log lambda
  double best_x = center;
  double best_f = objective(center);
  for (int k = 0; k < kStarts; ++k) {
    const double a = lo + (hi - lo) * k / kStarts;
    const double b = lo + (hi - lo) * (k + 1) / kStarts;
    const auto r = boost::math::tools::brent_find_minima(objective, a, b, kBits);
    if (r.second < best_f) {
      best_f = r.second;
      best_x = r.first;
    }
  }
  const double edge = 1e-6 * (hi - lo);
  if (best_x - lo < edge || hi - best_x < edge)
    throw NumericalError("dist_to_manifold: minimum over lambda not bracketed");

  const double lam = std::exp(best_x);
  const auto B = bubble(p, {1.0, lam, {}}, g);
  const double c = h1_inner(u, B, 0, N) / norm_sq(B, 0, N);
  auto rem = u - c * B;
  const double d = std::sqrt(std::max(norm_sq(rem, 0, N), 0.0));

  Decomposition out;
  out.best = {c, lam, std::vector<double>(N, 0.0)};
  out.d = d;
  out.w = d > 0.0 ? (1.0 / d) * rem : 0.0 * rem;
  return out;
}

RadialField project_orthogonal(const RadialField& w, const Params& p, double lambda, int ell) {
  if (ell < 0) throw ValidationError("project_orthogonal: ell must be nonnegative");
  const int N = p.N;
  const double w0 = std::sqrt(norm_sq(w, ell, N));
  if (!(w0 > 0.0)) throw ValidationError("project_orthogonal: zero input");

  // Orthonormalize the tangent directions, then remove them twice.
  std::vector<RadialField> basis;
  for (auto t : sector_tangents(p, lambda, w.grid(), ell)) {
    for (const auto& b : basis) t -= h1_inner(t, b, ell, N) * b;
    basis.push_back(normalized(t, ell, N));
  }
  RadialField out = w;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) out -= h1_inner(out, b, ell, N) * b;

  const double rest = std::sqrt(norm_sq(out, ell, N));
  if (!(rest > 1e-8 * w0)) throw ValidationError("project_orthogonal: input lies in the tangent space");
  return (1.0 / rest) * out;
}

}  // namespace nlsob
