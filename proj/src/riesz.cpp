#include "nlsob/riesz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

#include "quadrature.hpp"

namespace nlsob {

namespace {

constexpr int kOrder = 6;            // product-integration stencil (quintic)
constexpr double kFarLog = 18.0;     // asymptotic closure point in |log(s/r)|
constexpr double kSingularTol = 1e-9;

struct Gauss20 {
  std::array<double, 20> x{};
  std::array<double, 20> w{};
  Gauss20() {
    using G = boost::math::quadrature::gauss<double, 20>;
    const auto& a = G::abscissa();
    const auto& b = G::weights();
    for (int i = 0; i < 10; ++i) {
      x[2 * i] = -a[i];
      x[2 * i + 1] = a[i];
      w[2 * i] = w[2 * i + 1] = b[i];
    }
  }
};

const Gauss20& gauss20() {
  static const Gauss20 g;
  return g;
}

void check_ell(int ell) {
  if (ell < 0 || ell > kMaxEll) throw ValidationError("ell must be in {0, 1, 2, 3}");
}

}  // namespace

KernelProfile::KernelProfile(int N, double alpha, int ell)
    : N_(N), alpha_(alpha), ell_(ell), lambda_(0.5 * (N - 2)), g_norm_(1.0) {
  check_ell(ell);
  omega_ = sphere_area(N - 1);
  g_norm_ = gegenbauer(1.0);
}

double KernelProfile::gegenbauer(double t) const {
  if (ell_ == 0) return 1.0;
  double c0 = 1.0;
  double c1 = 2.0 * lambda_ * t;
  for (int n = 1; n < ell_; ++n) {
    const double c2 = (2.0 * t * (n + lambda_) * c1 - (n + 2.0 * lambda_ - 1.0) * c0) / (n + 1.0);
    c0 = c1;
    c1 = c2;
  }
  return c1 / g_norm_;
}

// kappa(e^y) for y > 0, integrating over the polar angle theta with panels
// graded geometrically toward the near-singular point theta = 0.
double KernelProfile::positive(double y) const {
  const auto& gl = gauss20();
  const double a = alpha_;
  const double delta = 2.0 * std::sinh(0.5 * y);
  const bool subtract = ell_ > 0 && y > 1.0;
  const double cosh_y = std::cosh(y);

  // log_scale folds the panel width into the exponent to avoid overflow when
  // alpha > N - 1 and delta is tiny.
  auto integrand = [&](double theta, double log_scale) {
    const double s = std::sin(theta);
    const double gc = gegenbauer(std::cos(theta));
    if (subtract) return std::exp(log_scale) * gc * std::pow(s, N_ - 2) * std::expm1(-0.5 * a * std::log1p(-std::cos(theta) / cosh_y));
    // D = rho (delta^2 + 4 sin^2(theta/2)), assembled in logs.
    const double two_sin = 2.0 * std::sin(0.5 * theta);
    const double q = two_sin / delta;
    const double log_d = (q <= 1.0) ? y + 2.0 * std::log(delta) + std::log1p(q * q)
                                    : y + 2.0 * std::log(two_sin) + std::log1p(1.0 / (q * q));
    return gc * std::exp(log_scale + (N_ - 2) * std::log(s) - 0.5 * a * log_d);
  };

  auto panel = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double log_half = std::log(half);
    double acc = 0.0;
    for (int k = 0; k < 20; ++k) acc += gl.w[k] * integrand(mid + half * gl.x[k], log_half);
    return acc;
  };

  const double pi = std::numbers::pi;
  double acc = 0.0;
  if (delta >= 0.25 * pi) {
    acc = panel(0.0, 0.5 * pi) + panel(0.5 * pi, pi);
  } else {
    acc = panel(0.0, delta);
    double lo = delta;
    while (lo < pi) {
      const double hi = std::min(4.0 * lo, pi);
      acc += panel(lo, hi);
      lo = hi;
    }
  }
  if (subtract) {
    const double log_p = 2.0 * y + std::log1p(std::exp(-2.0 * y));
    return omega_ * std::exp(-0.5 * a * log_p) * acc;
  }
  return omega_ * acc;
}

double KernelProfile::operator()(double y) const {
  if (y > 0.0) return positive(y);
  if (y < 0.0) return std::exp(-alpha_ * y) * positive(-y);
  if (alpha_ >= N_ - 1.0) return std::numeric_limits<double>::infinity();
  return positive(std::numeric_limits<double>::min());
}

double riesz_kernel(const Params& p, int ell, double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) throw ValidationError("riesz_kernel: radii must be positive");
  const KernelProfile k(p.N, p.alpha, ell);
  return std::pow(r, -p.alpha) * k(std::log(s / r));
}

AngularKernel::AngularKernel(const Params& p, int ell, const RadialGrid& grid)
    : params_(p), ell_(ell), grid_(grid), kappa_(p.N, p.alpha, ell) {
  const int n = grid.size();
  if (n < kOrder) throw ValidationError("grid too small for the Riesz kernel");
  const double h = grid.log_step();

  // Quadrature nodes and kernel samples per cell [m h, (m + 1) h].
  cells_.resize(2 * n - 2);
  const auto ts_fine = detail::tanh_sinh(h, 1.0 / 16);
  const auto ts_coarse = detail::tanh_sinh(h, 1.0 / 8);
  for (int m = -(n - 1); m <= n - 2; ++m) {
    Cell& c = cells_[m + n - 1];
    if (m == 0 || m == -1) {
      auto fill = [&](const detail::QuadRule& rule, Cell& out) {
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
          out.y.push_back(m == 0 ? rule.x[k] : -rule.x_hi[k]);
          out.w.push_back(rule.w[k]);
          out.kappa.push_back(kappa_(out.y.back()));
        }
      };
      fill(ts_fine, c);
      Cell coarse;
      fill(ts_coarse, coarse);
      double fine_sum = 0.0;
      double coarse_sum = 0.0;
      for (std::size_t k = 0; k < c.w.size(); ++k) fine_sum += c.w[k] * c.kappa[k];
      for (std::size_t k = 0; k < coarse.w.size(); ++k) coarse_sum += coarse.w[k] * coarse.kappa[k];
      if (!std::isfinite(fine_sum) || std::abs(fine_sum - coarse_sum) > kSingularTol * std::abs(fine_sum))
        throw NumericalError("near-diagonal kernel quadrature did not converge");
      continue;
    }
    const int pts = (m == 1 || m == -2) ? 20 : 10;
    const auto rule = detail::gauss_legendre(pts, m * h, (m + 1) * h);
    c.y = rule.x;
    c.w = rule.w;
    c.kappa.resize(c.y.size());
    for (std::size_t k = 0; k < c.y.size(); ++k) c.kappa[k] = kappa_(c.y[k]);
  }

  // Power moments mu[m][k] = int_cell kappa (t / h)^k dt.
  std::vector<std::array<double, kOrder>> mu(2 * n - 2);
  for (int m = -(n - 1); m <= n - 2; ++m) {
    const Cell& c = cells_[m + n - 1];
    auto& out = mu[m + n - 1];
    out.fill(0.0);
    for (std::size_t k = 0; k < c.y.size(); ++k) {
      const double u = (c.y[k] - m * h) / h;
      double pw = c.w[k] * c.kappa[k];
      for (int q = 0; q < kOrder; ++q) {
        out[q] += pw;
        pw *= u;
      }
    }
  }

  // Lagrange coefficients for the five stencil placements relative to a cell.
  std::array<std::vector<std::vector<double>>, kOrder - 1> lag;
  for (int o = 0; o < kOrder - 1; ++o) {
    std::array<double, kOrder> t{};
    for (int q = 0; q < kOrder; ++q) t[q] = q - o;
    lag[o] = detail::lagrange_monomial_coeffs(t);
  }

  W_ = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c <= n - 2; ++c) {
    const int s0 = std::clamp(c - 2, 0, n - kOrder);
    const auto& a = lag[c - s0];
    for (int q = 0; q < kOrder; ++q) {
      double* col = W_.col(s0 + q).data();
      const auto& aq = a[q];
      for (int i = 0; i < n; ++i) {
        const auto& mm = mu[c - i + n - 1];
        double acc = 0.0;
        for (int k = 0; k < kOrder; ++k) acc += aq[k] * mm[k];
        col[i] += acc;
      }
    }
  }

  head_.assign(n, 0.0);
  head_[n - 1] = head_integral_beyond();
  for (int i = n - 2; i >= 0; --i) head_[i] = head_[i + 1] + cell_integral(-(i + 1), p.N);
}

double AngularKernel::cell_integral(int m, double beta) const {
  const int n = grid_.size();
  const Cell& c = cells_[m + n - 1];
  double acc = 0.0;
  for (std::size_t k = 0; k < c.y.size(); ++k) acc += c.w[k] * c.kappa[k] * std::exp(beta * c.y[k]);
  return acc;
}

double AngularKernel::head_integral_beyond() const {
  const int n = grid_.size();
  const double N = params_.N;
  const double top = -(n - 1) * grid_.log_step();
  const double far = std::min(top, -kFarLog);
  double acc = kappa_(far) * std::exp(N * far) / (N + ell_);
  const int panels = static_cast<int>(std::ceil((top - far) / 0.5));
  for (int k = 0; k < panels; ++k) {
    const double lo = far + (top - far) * k / panels;
    const double hi = far + (top - far) * (k + 1) / panels;
    const auto rule = detail::gauss_legendre(20, lo, hi);
    for (std::size_t j = 0; j < rule.x.size(); ++j)
      acc += rule.w[j] * kappa_(rule.x[j]) * std::exp(N * rule.x[j]);
  }
  return acc;
}

double AngularKernel::tail_integral_beyond(double beta) const {
  const int n = grid_.size();
  const double bottom = (n - 1) * grid_.log_step();
  const double far = std::max(bottom, kFarLog);
  double acc = kappa_(far) * std::exp(beta * far) / (params_.alpha + ell_ - beta);
  const int panels = static_cast<int>(std::ceil((far - bottom) / 0.5));
  for (int k = 0; k < panels; ++k) {
    const double lo = bottom + (far - bottom) * k / panels;
    const double hi = bottom + (far - bottom) * (k + 1) / panels;
    const auto rule = detail::gauss_legendre(20, lo, hi);
    for (std::size_t j = 0; j < rule.x.size(); ++j)
      acc += rule.w[j] * kappa_(rule.x[j]) * std::exp(beta * rule.x[j]);
  }
  return acc;
}

double AngularKernel::table(int i, int j) const {
  return std::pow(grid_.node(i), -params_.alpha) * kappa_((j - i) * grid_.log_step());
}

std::vector<std::pair<double, double>> AngularKernel::profile() const {
  const int n = grid_.size();
  std::vector<std::pair<double, double>> out;
  out.reserve(2 * n - 2);
  for (int m = -(n - 1); m <= n - 1; ++m) {
    if (m == 0) continue;
    const double y = m * grid_.log_step();
    out.emplace_back(std::exp(y), kappa_(y));
  }
  return out;
}

RadialField AngularKernel::apply(const RadialField& f) const {
  const auto& g = f.grid();
  const int n = g.size();
  if (n != grid_.size() || std::abs(g.log_step() - grid_.log_step()) > 1e-12 * grid_.log_step())
    throw ValidationError("field grid does not match kernel grid");
  const double N = params_.N;
  const double alpha = params_.alpha;

  Eigen::VectorXd F(n);
  for (int j = 0; j < n; ++j) F(j) = f.value(j) * std::pow(g.node(j), N);
  Eigen::VectorXd out = W_ * F;
  for (int i = 0; i < n; ++i) {
    const double ri = g.node(i);
    out(i) = std::pow(ri, -alpha) * out(i) + f.head_value() * std::pow(ri, N - alpha) * head_[i];
  }

  const double tau = f.tail_exponent();
  const double last = f.values().back();
  if (last != 0.0 && !std::isinf(tau)) {
    if (!(tau + alpha + ell_ - N > 0.0))
      throw ValidationError("Riesz potential diverges: tail exponent too small");
    const double beta = N - tau;
    std::vector<double> T(n);
    T[n - 1] = tail_integral_beyond(beta);
    for (int k = n - 2; k >= 0; --k) T[k] = T[k + 1] + cell_integral(k, beta);
    const double log_R = std::log(g.r_max());
    for (int i = 0; i < n; ++i) {
      const double log_r = std::log(g.node(i));
      out(i) += last * std::exp(tau * (log_R - log_r) + (N - alpha) * log_r) * T[n - 1 - i];
    }
  }

  const double tau_out = std::isinf(tau) ? alpha + ell_ : std::min(alpha + ell_, tau + alpha - N);
  std::vector<double> vals(out.data(), out.data() + n);
  const double head = vals.front();
  return {g, std::move(vals), tau_out, head};
}

std::shared_ptr<const AngularKernel> angular_kernel(const Params& p, int ell, const RadialGrid& grid) {
  check_ell(ell);
  using Key = std::tuple<int, double, int, double, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const AngularKernel>> cache;
  const Key key{p.N, p.alpha, ell, grid.log_step(), grid.size()};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto k = std::make_shared<const AngularKernel>(p, ell, grid);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(k)).first->second;
}

RadialField riesz_potential(const RadialField& f, const Params& p, int ell) {
  return angular_kernel(p, ell, f.grid())->apply(f);
}

double interaction_energy(const RadialField& f, const RadialField& g, const Params& p, int ell) {
  const auto k = angular_kernel(p, ell, f.grid());
  const double fg = radial_moment(product(k->apply(f), g), p.N);
  const double gf = radial_moment(product(k->apply(g), f), p.N);
  return sphere_area(p.N) * 0.5 * (fg + gf);
}

}  // namespace nlsob
