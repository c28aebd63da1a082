#include "nlsob/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "nlsob/functional.hpp"
#include "nlsob/manifold.hpp"
#include "nlsob/spectrum.hpp"

namespace nlsob {

namespace {

constexpr double kTailTol = 1e-6;
constexpr int kBumps = 4;
constexpr double kBumpTail = 16.0;

// Least squares line y = a x + b.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double a = sxy / sxx;
  return {a, my - a * mx};
}

RadialField eigen_direction(const SweepConfig& cfg, const SpectrumReport& rep, int index) {
  const auto sg = cfg.spectral_grid.make();
  const int n = sg.size();
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = rep.eigenvectors(i, index);
  const RadialField coarse(sg, std::move(vals), cfg.params.N - 2.0, rep.eigenvectors(0, index));
  const auto g = cfg.grid.make();
  return sample(g, [&](double r) { return coarse.at(r); }, coarse.tail_exponent(), coarse.head_value());
}

}  // namespace

std::string DirectionSpec::label() const {
  if (kind == Kind::Random) return "random:" + std::to_string(seed);
  return "eigen:" + std::to_string(index);
}

RadialField random_direction(const RadialGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> center(-1.5, 1.5);
  std::uniform_real_distribution<double> width(0.3, 0.8);
  std::vector<double> a(kBumps), c(kBumps), s(kBumps);
  for (int k = 0; k < kBumps; ++k) {
    a[k] = amp(rng);
    c[k] = center(rng);
    s[k] = width(rng);
  }
  auto fn = [&](double r) {
    const double x = std::log(r);
    double v = 0.0;
    for (int k = 0; k < kBumps; ++k) v += a[k] * std::exp(-0.5 * (x - c[k]) * (x - c[k]) / (s[k] * s[k]));
    return v;
  };
  // Gaussian decay in log r beats every power; any large exponent will do.
  return sample(grid, fn, kBumpTail, fn(grid.r_min()));
}

SweepReport ratio_sweep(const SweepConfig& cfg) {
  const Params& p = cfg.params;
  if (cfg.epsilons.empty()) throw ValidationError("ratio_sweep: no epsilons");
  for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
    if (!(cfg.epsilons[i] > 0.0)) throw ValidationError("ratio_sweep: epsilons must be positive");
    if (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))
      throw ValidationError("ratio_sweep: epsilons must be strictly decreasing");
  }
  if (cfg.directions.empty()) throw ValidationError("ratio_sweep: no directions");

  SweepReport out;
  const auto gap = spectral_gap(p, cfg.spectral_grid.make());
  out.mu_gap = gap.merged.mu_gap;
  out.b1_target = gap.merged.b1_candidate;
  out.gap_within_bound = gap.gap_within_bound;

  const auto grid = cfg.grid.make();
  const auto U = bubble(p, {1.0, 1.0, {}}, grid);
  const auto& s0 = gap.sectors.front();

  std::vector<RadialField> dirs;
  for (const auto& d : cfg.directions) {
    RadialField w;
    if (d.kind == DirectionSpec::Kind::Random) {
      w = random_direction(grid, d.seed);
    } else {
      int idx = d.index;
      if (idx < 0) {
        for (std::size_t j = 0; j < s0.eigenvalues.size(); ++j)
          if (s0.eigenvalues[j] > p.two_star_alpha + 1e-3) {
            idx = static_cast<int>(j);
            break;
          }
      }
      if (idx < 0 || idx >= static_cast<int>(s0.eigenvalues.size()))
        throw ValidationError("ratio_sweep: eigenfunction index out of range");
      w = eigen_direction(cfg, s0, idx);
    }
    dirs.push_back(project_orthogonal(w, p, 1.0, 0));
  }

  const int ne = static_cast<int>(cfg.epsilons.size());
  const int total = static_cast<int>(dirs.size()) * ne;
  out.rows.resize(total);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int t = next++; t < total; t = next++) {
      const int di = t / ne;
      const double eps = cfg.epsilons[t % ne];
      SweepRow& row = out.rows[t];
      row.direction = cfg.directions[di].label();
      row.epsilon = eps;
      try {
        const auto u = U + eps * dirs[di];
        const auto rep = deficit(u, p);
        const auto dec = dist_to_manifold(u, p);
        row.deficit = rep.deficit;
        row.dist = dec.d;
        row.ratio = dec.d > 0.0 ? rep.deficit / (dec.d * dec.d) : std::numeric_limits<double>::quiet_NaN();
      } catch (const std::exception& e) {
        row.error = e.what();
        row.deficit = row.dist = row.ratio = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };
  int nt = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  nt = std::clamp(nt, 1, total);
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  out.empirical_b1 = std::numeric_limits<double>::infinity();
  for (int di = 0; di < static_cast<int>(dirs.size()); ++di) {
    const auto& row = out.rows[di * ne + ne - 1];
    if (row.error.empty()) out.empirical_b1 = std::min(out.empirical_b1, row.ratio);
  }
  if (!std::isfinite(out.empirical_b1)) out.empirical_b1 = std::numeric_limits<double>::quiet_NaN();
  return out;
}

double tail_energy_quadrature(const Params& p, double R, double lambda) {
  const int N = p.N;
  const auto g = make_log_grid(R, R * 1e6, kDefaultGridN);
  const auto du = differentiate(bubble(p, {1.0, lambda, {}}, g));
  const auto sq = product(du, du);
  const RadialField outside(g, sq.values(), sq.tail_exponent(), 0.0);
  return integrate(outside, N);
}

double tail_energy(const Params& p, double R, double lambda) {
  if (!(R > 0.0) || !(lambda > 0.0)) throw ValidationError("tail_energy: R and lambda must be positive");
  const double N = p.N;
  const double a = p.constants.bubble_amp;
  const double s0 = R * lambda;
  const double t0 = 1.0 / (1.0 + s0 * s0);
  // t = 1 / (1 + s^2) maps int_{s0}^inf s^{N+1} (1 + s^2)^{-N} ds to a half incomplete beta.
  const double red = 0.5 * boost::math::beta(0.5 * N - 1.0, 0.5 * N + 1.0, t0);
  const double closed = (N - 2.0) * (N - 2.0) * a * a * sphere_area(p.N) * red;
  const double quad = tail_energy_quadrature(p, R, lambda);
  if (!(std::abs(quad - closed) <= kTailTol * closed))
    throw NumericalError("tail_energy: quadrature and reduction disagree");
  return closed;
}

PowerFit tail_energy_scaling(const Params& p, double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) throw ValidationError("tail_energy_scaling: bad range");
  std::vector<double> x, y;
  for (int i = 0; i < points; ++i) {
    const double s = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    x.push_back(std::log(s));
    y.push_back(std::log(tail_energy(p, 1.0, s)));
  }
  const auto [a, b] = fit_line(x, y);
  return {a, b};
}

RadialField truncated_bubble(const Params& p, double R, double lambda, int n) {
  if (!(R * lambda >= 10.0)) throw ValidationError("truncated_bubble: requires lambda R >= 10");
  const double N = p.N;
  const double amp = std::pow(lambda, 0.5 * (N - 2.0)) * p.constants.bubble_amp;
  auto U = [&](double r) { return amp * std::pow(1.0 + lambda * lambda * r * r, -0.5 * (N - 2.0)); };
  const double aR = U(R);
  const auto g = make_log_grid(1e-3 / lambda, R, n);
  auto f = sample(g, [&](double r) { return std::max(U(r) - aR, 0.0); },
                  std::numeric_limits<double>::infinity(), amp - aR);
  // The last node sits on the boundary, where the truncation vanishes exactly.
  std::vector<double> v = f.values();
  v.back() = 0.0;
  return RadialField(g, std::move(v), f.tail_exponent(), f.head_value());
}

BoundedDomainReport bounded_domain_experiment(const Params& p, double R, const std::vector<double>& lambdas) {
  if (!(R > 0.0)) throw ValidationError("bounded_domain_experiment: R must be positive");
  if (lambdas.empty()) throw ValidationError("bounded_domain_experiment: no lambdas");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] * R >= 10.0)) throw ValidationError("bounded_domain_experiment: requires lambda R >= 10");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
      throw ValidationError("bounded_domain_experiment: lambdas must increase");
  }
  BoundedDomainReport rep;
  rep.R = R;
  rep.lambdas = lambdas;
  const double q = p.q_weak;
  std::vector<double> logs, inv, scaled;
  for (double lam : lambdas) {
    const auto u = truncated_bubble(p, R, lam);
    const double d = deficit(u, p).deficit;
    const double wn = weak_norm(u, p.N, R, q);
    const double sn = strong_norm(u, p.N, q);
    rep.deficit.push_back(d);
    rep.weak_norm.push_back(wn);
    rep.strong_norm.push_back(sn);
    rep.weak_ratio.push_back(d / (wn * wn));
    rep.strong_ratio.push_back(d / (sn * sn));
    rep.tail_energy.push_back(tail_energy(p, R, lam));
    const double L = std::log(R * lam);
    logs.push_back(L);
    inv.push_back(1.0 / rep.strong_ratio.back());
    scaled.push_back(rep.strong_ratio.back() * L);
  }
  const auto [wmin, wmax] = std::minmax_element(rep.weak_ratio.begin(), rep.weak_ratio.end());
  rep.weak_floor = *wmin / *wmax;
  const double mean = std::accumulate(scaled.begin(), scaled.end(), 0.0) / scaled.size();
  for (double s : scaled) rep.strong_log_spread = std::max(rep.strong_log_spread, std::abs(s / mean - 1.0));
  if (lambdas.size() >= 2) {
    const auto [a, b] = fit_line(logs, inv);
    rep.inverse_ratio_slope = a;
    rep.inverse_ratio_intercept = b;
    std::vector<double> ll, lr;
    for (std::size_t i = 0; i < logs.size(); ++i) {
      ll.push_back(std::log(logs[i]));
      lr.push_back(std::log(rep.strong_ratio[i]));
    }
    rep.strong_log_power = -fit_line(ll, lr).first;
  }
  return rep;
}

}  // namespace nlsob
