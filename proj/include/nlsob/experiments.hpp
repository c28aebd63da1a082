#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlsob/params.hpp"
#include "nlsob/radial.hpp"

namespace nlsob {

struct GridSpec {
  double r_min = kDefaultRMin;
  double r_max = kDefaultRMax;
  int n = kDefaultGridN;
  RadialGrid make() const { return make_log_grid(r_min, r_max, n); }
};

/// Perturbation direction. Eigenfunction: the sector-0 eigenvector with the
/// given index (default: the first one above 2*_alpha). Random: seeded sum of
/// Gaussian bumps in log r.
struct DirectionSpec {
  enum class Kind { Eigenfunction, Random };
  Kind kind = Kind::Eigenfunction;
  int index = -1;
  std::uint64_t seed = 0;
  std::string label() const;
};

struct SweepConfig {
  Params params;
  std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  std::vector<DirectionSpec> directions;
  GridSpec grid;
  GridSpec spectral_grid{kDefaultRMin, kDefaultRMax, 1024};
  std::string output_path;
  int threads = 0;  // 0: hardware concurrency
};

struct SweepRow {
  std::string direction;
  double epsilon = 0.0;
  double deficit = 0.0;
  double dist = 0.0;
  double ratio = 0.0;
  std::string error;  // empty on success
};

struct SweepReport {
  std::vector<SweepRow> rows;  // ordered by (direction, epsilon)
  double mu_gap = 0.0;
  double b1_target = 0.0;        // 2 (mu_gap - 2*_alpha)
  double empirical_b1 = 0.0;     // min over directions of the ratio at the smallest epsilon
  bool gap_within_bound = false;  // mu_gap <= 2*_alpha + 0.55
};

/// RadialField of a seeded random bump direction on grid (not yet projected).
RadialField random_direction(const RadialGrid& grid, std::uint64_t seed);

SweepReport ratio_sweep(const SweepConfig& cfg);

/// int_{|x| >= R} |grad U_lambda|^2 by the incomplete beta reduction, checked
/// against quadrature of the gradient field; mismatch beyond 1e-6 throws.
double tail_energy(const Params& p, double R, double lambda);

/// The same integral by field quadrature only.
double tail_energy_quadrature(const Params& p, double R, double lambda);

struct PowerFit {
  double exponent = 0.0;
  double intercept = 0.0;
};

/// Least squares fit of log E against log(R lambda) for R lambda in [lo, hi].
PowerFit tail_energy_scaling(const Params& p, double lo, double hi, int points);

struct BoundedDomainReport {
  double R = 0.0;
  std::vector<double> lambdas;
  std::vector<double> deficit;
  std::vector<double> weak_norm;
  std::vector<double> strong_norm;
  std::vector<double> weak_ratio;
  std::vector<double> strong_ratio;
  std::vector<double> tail_energy;
  double weak_floor = 0.0;             // min / max of weak_ratio
  double strong_log_spread = 0.0;      // max |x / mean - 1| of strong_ratio * log(R lambda)
  double inverse_ratio_slope = 0.0;    // strong_ratio^{-1} ~ slope log(R lambda) + intercept
  double inverse_ratio_intercept = 0.0;
  double strong_log_power = 0.0;       // fitted k in strong_ratio ~ log(R lambda)^{-k}
};

/// Truncated bubble (U_lambda - U_lambda(R))_+ on B_R, per lambda.
RadialField truncated_bubble(const Params& p, double R, double lambda, int n = kDefaultGridN);

BoundedDomainReport bounded_domain_experiment(const Params& p, double R, const std::vector<double>& lambdas);

}  // namespace nlsob
