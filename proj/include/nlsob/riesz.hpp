#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "nlsob/params.hpp"
#include "nlsob/radial.hpp"

namespace nlsob {

inline constexpr int kMaxEll = 3;

/// Angular profile of the Riesz kernel in sector ell. By homogeneity
/// k_ell(r, s) = r^{-alpha} kappa(log(s / r)); this evaluates kappa.
class KernelProfile {
 public:
  KernelProfile(int N, double alpha, int ell);
  double operator()(double y) const;
  int ell() const { return ell_; }

 private:
  double positive(double y) const;
  double gegenbauer(double t) const;

  int N_;
  double alpha_;
  int ell_;
  double lambda_;
  double g_norm_;
  double omega_;
};

/// Kernel k_ell(r, s) at a single point.
double riesz_kernel(const Params& p, int ell, double r, double s);

/// Discretized sector kernel on a log grid. The potential of f is
///   g_i = r_i^{-alpha} sum_j W_ij f_j r_j^N + head and tail corrections,
/// where W comes from quintic product integration in log r.
class AngularKernel {
 public:
  AngularKernel(const Params& p, int ell, const RadialGrid& grid);

  int ell() const { return ell_; }
  const Params& params() const { return params_; }
  const RadialGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& matrix() const { return W_; }

  /// k_ell(r_i, s_j) off the diagonal.
  double table(int i, int j) const;

  /// Toeplitz profile kappa((j - i) h) for offsets -(n-1)..(n-1), zero offset omitted.
  std::vector<std::pair<double, double>> profile() const;

  RadialField apply(const RadialField& f) const;

 private:
  struct Cell {
    std::vector<double> y;
    std::vector<double> w;
    std::vector<double> kappa;
  };
  double cell_integral(int m, double beta) const;
  double head_integral_beyond() const;
  double tail_integral_beyond(double beta) const;

  Params params_;
  int ell_;
  RadialGrid grid_;
  KernelProfile kappa_;
  std::vector<Cell> cells_;  // index m + n - 1 for m in [-(n-1), n-2]
  std::vector<double> head_;  // H_i = int_{-inf}^{-i h} kappa e^{N y} dy
  Eigen::MatrixXd W_;
};

/// Cached kernel for (N, alpha, ell, grid spacing, size).
std::shared_ptr<const AngularKernel> angular_kernel(const Params& p, int ell, const RadialGrid& grid);

/// g(r) = int_0^inf k_ell(r, s) f(s) s^{N-1} ds on the grid of f.
RadialField riesz_potential(const RadialField& f, const Params& p, int ell = 0);

/// omega_{N-1} int (potential of f) g r^{N-1} dr, symmetrized.
double interaction_energy(const RadialField& f, const RadialField& g, const Params& p, int ell = 0);

}  // namespace nlsob
