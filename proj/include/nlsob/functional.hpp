#pragma once

#include <limits>

#include "nlsob/params.hpp"
#include "nlsob/radial.hpp"

namespace nlsob {

struct DeficitReport {
  double grad_energy = 0.0;
  double hls_energy = 0.0;
  double deficit = 0.0;
  double dist = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
};

/// D(u) = int (|x|^{-alpha} * |u|^p) |u|^p with p = 2*_alpha.
double hls_energy(const RadialField& u, const Params& p);

/// ||grad u||^2 - S_HLS D(u)^{1/p}; dist and ratio are left unset.
DeficitReport deficit(const RadialField& u, const Params& p);

/// Relative sup-norm of -Laplace u - (|x|^{-alpha} * |u|^p)|u|^{p-2}u over
/// interior nodes, normalized by the sup of the nonlinear term.
double el_residual(const RadialField& u, const Params& p);

/// sup over centered balls B_rho, rho <= R, of int_{B_rho}|u| / |B_rho|^{(q-1)/q}.
/// Requires |u| radially nonincreasing on [0, R].
double weak_norm(const RadialField& u, int N, double R, double q);

/// (int |u|^q)^{1/q}.
double strong_norm(const RadialField& u, int N, double q);

}  // namespace nlsob
