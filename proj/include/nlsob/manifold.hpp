#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlsob/params.hpp"
#include "nlsob/radial.hpp"

namespace nlsob {

/// Coordinates (c, lambda, z) on the manifold of extremals; radial inputs use z = 0.
struct BubbleParams {
  double c = 1.0;
  double lambda = 1.0;
  std::vector<double> z;
};

struct Decomposition {
  BubbleParams best;
  double d = 0.0;
  RadialField w;
};

/// c lambda^{(N-2)/2} U(lambda r).
RadialField bubble(const Params& p, const BubbleParams& bp, const RadialGrid& grid);

/// d/d lambda of lambda^{(N-2)/2} U(lambda r), computed analytically.
RadialField bubble_dlambda(const Params& p, double lambda, const RadialGrid& grid);

/// Radial profile of the translation mode: d/dr of U_lambda.
RadialField bubble_dr(const Params& p, double lambda, const RadialGrid& grid);

/// Tangent directions as (ell, profile), each with unit Dirichlet norm in its sector.
std::vector<std::pair<int, RadialField>> tangent_basis(const Params& p, double lambda, const RadialGrid& grid);

/// Sup-norm residual of the linearized equation at U_lambda in sector ell,
/// relative to the sup of the Laplacian term. Kernel elements give ~0.
double linearized_residual(const RadialField& v, const Params& p, double lambda, int ell);

Decomposition dist_to_manifold(const RadialField& u, const Params& p);

/// Remove the h1 projections onto the sector-ell tangent directions and normalize.
RadialField project_orthogonal(const RadialField& w, const Params& p, double lambda, int ell);

}  // namespace nlsob
