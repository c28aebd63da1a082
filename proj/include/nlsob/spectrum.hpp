#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nlsob/params.hpp"
#include "nlsob/radial.hpp"

namespace nlsob {

/// Discretized forms of the sector-ell linearized eigenproblem A v = mu B v
/// on nodal values v_i = v(r_i). A: Dirichlet form plus the local potential
/// term; B: nonlocal term plus the same local term.
struct SectorOperator {
  int ell = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd T;          // nonlocal part of B
  Eigen::VectorXd potential;  // W(r_i)
  RadialGrid grid;
  Params params;
};

struct SpectrumReport {
  int ell = 0;                       // -1 for a merged report
  std::vector<double> eigenvalues;   // ascending
  double mu_gap = 0.0;               // NaN when no eigenvalue above 2*_alpha was resolved
  int k_count = 0;
  double b1_candidate = 0.0;
  Eigen::MatrixXd eigenvectors;      // columns, B-normalized (sector reports)
};

SectorOperator assemble_sector(const Params& p, int ell, const RadialGrid& grid);

/// Rayleigh quotient v^T A v / v^T B v of nodal values.
double rayleigh_quotient(const SectorOperator& op, const Eigen::VectorXd& v);

/// B-form cosine between two nodal vectors.
double b_cosine(const SectorOperator& op, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

SpectrumReport solve_generalized(const SectorOperator& op, int k);

/// Number of degree-ell spherical harmonics in R^N.
int harmonic_multiplicity(int N, int ell);

struct GapReport {
  SpectrumReport merged;               // eigenvalues repeated by multiplicity
  std::vector<SpectrumReport> sectors;  // ell = 0, 1, 2
  bool gap_within_bound = false;        // mu_gap <= 2*_alpha + 0.55
};

GapReport spectral_gap(const Params& p, const RadialGrid& grid, int per_sector = 8);
GapReport spectral_gap(const Params& p);

}  // namespace nlsob
