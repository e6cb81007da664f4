#pragma once

#include "conespec/geometry.hpp"

namespace conespec::oracle {

/// Finite-difference settings. Node counts are intervals per direction.
struct FdConfig {
  int radial_nodes = 4096;
  int angular_nodes = 128;
  bool richardson = false;
  double shift = 0.0;  // polar solver: converge to the eigenvalue nearest this shift

  void validate() const;
};

struct RadialFdResult {
  double value = 0.0;         // extrapolated when richardson is set, else raw
  double raw = 0.0;           // finest grid
  double coarse = 0.0;        // half the nodes (0 unless richardson)
  double coarsest = 0.0;      // a quarter of the nodes (0 unless richardson)
  double observed_order = 0.0;  // log2 of successive differences (0 unless richardson)
  double residual = 0.0;
  int iterations = 0;
};

/// k-th eigenvalue of -u'' + (nu^2 - 1/4) u / r^2 on (eps, 1), nu = l + (N-2)/2.
RadialFdResult radial_fd_solve(const geometry::ConeGeometry& g, double l, double eps, int k,
                               const FdConfig& cfg);

double radial_fd_eigen(const geometry::ConeGeometry& g, double l, double eps, int k,
                       const FdConfig& cfg);

struct PolarFdResult {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int unknowns = 0;
};

/// First Dirichlet eigenvalue of the planar sector {eps < r < 1, |theta| < beta}.
PolarFdResult polar_fd_solve(double beta, double eps, const FdConfig& cfg);

double polar_fd_eigen(double beta, double eps, const FdConfig& cfg);

}  // namespace conespec::oracle
