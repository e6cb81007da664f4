#pragma once

#include <optional>
#include <vector>

#include "conespec/charval.hpp"
#include "conespec/geometry.hpp"

namespace conespec::spectrum {

using charval::AngularMode;

/// One Dirichlet eigenvalue of the cone (eps = 0) or the truncated cone.
struct EigenvalueRecord {
  AngularMode mode;
  int radial_index = 1;
  double eps = 0.0;
  double lambda = 0.0;
  std::optional<double> limit_lambda;  // lambda_* of a tracked branch
  double residual = 0.0;               // normalized defining-equation residual
};

struct RadialProfile {
  AngularMode mode;
  double eps = 0.0;
  double lambda = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
  double residual_inner = 0.0;  // |R(eps)| after normalization (R(0) for eps = 0)
  double residual_outer = 0.0;  // |R(1)| after normalization
};

/// Largest eps accepted by the cross-product solver.
inline constexpr double kMaxEps = 0.95;

/// Normalized cross product [J(s) Y(eps s) - Y(s) J(eps s)] / |(J, Y)(eps s)|.
double cross_product(double nu, double eps, double s);

/// lambda = j_{nu,k}^2.
EigenvalueRecord unperturbed_eigen(const AngularMode& mode, int k);

/// k-th zero in lambda of the Bessel cross product.
EigenvalueRecord cross_product_eigen(const AngularMode& mode, double eps, int k);

/// Continuation of the k-th branch along a strictly decreasing eps grid.
std::vector<EigenvalueRecord> track_branch(const AngularMode& mode, int k,
                                           const std::vector<double>& eps_grid);

struct SpectrumListing {
  std::vector<EigenvalueRecord> records;
  /// Set for N >= 3, where only the axisymmetric angular family is merged.
  bool axisymmetric_sector = false;
};

/// The n smallest eigenvalues over Sigma_beta modes and radial indices.
SpectrumListing spectrum_merge(const geometry::ConeGeometry& g, double eps, int n);

RadialProfile radial_profile(const EigenvalueRecord& rec, int grid_size);

/// Growth exponent l - 1 of dR/dr at the vertex.
double gradient_exponent(const AngularMode& mode);

/// Supremum of p with grad u in L^p: N/(1-l) for l < 1, +infinity otherwise.
double integrability_threshold(const geometry::ConeGeometry& g, double l);

enum class Integrability { Finite, Divergent };

struct IntegrabilityReport {
  Integrability verdict = Integrability::Finite;
  double tail_exponent = 0.0;  // -log2 of the increment ratio between dyadic shells
  double spread = 0.0;         // variation of that exponent across the inspected shells
  int levels = 0;
};

/// Quadrature of |R'|^p r^{N-1} over dyadic shells [2^{-m-1}, 2^{-m}].
IntegrabilityReport verify_integrability(const AngularMode& mode, const geometry::ConeGeometry& g,
                                         double p, const EigenvalueRecord& rec);

}  // namespace conespec::spectrum
