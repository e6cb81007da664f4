#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conespec/charval.hpp"
#include "conespec/geometry.hpp"
#include "conespec/spectrum.hpp"

namespace conespec::asymptotics {

using charval::AngularMode;
using spectrum::EigenvalueRecord;

/// A point of G(delta, lambda) = F(delta^{1/(2 nu)}, lambda).
struct BranchPoint {
  double nu = 1.0;
  double delta = 0.0;  // eps^{2 nu}
  double lambda = 1.0;

  static BranchPoint from_eps(double nu, double eps, double lambda);
};

struct GPartials {
  double d_lambda = 0.0;
  double d_delta = 0.0;
};

enum class CoefficientKind { A, B };  // B: first eigenvalue (l = l_beta, k = 1)

/// Leading term of lambda(eps) - lambda_* as a power of the removed volume.
struct ExpansionData {
  AngularMode mode;
  double limit_lambda = 0.0;
  double coefficient = 0.0;
  double exponent = 0.0;     // (N + 2l - 2) / N
  double cap_measure = 0.0;  // sigma_beta
  CoefficientKind kind = CoefficientKind::A;
};

struct RatePoint {
  double log_volume = 0.0;
  double log_gap = 0.0;
};

struct RateFit {
  std::vector<RatePoint> points;
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

/// J/Y(sqrt(lambda)) - J/Y(eps sqrt(lambda)); eps = 0 drops the second term.
double eval_F(double nu, double eps, double lambda);

double eval_G(const BranchPoint& p);

/// Analytic dG/dlambda and dG/ddelta for delta > 0.
GPartials eval_G_partials(const BranchPoint& p);

/// Closed-form limits of the partials at (0, lambda_*).
GPartials eval_G_limits(double nu, double limit_lambda);

ExpansionData coefficient_a(const geometry::ConeGeometry& g, const AngularMode& mode,
                            double limit_lambda);

/// a * V(eps)^exponent with V(eps) = sigma_beta eps^N / N.
double predicted_gap(const ExpansionData& data, double eps);

/// Relative noise floor below which a gap lambda(eps) - lambda_* is rejected.
inline constexpr double kNoiseFloor = 1e-9;

/// Least squares of log gap against log volume.
RateFit rate_fit(const std::vector<EigenvalueRecord>& branch, const std::vector<double>& volumes);

/// Fit of explicit (volume, gap) pairs; same preconditions as rate_fit.
RateFit rate_fit_points(const std::vector<double>& volumes, const std::vector<double>& gaps);

struct GridOptions {
  int points = 8;
  double eps_max = 0.05;
  /// Smallest eps keeps the predicted gap this many noise floors above zero.
  double floor_margin = 100.0;
};

/// Geometric eps grid, decreasing, adapted to the predicted gap of `data`.
std::vector<double> default_eps_grid(const ExpansionData& data, const GridOptions& opts = {});

struct SharpnessReport {
  int dim = 2;
  double beta = 0.0;
  double l_beta = 0.0;
  charval::Method l_method = charval::Method::ClosedForm;
  double p_sup = 0.0;
  double stability_exponent_limit = 0.0;  // lim_{p -> p_sup} 1 - 2/p
  double analytic_exponent = 0.0;         // (N + 2 l_beta - 2) / N
  double limit_lambda = 0.0;
  double coefficient_b = 0.0;
  std::vector<double> eps_grid;
  std::vector<double> volumes;
  std::vector<double> gaps;
  std::optional<RateFit> fit;
  double fitted_coefficient = 0.0;
  bool match = false;
  bool improvement_excluded = false;  // empirical slope <= analytic + tolerance
  double tolerance = 0.02;
  std::optional<double> reference_limit;          // 1/N for N = 2, 3
  double corollary_threshold = 0.0;               // 1/2 for N = 2, 1/3 otherwise
  std::string note;
};

/// Exponent bookkeeping and empirical rate for beta in (pi/2, pi).
SharpnessReport sharpness_report(const geometry::ConeGeometry& g, double tolerance = 0.02,
                                 const GridOptions& grid = {});

}  // namespace conespec::asymptotics
