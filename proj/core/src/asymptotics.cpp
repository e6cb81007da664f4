#include "conespec/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "conespec/error.hpp"
#include "conespec/specfun.hpp"

namespace conespec::asymptotics {

namespace {

constexpr double kPi = std::numbers::pi;

double jy_ratio(double nu, double t) {
  const specfun::BesselJY v = specfun::bessel_jy(nu, t);
  if (std::fabs(v.y) <= 1e-10 * std::hypot(v.j, v.y)) {
    std::ostringstream os;
    os << "J/Y ratio undefined: Y_" << nu << " vanishes near t=" << t;
    fail(ErrorKind::Domain, os.str());
  }
  return v.j / v.y;
}

void check_limit(double nu, double limit_lambda) {
  require(limit_lambda > 0.0, "limit_lambda must be positive");
  const double j = specfun::bessel_jy(nu, std::sqrt(limit_lambda)).j;
  if (std::fabs(j) > 1e-8) {
    std::ostringstream os;
    os << "limit_lambda=" << limit_lambda << " is not a zero of J_" << nu << "(sqrt(lambda))";
    fail(ErrorKind::Domain, os.str());
  }
}

}  // namespace

BranchPoint BranchPoint::from_eps(double nu, double eps, double lambda) {
  require(eps >= 0.0, "BranchPoint: eps must be nonnegative");
  return {nu, std::pow(eps, 2.0 * nu), lambda};
}

double eval_F(double nu, double eps, double lambda) {
  require(lambda > 0.0, "eval_F: lambda must be positive");
  require(eps >= 0.0 && eps < 1.0, "eval_F: eps must lie in [0, 1)");
  const double s = std::sqrt(lambda);
  const double outer = jy_ratio(nu, s);
  return eps == 0.0 ? outer : outer - jy_ratio(nu, eps * s);
}

double eval_G(const BranchPoint& p) {
  require(p.delta >= 0.0, "eval_G: delta must be nonnegative");
  return eval_F(p.nu, std::pow(p.delta, 0.5 / p.nu), p.lambda);
}

GPartials eval_G_partials(const BranchPoint& p) {
  require(p.delta > 0.0, "eval_G_partials: delta must be positive; use eval_G_limits at 0");
  require(p.lambda > 0.0, "eval_G_partials: lambda must be positive");
  const double s = std::sqrt(p.lambda);
  const double y_outer = specfun::bessel_y(p.nu, s);
  const double y_inner = specfun::bessel_y(p.nu, std::pow(p.delta, 0.5 / p.nu) * s);
  GPartials out;
  out.d_lambda = (-1.0 / (y_outer * y_outer) + 1.0 / (y_inner * y_inner)) / (kPi * p.lambda);
  out.d_delta = 1.0 / (p.nu * kPi * p.delta * y_inner * y_inner);
  return out;
}

GPartials eval_G_limits(double nu, double limit_lambda) {
  check_limit(nu, limit_lambda);
  const double y = specfun::bessel_y(nu, std::sqrt(limit_lambda));
  GPartials out;
  out.d_lambda = -1.0 / (kPi * limit_lambda * y * y);
  out.d_delta = std::exp(std::log(kPi) - std::log(nu) - 2.0 * std::lgamma(nu) +
                         nu * std::log(0.25 * limit_lambda));
  return out;
}

ExpansionData coefficient_a(const geometry::ConeGeometry& g, const AngularMode& mode,
                            double limit_lambda) {
  require(g.dim() == mode.dim, "coefficient_a: mode and geometry dimensions differ");
  check_limit(mode.nu, limit_lambda);
  const int n = g.dim();
  const double nu = mode.nu;
  const double sigma = geometry::cap_measure(g);
  const double y = specfun::bessel_y(nu, std::sqrt(limit_lambda));
  const double q = 2.0 * nu / n;
  const double log_a = 2.0 * std::log(kPi) + q * std::log(static_cast<double>(n)) +
                       (nu + 1.0) * std::log(limit_lambda) + 2.0 * std::log(std::fabs(y)) -
                       std::log(nu) - nu * std::log(4.0) - q * std::log(sigma) -
                       2.0 * std::lgamma(nu);

  ExpansionData d;
  d.mode = mode;
  d.limit_lambda = limit_lambda;
  d.coefficient = std::exp(log_a);
  d.exponent = (n + 2.0 * mode.l - 2.0) / n;
  d.cap_measure = sigma;
  if (mode.index == 1) {
    const double first = spectrum::unperturbed_eigen(mode, 1).lambda;
    if (std::fabs(first - limit_lambda) <= 1e-8 * limit_lambda) d.kind = CoefficientKind::B;
  }
  return d;
}

double predicted_gap(const ExpansionData& data, double eps) {
  require(eps >= 0.0, "predicted_gap: eps must be nonnegative");
  if (eps == 0.0) return 0.0;
  const int n = data.mode.dim;
  const double volume = data.cap_measure * std::pow(eps, n) / n;
  return data.coefficient * std::pow(volume, data.exponent);
}

RateFit rate_fit_points(const std::vector<double>& volumes, const std::vector<double>& gaps) {
  require(volumes.size() == gaps.size(), "rate_fit: volumes and gaps differ in length");
  require(volumes.size() >= 4, "rate_fit: at least 4 points required");
  RateFit fit;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    require(volumes[i] > 0.0 && gaps[i] > 0.0, "rate_fit: volumes and gaps must be positive");
    const RatePoint pt{std::log(volumes[i]), std::log(gaps[i])};
    fit.points.push_back(pt);
    sx += pt.log_volume;
    sy += pt.log_gap;
  }
  const double m = static_cast<double>(fit.points.size());
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const RatePoint& pt : fit.points) {
    sxx += (pt.log_volume - mx) * (pt.log_volume - mx);
    sxy += (pt.log_volume - mx) * (pt.log_gap - my);
  }
  require(sxx > 0.0, "rate_fit: volumes must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const RatePoint& pt : fit.points) {
    const double r = std::fabs(pt.log_gap - (fit.intercept + fit.slope * pt.log_volume));
    fit.max_residual = std::max(fit.max_residual, r);
  }
  return fit;
}

RateFit rate_fit(const std::vector<EigenvalueRecord>& branch, const std::vector<double>& volumes) {
  require(branch.size() == volumes.size(), "rate_fit: branch and volumes differ in length");
  require(branch.size() >= 4, "rate_fit: at least 4 points required");
  std::vector<double> gaps;
  std::ostringstream below;
  int rejected = 0;
  for (const EigenvalueRecord& rec : branch) {
    require(rec.limit_lambda.has_value(), "rate_fit: records must carry limit_lambda");
    const double gap = rec.lambda - *rec.limit_lambda;
    if (!(gap > kNoiseFloor * *rec.limit_lambda)) {
      below << (rejected++ ? ", " : "") << "eps=" << rec.eps << " gap=" << gap;
    }
    gaps.push_back(gap);
  }
  if (rejected > 0) {
    fail(ErrorKind::NoiseFloor, "rate_fit: gaps at or below the noise floor: " + below.str());
  }
  return rate_fit_points(volumes, gaps);
}

std::vector<double> default_eps_grid(const ExpansionData& data, const GridOptions& opts) {
  require(opts.points >= 4, "default_eps_grid: at least 4 points");
  require(opts.eps_max > 0.0 && opts.eps_max < 1.0, "default_eps_grid: eps_max must lie in (0, 1)");
  const int n = data.mode.dim;
  const double floor_gap = opts.floor_margin * kNoiseFloor * data.limit_lambda;
  const double v_min = std::pow(floor_gap / data.coefficient, 1.0 / data.exponent);
  double eps_min = std::max(1e-7, std::pow(n * v_min / data.cap_measure, 1.0 / n));
  double eps_max = opts.eps_max;
  if (eps_min > 0.25 * eps_max) {
    eps_max = std::min(0.5, 4.0 * eps_min);
    require(eps_min < eps_max, "default_eps_grid: predicted gaps too small for any usable grid");
  }
  std::vector<double> grid(opts.points);
  for (int i = 0; i < opts.points; ++i) {
    grid[i] = eps_max * std::pow(eps_min / eps_max, static_cast<double>(i) / (opts.points - 1));
  }
  return grid;
}

SharpnessReport sharpness_report(const geometry::ConeGeometry& g, double tolerance,
                                 const GridOptions& grid) {
  const double beta = g.half_angle();
  if (!(beta > 0.5 * kPi)) {
    fail(ErrorKind::Refusal,
         "sharpness_report: beta <= pi/2 gives l_beta >= 1 and bounded gradients; the estimate "
         "concerns the singular-vertex regime beta in (pi/2, pi)");
  }
  SharpnessReport rep;
  rep.dim = g.dim();
  rep.beta = beta;
  rep.tolerance = tolerance;
  const charval::CharacteristicValue cv = charval::characteristic_value_auto(g);
  rep.l_beta = cv.value;
  rep.l_method = cv.method;
  const int n = g.dim();
  rep.p_sup = n / (1.0 - rep.l_beta);
  rep.stability_exponent_limit = 1.0 - 2.0 / rep.p_sup;
  rep.analytic_exponent = (n + 2.0 * rep.l_beta - 2.0) / n;
  if (n == 2 || n == 3) rep.reference_limit = 1.0 / n;
  rep.corollary_threshold = n == 2 ? 0.5 : 1.0 / 3.0;

  if (cv.method == charval::Method::Asymptotic) {
    rep.note = "l_beta from the beta -> pi asymptotic law; empirical rate not computed";
    return rep;
  }

  const AngularMode mode = charval::make_mode(n, rep.l_beta, 1);
  rep.limit_lambda = spectrum::unperturbed_eigen(mode, 1).lambda;
  const ExpansionData data = coefficient_a(g, mode, rep.limit_lambda);
  rep.coefficient_b = data.coefficient;
  rep.eps_grid = default_eps_grid(data, grid);
  const std::vector<EigenvalueRecord> branch = spectrum::track_branch(mode, 1, rep.eps_grid);
  for (const EigenvalueRecord& rec : branch) {
    rep.volumes.push_back(data.cap_measure * std::pow(rec.eps, n) / n);
    rep.gaps.push_back(rec.lambda - rep.limit_lambda);
  }
  rep.fit = rate_fit(branch, rep.volumes);
  rep.fitted_coefficient = std::exp(rep.fit->intercept);
  rep.match = std::fabs(rep.fit->slope - rep.analytic_exponent) <= tolerance;
  rep.improvement_excluded = rep.fit->slope <= rep.analytic_exponent + tolerance;
  return rep;
}

}  // namespace conespec::asymptotics
