#include "conespec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "conespec/error.hpp"
#include "conespec/specfun.hpp"

namespace conespec::spectrum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxRadialIndex = 50;
constexpr int kModeBudget = 32;

void check_eps(double eps) {
  require(eps > 0.0 && eps <= kMaxEps,
          "cross-product solver: eps must lie in (0, " + std::to_string(kMaxEps) + "]");
}

double scan_step(double eps) {
  return eps == 0.0 ? kPi / 8.0 : std::min(kPi / 4.0, kPi * (1.0 - eps) / 8.0);
}

// Positive zeros in s of the radial characteristic function, in increasing
// order: at most `count` of them, none beyond s_limit.
std::vector<double> radial_zeros(double nu, double eps, int count, double s_limit) {
  std::function<double(double)> f;
  std::function<double(double)> df;
  double s0 = 0.0;
  if (eps == 0.0) {
    f = [nu](double s) { return specfun::bessel_jy(nu, s).j; };
    df = [nu](double s) { return specfun::bessel_jy(nu, s).jp; };
    s0 = std::max(0.1, 0.9 * nu);  // j_{nu,1} > nu
  } else {
    f = [nu, eps](double s) { return cross_product(nu, eps, s); };
    s0 = scan_step(eps);
  }
  const double step = scan_step(eps);
  // McMahon-type bound on the count-th zero, widened for large order.
  const double cap = ((count + 0.5 * nu + 1.0) * kPi + nu + 10.0) / (1.0 - eps);

  std::vector<double> zeros;
  double lo = s0;
  double flo = f(lo);
  while (static_cast<int>(zeros.size()) < count) {
    const double hi = lo + step;
    if (lo > s_limit) break;
    if (hi > cap) {
      fail(ErrorKind::Bracket, "radial zero scan exhausted on [" + std::to_string(s0) + ", " +
                                   std::to_string(cap) + "] after " +
                                   std::to_string(zeros.size()) + " zeros (nu=" +
                                   std::to_string(nu) + ")");
    }
    const double fhi = f(hi);
    if (std::signbit(flo) != std::signbit(fhi)) {
      const double z = df ? specfun::find_zero(f, df, lo, hi, {.abs_tol = 0.0})
                          : specfun::find_zero(f, lo, hi, {.abs_tol = 0.0});
      if (z <= s_limit) zeros.push_back(z);
    }
    lo = hi;
    flo = fhi;
  }
  return zeros;
}

EigenvalueRecord make_record(const AngularMode& mode, int k, double eps, double s) {
  EigenvalueRecord rec;
  rec.mode = mode;
  rec.radial_index = k;
  rec.eps = eps;
  rec.lambda = s * s;
  rec.residual = eps == 0.0 ? std::fabs(specfun::bessel_jy(mode.nu, s).j)
                            : std::fabs(cross_product(mode.nu, eps, s));
  return rec;
}

}  // namespace

double cross_product(double nu, double eps, double s) {
  const specfun::BesselJY outer = specfun::bessel_jy(nu, s);
  const specfun::BesselJY inner = specfun::bessel_jy(nu, eps * s);
  return (outer.j * inner.y - outer.y * inner.j) / std::hypot(inner.j, inner.y);
}

EigenvalueRecord unperturbed_eigen(const AngularMode& mode, int k) {
  require(k >= 1 && k <= kMaxRadialIndex, "unperturbed_eigen: k must lie in [1, 50]");
  const std::vector<double> z = radial_zeros(mode.nu, 0.0, k, kInf);
  return make_record(mode, k, 0.0, z.back());
}

EigenvalueRecord cross_product_eigen(const AngularMode& mode, double eps, int k) {
  check_eps(eps);
  require(k >= 1 && k <= kMaxRadialIndex, "cross_product_eigen: k must lie in [1, 50]");
  const std::vector<double> z = radial_zeros(mode.nu, eps, k, kInf);
  return make_record(mode, k, eps, z.back());
}

std::vector<EigenvalueRecord> track_branch(const AngularMode& mode, int k,
                                           const std::vector<double>& eps_grid) {
  require(!eps_grid.empty(), "track_branch: empty eps grid");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    check_eps(eps_grid[i]);
    if (i > 0) require(eps_grid[i] < eps_grid[i - 1], "track_branch: eps grid must decrease");
  }
  const double limit = unperturbed_eigen(mode, k).lambda;

  std::vector<EigenvalueRecord> out;
  out.reserve(eps_grid.size());
  EigenvalueRecord rec = cross_product_eigen(mode, eps_grid.front(), k);
  rec.limit_lambda = limit;
  out.push_back(rec);

  constexpr int kWindowSamples = 32;
  for (std::size_t i = 1; i < eps_grid.size(); ++i) {
    const double eps = eps_grid[i];
    const double s_prev = std::sqrt(out.back().lambda);
    const double half = 0.5 * kPi;  // half the asymptotic zero spacing in s
    const double lo = std::max(s_prev - half, 0.5 * s_prev);
    const double hi = s_prev + half;
    auto f = [&](double s) { return cross_product(mode.nu, eps, s); };

    std::vector<std::pair<double, double>> brackets;
    double a = lo;
    double fa = f(a);
    for (int j = 1; j <= kWindowSamples; ++j) {
      const double b = lo + (hi - lo) * j / kWindowSamples;
      const double fb = f(b);
      if (std::signbit(fa) != std::signbit(fb)) brackets.emplace_back(a, b);
      a = b;
      fa = fb;
    }
    if (brackets.empty()) {
      fail(ErrorKind::Bracket, "track_branch: branch lost at eps=" + std::to_string(eps));
    }
    if (brackets.size() > 1) {
      fail(ErrorKind::BranchJump, "track_branch: " + std::to_string(brackets.size()) +
                                      " zeros in the continuation window at eps=" +
                                      std::to_string(eps));
    }
    const double s = specfun::find_zero(f, brackets[0].first, brackets[0].second, {.abs_tol = 0.0});
    EigenvalueRecord next = make_record(mode, k, eps, s);
    next.limit_lambda = limit;
    out.push_back(next);
  }
  return out;
}

SpectrumListing spectrum_merge(const geometry::ConeGeometry& g, double eps, int n) {
  require(n >= 0 && n <= 64, "spectrum_merge: n must lie in [0, 64]");
  require(eps >= 0.0 && eps <= kMaxEps, "spectrum_merge: eps must lie in [0, 0.95]");
  SpectrumListing listing;
  listing.axisymmetric_sector = g.dim() >= 3;
  if (n == 0) return listing;

  // The first eigenvalue of each mode grows with l, so the n smallest values
  // involve at most n modes.
  const int mode_count = std::min(n, kModeBudget);
  const std::vector<AngularMode> modes = charval::sigma_beta(g, mode_count);

  auto less = [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.mode.l != b.mode.l) return a.mode.l < b.mode.l;
    return a.radial_index < b.radial_index;
  };

  std::vector<EigenvalueRecord>& all = listing.records;
  double bound = kInf;
  bool exhausted = true;
  for (const AngularMode& mode : modes) {
    const std::vector<double> zs = radial_zeros(mode.nu, eps, n, std::sqrt(bound));
    if (zs.empty()) {
      exhausted = false;
      break;
    }
    for (std::size_t k = 0; k < zs.size(); ++k) {
      all.push_back(make_record(mode, static_cast<int>(k) + 1, eps, zs[k]));
    }
    if (static_cast<int>(all.size()) >= n) {
      std::sort(all.begin(), all.end(), less);
      all.resize(n);
      bound = all.back().lambda;
    }
  }
  if (exhausted && static_cast<int>(modes.size()) < n) {
    fail(ErrorKind::Convergence, "spectrum_merge: angular mode budget of " +
                                     std::to_string(kModeBudget) + " exhausted");
  }
  std::sort(all.begin(), all.end(), less);
  if (static_cast<int>(all.size()) > n) all.resize(n);
  return listing;
}

RadialProfile radial_profile(const EigenvalueRecord& rec, int grid_size) {
  require(grid_size >= 16, "radial_profile: grid_size must be at least 16");
  const double nu = rec.mode.nu;
  const double s = std::sqrt(rec.lambda);
  const double eps = rec.eps;
  const double power = 1.0 - 0.5 * rec.mode.dim;

  double c1 = 1.0;
  double c2 = 0.0;
  if (eps > 0.0) {
    // Kernel of the inner boundary row; the outer row is then the residual.
    const specfun::BesselJY inner = specfun::bessel_jy(nu, eps * s);
    const double m = std::hypot(inner.j, inner.y);
    c1 = inner.y / m;
    c2 = -inner.j / m;
  }
  auto radial = [&](double r) {
    const specfun::BesselJY v = specfun::bessel_jy(nu, r * s);
    return std::pow(r, power) * (c1 * v.j + c2 * v.y);
  };

  RadialProfile prof;
  prof.mode = rec.mode;
  prof.eps = eps;
  prof.lambda = rec.lambda;
  prof.grid.resize(grid_size);
  prof.values.resize(grid_size);
  double peak = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double r = eps + (1.0 - eps) * (i + 1) / (grid_size + 1.0);
    prof.grid[i] = r;
    prof.values[i] = radial(r);
    if (std::fabs(prof.values[i]) > std::fabs(peak)) peak = prof.values[i];
  }
  if (peak == 0.0) fail(ErrorKind::Convergence, "radial_profile: identically zero profile");
  for (double& v : prof.values) v /= peak;

  prof.residual_outer = std::fabs(radial(1.0) / peak);
  prof.residual_inner = eps > 0.0 ? std::fabs(radial(eps) / peak) : 0.0;
  if (prof.residual_outer > 1e-8 || prof.residual_inner > 1e-8) {
    fail(ErrorKind::Convergence, "radial_profile: record does not satisfy its boundary conditions");
  }
  return prof;
}

double gradient_exponent(const AngularMode& mode) { return mode.l - 1.0; }

double integrability_threshold(const geometry::ConeGeometry& g, double l) {
  require(l > 0.0, "integrability_threshold: l must be positive");
  if (l >= 1.0) return kInf;
  return g.dim() / (1.0 - l);
}

IntegrabilityReport verify_integrability(const AngularMode& mode, const geometry::ConeGeometry& g,
                                         double p, const EigenvalueRecord& rec) {
  require(p >= 2.0, "verify_integrability: p must be at least 2");
  require(rec.eps == 0.0, "verify_integrability: expects an unperturbed eigenvalue record");
  require(mode.dim == g.dim(), "verify_integrability: mode and geometry dimensions differ");

  const int n = g.dim();
  const double nu = mode.nu;
  const double s = std::sqrt(rec.lambda);
  auto dR = [&](double r) {
    const specfun::BesselJY v = specfun::bessel_jy(nu, r * s);
    return (1.0 - 0.5 * n) * std::pow(r, -0.5 * n) * v.j + std::pow(r, 1.0 - 0.5 * n) * s * v.jp;
  };

  // log of the shell integral over [2^{-m-1}, 2^{-m}], scaled by |R'| at the
  // outer shell radius to stay inside double range.
  auto log_shell = [&](int m) {
    const double b = std::ldexp(1.0, -m);
    const double a = 0.5 * b;
    const double ref = std::fabs(dR(b));
    if (ref == 0.0 || !std::isfinite(ref)) {
      fail(ErrorKind::Inconclusive, "verify_integrability: degenerate derivative at shell " +
                                        std::to_string(m));
    }
    auto integrand = [&](double r) {
      return std::pow(std::fabs(dR(r)) / ref, p) * std::pow(r, n - 1);
    };
    const double val = boost::math::quadrature::gauss<double, 20>::integrate(integrand, a, b);
    return p * std::log(ref) + std::log(val);
  };

  constexpr int kDeepest = 60;
  constexpr int kInspected = 12;
  std::vector<double> exps;
  double prev = log_shell(kDeepest - kInspected - 1);
  for (int m = kDeepest - kInspected; m < kDeepest; ++m) {
    const double cur = log_shell(m);
    exps.push_back(-(cur - prev) / std::log(2.0));
    prev = cur;
  }
  const auto [mn, mx] = std::minmax_element(exps.begin(), exps.end());
  double mean = 0.0;
  for (double e : exps) mean += e;
  mean /= static_cast<double>(exps.size());

  IntegrabilityReport rep;
  rep.tail_exponent = mean;
  rep.spread = *mx - *mn;
  rep.levels = kInspected;
  if (rep.spread > 0.05) {
    fail(ErrorKind::Inconclusive, "verify_integrability: shell ratios not settled (spread " +
                                      std::to_string(rep.spread) + ")");
  }
  rep.verdict = mean > 0.02 ? Integrability::Finite : Integrability::Divergent;
  return rep;
}

}  // namespace conespec::spectrum
