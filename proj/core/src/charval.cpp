#include "conespec/charval.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "conespec/error.hpp"
#include "conespec/specfun.hpp"

namespace conespec::charval {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kScanStep = 0.05;
constexpr double kScanStart = 1e-6;
constexpr double kScanLimit = 50.0;

}  // namespace

AngularMode make_mode(int dim, double l, int index) {
  require(dim >= 2, "AngularMode: dimension must be at least 2");
  require(l > 0.0, "AngularMode: l must be positive");
  require(index >= 1, "AngularMode: index is 1-based");
  return {dim, l, 0.5 * (dim + 2.0 * l - 2.0), index};
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::LegendreRoot: return "legendre-root";
    case Method::Asymptotic: return "asymptotic";
  }
  return "unknown";
}

std::vector<double> legendre_roots(const geometry::ConeGeometry& g, int count, double l_max) {
  require(count >= 1, "legendre_roots: count must be positive");
  const double mu = g.mu();
  const double x = std::cos(g.half_angle());
  auto f = [mu, x](double l) { return specfun::legendre_p(-mu, l + mu, x); };

  std::vector<double> roots;
  double lo = kScanStart;
  double flo = f(lo);
  for (int i = 1; static_cast<int>(roots.size()) < count; ++i) {
    const double hi = i * kScanStep;
    if (hi > l_max) {
      fail(ErrorKind::Bracket, "legendre_roots: found " + std::to_string(roots.size()) + " of " +
                                   std::to_string(count) + " zeros on (0, " +
                                   std::to_string(l_max) + "]");
    }
    const double fhi = f(hi);
    if (fhi == 0.0) {
      roots.push_back(hi);
    } else if (flo != 0.0 && std::signbit(flo) != std::signbit(fhi)) {
      roots.push_back(specfun::find_zero(f, lo, hi, {.abs_tol = 1e-13}));
    }
    lo = hi;
    flo = fhi;
  }
  return roots;
}

double characteristic_value(const geometry::ConeGeometry& g) {
  const double beta = g.half_angle();
  if (g.dim() == 2) return kPi / (2.0 * beta);
  if (beta > kPi - kLegendreBetaGap) {
    fail(ErrorKind::Domain, "characteristic_value: beta within " + std::to_string(kLegendreBetaGap) +
                                " of pi; use the asymptotic law");
  }
  const double l = legendre_roots(g, 1, kScanLimit).front();
  if (g.dim() == 4) {
    const double closed = (kPi - beta) / beta;
    if (std::fabs(l - closed) > 1e-6) {
      fail(ErrorKind::Convergence, "characteristic_value: N=4 Legendre root " + std::to_string(l) +
                                       " disagrees with (pi-beta)/beta");
    }
  }
  return l;
}

CharacteristicValue characteristic_value_auto(const geometry::ConeGeometry& g) {
  if (g.dim() == 2) return {characteristic_value(g), Method::ClosedForm};
  if (g.half_angle() > kPi - kLegendreBetaGap) {
    return {characteristic_asymptotic(g), Method::Asymptotic};
  }
  return {characteristic_value(g), Method::LegendreRoot};
}

double characteristic_asymptotic(const geometry::ConeGeometry& g) {
  const int n = g.dim();
  const double gap = kPi - g.half_angle();
  if (n == 2) fail(ErrorKind::Domain, "characteristic_asymptotic: N=2 has the exact pi/(2 beta)");
  require(gap < 0.2, "characteristic_asymptotic: requires beta > pi - 0.2");
  if (n == 3) return 1.0 / (2.0 * std::log(2.0 / gap));
  const double c = std::exp(std::lgamma(n - 2.0) - std::lgamma(0.5 * (n - 1)) -
                            std::lgamma(0.5 * (n - 3)));
  return c * std::pow(0.5 * gap, n - 3);
}

std::vector<AngularMode> sigma_beta(const geometry::ConeGeometry& g, int count) {
  require(count >= 1 && count <= 32, "sigma_beta: count must lie in [1, 32]");
  std::vector<AngularMode> modes;
  modes.reserve(count);
  if (g.dim() == 2) {
    for (int k = 1; k <= count; ++k) {
      modes.push_back(make_mode(2, k * kPi / (2.0 * g.half_angle()), k));
    }
    return modes;
  }
  if (g.half_angle() > kPi - kLegendreBetaGap) {
    fail(ErrorKind::Domain, "sigma_beta: beta too close to pi for the Legendre path");
  }
  const double l_max = kScanLimit + (count + 1) * kPi / g.half_angle();
  const std::vector<double> roots = legendre_roots(g, count, l_max);
  for (int k = 0; k < count; ++k) modes.push_back(make_mode(g.dim(), roots[k], k + 1));
  return modes;
}

}  // namespace conespec::charval
