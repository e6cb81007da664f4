#include "conespec/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "conespec/error.hpp"

namespace conespec::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

double norm_tail(Point x) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

double ball_volume(int dim, double radius) {
  return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0) * std::pow(radius, dim);
}

}  // namespace

ConeGeometry::ConeGeometry(int dim, double half_angle)
    : dim_(dim), half_angle_(half_angle), mu_((dim - 3) / 2.0) {
  require(dim >= 2, "ConeGeometry: dimension must be at least 2");
  require(half_angle > 0.0 && half_angle < kPi, "ConeGeometry: half-angle must lie in (0, pi)");
}

PerturbedCone::PerturbedCone(ConeGeometry base, double eps, CutVariant variant)
    : base_(base), eps_(eps), variant_(variant) {
  require(eps >= 0.0 && eps < 1.0, "PerturbedCone: eps must lie in [0, 1)");
  if (variant == CutVariant::LipschitzCut) {
    require(eps < 0.5, "PerturbedCone: the Lipschitz variant requires eps < 1/2");
  }
}

double cap_measure(const ConeGeometry& g) {
  const int n = g.dim();
  const double beta = g.half_angle();
  if (n == 2) return 2.0 * beta;
  const double sphere = 2.0 * std::pow(kPi, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1));
  auto integrand = [n](double t) { return std::pow(std::sin(t), n - 2); };
  double err = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, beta, 15, 1e-13, &err);
  return sphere * integral;
}

double removed_volume(const PerturbedCone& p) {
  if (p.variant() != CutVariant::ExactCut) {
    fail(ErrorKind::Domain, "removed_volume: only the exact cut has a closed form");
  }
  const int n = p.base().dim();
  return cap_measure(p.base()) * std::pow(p.eps(), n) / n;
}

double inclusion_constant(double beta) {
  require(beta > 0.0 && beta < kPi, "inclusion_constant: beta must lie in (0, pi)");
  // 1 - cos(beta) written as 2 sin^2(beta/2) to avoid cancellation at small beta
  return std::sin(beta) / (2.0 * std::sin(0.5 * beta));
}

double lipschitz_profile(double beta, double eps, double xbar_norm) {
  if (xbar_norm <= eps * std::sin(beta)) return eps - xbar_norm * std::tan(0.5 * beta);
  return xbar_norm / std::tan(beta);
}

bool contains(const PerturbedCone& p, Point x) {
  const ConeGeometry& g = p.base();
  require(static_cast<int>(x.size()) == g.dim(), "contains: point dimension mismatch");
  const double xbar = norm_tail(x);
  const double r = std::hypot(x[0], xbar);
  if (!(r < 1.0)) return false;
  if (p.variant() == CutVariant::ExactCut) {
    if (!(r > p.eps())) return false;
    return std::atan2(xbar, x[0]) < g.half_angle();
  }
  return x[0] > lipschitz_profile(g.half_angle(), p.eps(), xbar);
}

McEstimate mc_removed_volume(const PerturbedCone& p, std::int64_t samples, std::uint64_t seed) {
  if (p.variant() != CutVariant::LipschitzCut) {
    fail(ErrorKind::Domain, "mc_removed_volume: expects the Lipschitz variant");
  }
  require(samples >= 10000, "mc_removed_volume: at least 10^4 samples required");
  if (p.eps() == 0.0) return {};

  const ConeGeometry& g = p.base();
  const int n = g.dim();
  const PerturbedCone whole(g, 0.0, CutVariant::ExactCut);

  // Omega_beta \ Omega~_beta(eps) lies inside Omega_beta \ Omega_beta(eps),
  // hence inside the ball of radius eps.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> pt(n);

  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    double len = 0.0;
    for (double& c : pt) {
      c = normal(rng);
      len += c * c;
    }
    len = std::sqrt(len);
    const double radius = p.eps() * std::pow(uniform(rng), 1.0 / n);
    for (double& c : pt) c *= radius / len;
    if (contains(whole, pt) && !contains(p, pt)) ++hits;
  }

  const double vol = ball_volume(n, p.eps());
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  return {vol * frac, vol * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

}  // namespace conespec::geometry
