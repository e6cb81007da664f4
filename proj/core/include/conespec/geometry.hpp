#pragma once

#include <cstdint>
#include <span>

namespace conespec::geometry {

/// Spherical cone of half-angle beta in the unit ball of R^dim.
class ConeGeometry {
 public:
  ConeGeometry(int dim, double half_angle);

  int dim() const noexcept { return dim_; }
  double half_angle() const noexcept { return half_angle_; }
  /// (dim - 3) / 2, the order offset of the cap's Legendre function.
  double mu() const noexcept { return mu_; }

 private:
  int dim_;
  double half_angle_;
  double mu_;
};

enum class CutVariant {
  ExactCut,      // ball of radius eps about the vertex removed
  LipschitzCut,  // vertex truncated by the graph of the piecewise-linear g
};

class PerturbedCone {
 public:
  PerturbedCone(ConeGeometry base, double eps, CutVariant variant);

  const ConeGeometry& base() const noexcept { return base_; }
  double eps() const noexcept { return eps_; }
  CutVariant variant() const noexcept { return variant_; }

 private:
  ConeGeometry base_;
  double eps_;
  CutVariant variant_;
};

/// Coordinates (x1, x2, ..., xN); x1 runs along the cone axis.
using Point = std::span<const double>;

/// (N-1)-dimensional measure of the cap; 2*beta for N = 2.
double cap_measure(const ConeGeometry& g);

/// |Omega_beta \ Omega_beta(eps)| = cap_measure * eps^N / N. ExactCut only.
double removed_volume(const PerturbedCone& p);

/// A = sin(beta) / sqrt(2 (1 - cos beta)).
double inclusion_constant(double beta);

/// Piecewise truncation height g(|xbar|) of the Lipschitz variant.
double lipschitz_profile(double beta, double eps, double xbar_norm);

/// Open-set membership.
bool contains(const PerturbedCone& p, Point x);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimate of |Omega_beta \ Omega~_beta(eps)|, deterministic per seed.
McEstimate mc_removed_volume(const PerturbedCone& p, std::int64_t samples, std::uint64_t seed);

}  // namespace conespec::geometry
