#pragma once

#include <string_view>
#include <vector>

#include "conespec/geometry.hpp"

namespace conespec::charval {

/// One angular eigenvalue parameter l with its radial Bessel order.
struct AngularMode {
  int dim = 2;
  double l = 1.0;
  double nu = 1.0;  // (dim + 2l - 2) / 2
  int index = 1;    // 1-based position in Sigma_beta
};

AngularMode make_mode(int dim, double l, int index = 1);

enum class Method { ClosedForm, LegendreRoot, Asymptotic };

std::string_view to_string(Method m) noexcept;

struct CharacteristicValue {
  double value = 0.0;
  Method method = Method::ClosedForm;
};

/// Half-angle beyond which the Legendre path is not attempted for N >= 3.
inline constexpr double kLegendreBetaGap = 0.05;

/// l_beta: pi/(2 beta) for N = 2, smallest Legendre root otherwise.
double characteristic_value(const geometry::ConeGeometry& g);

/// characteristic_value, or the asymptotic law when beta > pi - kLegendreBetaGap.
CharacteristicValue characteristic_value_auto(const geometry::ConeGeometry& g);

/// Leading-order behaviour of l_beta as beta -> pi (N >= 3, beta > pi - 0.2).
double characteristic_asymptotic(const geometry::ConeGeometry& g);

/// First `count` positive zeros of l -> P^{-mu}_{l+mu}(cos beta), any N.
std::vector<double> legendre_roots(const geometry::ConeGeometry& g, int count, double l_max);

/// First `count` elements of Sigma_beta. For N >= 3 this is the axisymmetric
/// family only.
std::vector<AngularMode> sigma_beta(const geometry::ConeGeometry& g, int count);

}  // namespace conespec::charval
