#pragma once

#include <functional>

namespace conespec::specfun {

/// Truncation controls shared by every series and expansion in this module.
struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 500;
  /// Bessel evaluations at x >= asymptotic_switch try the Hankel expansion first.
  double asymptotic_switch = 30.0;
};

void validate(const SeriesControl& ctl);

/// Gamma(x). Throws ErrorKind::Pole at x = 0, -1, -2, ...
double gamma(double x);

/// Largest hypergeometric argument accepted by hyp2f1.
inline constexpr double kHypergeometricMargin = 0.9995;

/// Gauss series 2F1(a, b; c; z) for 0 <= z <= kHypergeometricMargin.
///
/// The term budget is max_terms on top of the count a geometric series of
/// ratio z needs to reach rel_tol, so slowly converging arguments near the
/// margin are summed rather than rejected.
double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctl = {});

/// J, Y and their x-derivatives at one (nu, x).
struct BesselJY {
  double j = 0.0;
  double y = 0.0;
  double jp = 0.0;
  double yp = 0.0;
};

/// Bessel functions of the first and second kind, real order nu >= 0, x > 0.
///
/// Temme's series for x < 2, Steed's continued fractions for moderate x, and
/// the Hankel expansion beyond asymptotic_switch when ten terms converge.
BesselJY bessel_jy(double nu, double x, const SeriesControl& ctl = {});

/// J_nu(x). Uses the ascending series for x <= 2.
double bessel_j(double nu, double x, const SeriesControl& ctl = {});

/// Y_nu(x).
double bessel_y(double nu, double x, const SeriesControl& ctl = {});

/// h(0) = -pi / (4^nu Gamma(nu) Gamma(nu + 1)).
double jy_ratio_h0(double nu);

/// h(t) = t^{-2 nu} J_nu(t) / Y_nu(t) for t in [0, first zero of Y_nu).
double jy_ratio_h(double nu, double t, const SeriesControl& ctl = {});

/// Legendre function of the first kind P^{order}_{degree}(x) on (-1, 1).
double legendre_p(double order, double degree, double x, const SeriesControl& ctl = {});

struct RootOptions {
  /// Bracket width at which iteration stops; 0 iterates to floating resolution.
  double abs_tol = 1e-12;
  int max_iter = 300;
};

/// Root of a continuous f on [lo, hi] with f(lo) f(hi) <= 0.
double find_zero(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts = {});

/// As above with a Newton polish using the analytic derivative df.
double find_zero(const std::function<double(double)>& f,
                 const std::function<double(double)>& df, double lo, double hi,
                 const RootOptions& opts = {});

}  // namespace conespec::specfun
