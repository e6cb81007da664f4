#include "conespec/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "conespec/error.hpp"

namespace conespec::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Taylor coefficients of 1/Gamma(z) about 0; kRecipGamma[k] multiplies z^k.
constexpr std::array<double, 23> kRecipGamma = {
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
};

struct TemmeGammas {
  double gam1;   // (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
  double gam2;   // (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
  double gampl;  // 1/Gamma(1+mu)
  double gammi;  // 1/Gamma(1-mu)
};

// |mu| <= 1/2. Even/odd splits of the 1/Gamma series avoid the 0/0 at mu = 0.
TemmeGammas temme_gammas(double mu) {
  const double m2 = mu * mu;
  double gam1 = 0.0;
  double gam2 = 0.0;
  double pw = 1.0;
  for (std::size_t k = 1; k + 1 < kRecipGamma.size(); k += 2) {
    gam2 += kRecipGamma[k] * pw;
    gam1 -= kRecipGamma[k + 1] * pw;
    pw *= m2;
  }
  return {gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1};
}

// Numerical Recipes style Temme/Steed evaluation of J, Y and derivatives.
BesselJY steed_temme(double nu, double x) {
  constexpr double kEps = 1e-16;
  constexpr double kFpMin = 1e-300;
  constexpr int kMaxIt = 100000;
  constexpr double kXMin = 2.0;
  constexpr double kRescale = 1e250;

  const int nl = x < kXMin ? static_cast<int>(nu + 0.5)
                           : std::max(0, static_cast<int>(nu - x + 1.5));
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;

  // CF1 for J'_nu / J_nu.
  int isign = 1;
  double h = std::max(nu * xi, kFpMin);
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int i = 1;
  for (; i <= kMaxIt; ++i) {
    b += xi2;
    d = b - d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  if (i > kMaxIt) fail(ErrorKind::Convergence, "bessel CF1 did not converge at x=" + fmt(x));

  // Downward recurrence from nu to xmu on an unnormalized J.
  double rjl = isign * 1e-30;
  double rjpl = h * rjl;
  double rjl1 = rjl;
  double rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
    if (std::fabs(rjl) > kRescale) {
      rjl /= kRescale;
      rjpl /= kRescale;
      rjl1 /= kRescale;
      rjp1 /= kRescale;
    }
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double rjmu = 0.0;
  double rymu = 0.0;
  double rymup = 0.0;
  double ry1 = 0.0;
  if (x < kXMin) {
    // Temme's series for Y_mu, Y_{mu+1}.
    const double x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fct = std::fabs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double dd = -std::log(x2);
    double e = xmu * dd;
    const double fct2 = std::fabs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(xmu);
    double ff = 2.0 / kPi * fct * (g.gam1 * std::cosh(e) + g.gam2 * fct2 * dd);
    e = std::exp(e);
    double p = e / (g.gampl * kPi);
    double q = 1.0 / (e * kPi * g.gammi);
    const double pimu2 = 0.5 * pimu;
    const double fct3 = std::fabs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = kPi * pimu2 * fct3 * fct3;
    double cc = 1.0;
    dd = -x2 * x2;
    double sum = ff + r * q;
    double sum1 = p;
    int k = 1;
    for (; k <= kMaxIt; ++k) {
      ff = (k * ff + p + q) / (k * static_cast<double>(k) - xmu2);
      cc *= dd / k;
      p /= (k - xmu);
      q /= (k + xmu);
      const double del = cc * (ff + r * q);
      sum += del;
      const double del1 = cc * p - k * del;
      sum1 += del1;
      if (std::fabs(del) < (1.0 + std::fabs(sum)) * kEps) break;
    }
    if (k > kMaxIt) fail(ErrorKind::Convergence, "Temme series did not converge");
    rymu = -sum;
    ry1 = -sum1 * xi2;
    // J_mu itself can vanish here (mu = -1/2 at x = pi/2), which would break
    // the downward normalization. Recur Y up to nu and get J_nu from the
    // Wronskian with the CF1 ratio instead.
    for (int l = 1; l <= nl; ++l) {
      const double rytemp = (xmu + l) * xi2 * ry1 - rymu;
      rymu = ry1;
      ry1 = rytemp;
    }
    BesselJY out;
    out.y = rymu;
    out.yp = nu * xi * rymu - ry1;
    out.j = w / (out.yp - h * out.y);
    out.jp = h * out.j;
    return out;
  } else {
    // Steed's CF2 for p + iq.
    double a = 0.25 - xmu2;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fct = a * xi / (p * p + q * q);
    double cr = br + q * fct;
    double ci = bi + p * fct;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    int k = 2;
    for (; k <= kMaxIt; ++k) {
      a += 2 * (k - 1);
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::fabs(dr) + std::fabs(di) < kFpMin) dr = kFpMin;
      fct = a / (cr * cr + ci * ci);
      cr = br + cr * fct;
      ci = bi - ci * fct;
      if (std::fabs(cr) + std::fabs(ci) < kFpMin) cr = kFpMin;
      den = dr * dr + di * di;
      dr /= den;
      di /= -den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      temp = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = temp;
      if (std::fabs(dlr - 1.0) + std::fabs(dli) < kEps) break;
    }
    if (k > kMaxIt) fail(ErrorKind::Convergence, "Steed CF2 did not converge");
    const double gam = (p - f) / q;
    rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = xmu * xi * rymu - rymup;
  }

  const double scale = rjmu / rjl;
  BesselJY out;
  out.j = rjl1 * scale;
  out.jp = rjp1 * scale;
  for (int l = 1; l <= nl; ++l) {
    const double rytemp = (xmu + l) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
  }
  out.y = rymu;
  out.yp = nu * xi * rymu - ry1;
  return out;
}

struct HankelPQ {
  double p;
  double q;
  bool converged;
};

// Ten terms each of the large-argument P and Q series.
HankelPQ hankel_pq(double nu, double x) {
  constexpr int kTerms = 10;
  const double mu = 4.0 * nu * nu;
  double p = 0.0;
  double q = 0.0;
  double ak = 1.0;  // a_k(nu) / x^k
  double last = 0.0;
  for (int k = 0; k < 2 * kTerms; ++k) {
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      p += sign * ak;
    } else {
      q += sign * ak;
    }
    last = std::fabs(ak);
    const double odd = 2.0 * (k + 1) - 1.0;
    ak *= (mu - odd * odd) / ((k + 1) * 8.0 * x);
  }
  // The last retained term bounds the truncation error of an asymptotic series.
  return {p, q, last < 1e-16};
}

bool hankel(double nu, double x, double& j, double& y) {
  const HankelPQ pq = hankel_pq(nu, x);
  if (!pq.converged) return false;
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(chi);
  const double s = std::sin(chi);
  j = amp * (pq.p * c - pq.q * s);
  y = amp * (pq.p * s + pq.q * c);
  return true;
}

double ascending_j(double nu, double x, const SeriesControl& ctl) {
  const double lead = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  const double z = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= ctl.max_terms; ++k) {
    term *= z / (k * (nu + k));
    sum += term;
    if (std::fabs(term) <= ctl.rel_tol * std::fabs(sum)) return lead * sum;
  }
  fail(ErrorKind::Convergence, "ascending Bessel series exceeded max_terms");
}

}  // namespace

void validate(const SeriesControl& ctl) {
  require(ctl.rel_tol > 0.0, "SeriesControl.rel_tol must be positive");
  require(ctl.max_terms >= 50, "SeriesControl.max_terms must be at least 50");
  require(ctl.asymptotic_switch > 0.0, "SeriesControl.asymptotic_switch must be positive");
}

double gamma(double x) {
  if (is_nonpositive_integer(x)) fail(ErrorKind::Pole, "gamma pole at x=" + fmt(x));
  return std::tgamma(x);
}

double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctl) {
  validate(ctl);
  if (is_nonpositive_integer(c)) {
    fail(ErrorKind::Domain, "hyp2f1: c=" + fmt(c) + " is a nonpositive integer");
  }
  require(z >= 0.0, "hyp2f1: z must be nonnegative");
  if (z > kHypergeometricMargin) {
    fail(ErrorKind::Convergence, "hyp2f1: z=" + fmt(z) + " beyond the convergence margin");
  }
  if (z == 0.0) return 1.0;

  const int geometric = static_cast<int>(std::ceil(std::log(ctl.rel_tol) / std::log(z)));
  const long budget = static_cast<long>(ctl.max_terms) + geometric;
  // Past this index every Pochhammer factor has a fixed sign.
  const double settle = std::max({-a, -b, -c, 0.0}) + 1.0;

  double term = 1.0;
  double sum = 1.0;
  double scale = 1.0;
  for (long k = 0; k < budget; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
    sum += term;
    scale += std::fabs(term);
    if (term == 0.0) return sum;
    const double kn = kk + 1.0;
    if (kn < settle) continue;
    const double ratio =
        std::fabs((a + kn) * (b + kn) / ((c + kn) * (kn + 1.0))) * z;
    const double r = std::max(ratio, z);
    if (r >= 1.0) continue;
    const double tail = std::fabs(term) * r / (1.0 - r);
    if (tail <= ctl.rel_tol * scale) return sum;
  }
  fail(ErrorKind::Convergence, "hyp2f1: no convergence within " + std::to_string(budget) +
                                   " terms at z=" + fmt(z));
}

BesselJY bessel_jy(double nu, double x, const SeriesControl& ctl) {
  validate(ctl);
  require(nu >= 0.0, "bessel: order must be nonnegative");
  require(x > 0.0 && std::isfinite(x), "bessel: argument must be positive");
  if (x >= ctl.asymptotic_switch) {
    BesselJY out;
    double j1 = 0.0;
    double y1 = 0.0;
    if (hankel(nu, x, out.j, out.y) && hankel(nu + 1.0, x, j1, y1)) {
      out.jp = nu / x * out.j - j1;
      out.yp = nu / x * out.y - y1;
      return out;
    }
  }
  return steed_temme(nu, x);
}

double bessel_j(double nu, double x, const SeriesControl& ctl) {
  validate(ctl);
  require(nu >= 0.0, "bessel_j: order must be nonnegative");
  require(x > 0.0 && std::isfinite(x), "bessel_j: argument must be positive");
  if (x <= 2.0) return ascending_j(nu, x, ctl);
  return bessel_jy(nu, x, ctl).j;
}

double bessel_y(double nu, double x, const SeriesControl& ctl) {
  return bessel_jy(nu, x, ctl).y;
}

double jy_ratio_h0(double nu) {
  require(nu > 0.0, "jy_ratio_h0: order must be positive");
  return -kPi * std::exp(-nu * std::log(4.0) - std::lgamma(nu) - std::lgamma(nu + 1.0));
}

double jy_ratio_h(double nu, double t, const SeriesControl& ctl) {
  require(nu > 0.0, "jy_ratio_h: order must be positive");
  require(t >= 0.0, "jy_ratio_h: t must be nonnegative");
  if (t == 0.0) return jy_ratio_h0(nu);
  const BesselJY v = bessel_jy(nu, t, ctl);
  // Y_nu is negative on (0, y_{nu,1}); a nonnegative value means t left the regime.
  if (!(v.y < 0.0) || std::fabs(v.y) < 1e-12 * std::hypot(v.j, v.y)) {
    fail(ErrorKind::Domain, "jy_ratio_h: t=" + fmt(t) + " is not below the first zero of Y");
  }
  return std::exp(-2.0 * nu * std::log(t)) * (v.j / v.y);
}

namespace {

double legendre_direct(double order, double degree, double x, const SeriesControl& ctl) {
  const double c = 1.0 - order;
  if (is_nonpositive_integer(c)) {
    fail(ErrorKind::Domain, "legendre_p: 1-order=" + fmt(c) + " is a nonpositive integer");
  }
  const double pref = std::pow((1.0 + x) / (1.0 - x), 0.5 * order) / std::tgamma(c);
  return pref * hyp2f1(-degree, degree + 1.0, c, 0.5 * (1.0 - x), ctl);
}

}  // namespace

double legendre_p(double order, double degree, double x, const SeriesControl& ctl) {
  require(x > -1.0 && x < 1.0, "legendre_p: x must lie in (-1, 1)");
  if (degree < -0.5) degree = -degree - 1.0;
  if (degree <= 2.0) return legendre_direct(order, degree, x, ctl);

  // Upward recurrence in degree from two low-degree anchors keeps the Gauss
  // series free of the cancellation it suffers at large degree.
  const double n = std::floor(degree) - 1.0;
  const double d0 = degree - n;
  double prev = legendre_direct(order, d0 - 1.0, x, ctl);
  double cur = legendre_direct(order, d0, x, ctl);
  for (int i = 0; i < static_cast<int>(n); ++i) {
    const double v = d0 + i;
    const double denom = v - order + 1.0;
    if (denom == 0.0) return legendre_direct(order, degree, x, ctl);
    const double next = ((2.0 * v + 1.0) * x * cur - (v + order) * prev) / denom;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

double solve_bracketed(const std::function<double(double)>& f,
                       const std::function<double(double)>* df, double lo, double hi,
                       const RootOptions& opts) {
  require(std::isfinite(lo) && std::isfinite(hi), "find_zero: bracket must be finite");
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(std::signbit(flo) != std::signbit(fhi)) || std::isnan(flo) || std::isnan(fhi)) {
    fail(ErrorKind::Bracket, "find_zero: no sign change on [" + fmt(lo) + ", " + fmt(hi) + "]");
  }

  bool force_bisect = false;
  for (int iter = 0;; ++iter) {
    const double width = hi - lo;
    if (width <= opts.abs_tol) break;
    if (iter >= opts.max_iter) {
      fail(ErrorKind::Convergence, "find_zero: iteration cap reached, bracket width " + fmt(width));
    }
    const double mid = lo + 0.5 * width;
    if (mid <= lo || mid >= hi) break;

    double x = mid;
    const bool coarse = width > 1e-3 * std::max(1.0, std::fabs(mid));
    if (!coarse && !force_bisect) {
      double cand = mid;
      if (df != nullptr) {
        const bool use_lo = std::fabs(flo) < std::fabs(fhi);
        const double x0 = use_lo ? lo : hi;
        const double d = (*df)(x0);
        if (d != 0.0 && std::isfinite(d)) cand = x0 - (use_lo ? flo : fhi) / d;
      } else {
        cand = (lo * fhi - hi * flo) / (fhi - flo);
      }
      if (cand > lo && cand < hi) x = cand;
    }

    const double fx = f(x);
    if (fx == 0.0) return x;
    if (std::isnan(fx)) fail(ErrorKind::Convergence, "find_zero: f returned NaN at " + fmt(x));
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    force_bisect = (hi - lo) > 0.5 * width;
  }
  return std::fabs(flo) <= std::fabs(fhi) ? lo : hi;
}

}  // namespace

double find_zero(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& opts) {
  return solve_bracketed(f, nullptr, lo, hi, opts);
}

double find_zero(const std::function<double(double)>& f,
                 const std::function<double(double)>& df, double lo, double hi,
                 const RootOptions& opts) {
  return solve_bracketed(f, &df, lo, hi, opts);
}

}  // namespace conespec::specfun
