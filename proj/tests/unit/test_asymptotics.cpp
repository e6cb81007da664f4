#include <cmath>
#include <numbers>

#include "conespec/asymptotics.hpp"
#include "conespec/error.hpp"
#include "conespec/geometry.hpp"
#include "conespec/spectrum.hpp"
#include "doctest.h"

using namespace conespec;
using namespace conespec::asymptotics;
using charval::make_mode;
using geometry::ConeGeometry;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double j2(double nu, int k = 1) {
  return spectrum::unperturbed_eigen({2, nu, nu, 1}, k).lambda;
}

GPartials central_differences(const BranchPoint& p) {
  const double hl = 1e-6 * p.lambda;
  const double hd = 1e-6 * p.delta;
  GPartials d;
  d.d_lambda = (eval_G({p.nu, p.delta, p.lambda + hl}) - eval_G({p.nu, p.delta, p.lambda - hl})) /
               (2 * hl);
  d.d_delta = (eval_G({p.nu, p.delta + hd, p.lambda}) - eval_G({p.nu, p.delta - hd, p.lambda})) /
              (2 * hd);
  return d;
}
}  // namespace

TEST_CASE("branch point from eps") {
  const BranchPoint p = BranchPoint::from_eps(1.5, 0.1, 3.0);
  CHECK(p.delta == Approx(std::pow(0.1, 3.0)).epsilon(1e-15));
  CHECK_THROWS_AS(BranchPoint::from_eps(1.5, -0.1, 3.0), Error);
}

TEST_CASE("F vanishes at cross-product zeros and changes sign") {
  for (double nu : {0.7, 1.2, 2.5}) {
    for (double eps : {0.05, 0.3}) {
      const double lam = spectrum::cross_product_eigen({2, nu, nu, 1}, eps, 1).lambda;
      const double scale = std::fabs(eval_F(nu, eps, lam * 1.01));
      CHECK(std::fabs(eval_F(nu, eps, lam)) <= 1e-9 * std::max(1.0, scale));
      CHECK(eval_F(nu, eps, lam * 0.999) * eval_F(nu, eps, lam * 1.001) < 0.0);
    }
  }
  for (double lam : {2.0, 5.0, 9.0}) {
    const double s = std::sqrt(lam);
    CHECK(eval_F(0.5, 0.2, lam) == Approx(-std::tan(s) + std::tan(0.2 * s)).epsilon(1e-12));
  }
  CHECK(eval_F(0.5, 0.0, 2.0) == Approx(-std::tan(std::sqrt(2.0))).epsilon(1e-12));
  // Y_{1/2}(pi / 2) = 0
  CHECK_THROWS_AS(eval_F(0.5, 0.0, kPi * kPi / 4), Error);
}

TEST_CASE("G partials against central differences") {
  const double lam = j2(1.2) + 0.5;
  const BranchPoint p{1.2, 1e-3, lam};
  const GPartials a = eval_G_partials(p);
  const GPartials fd = central_differences(p);
  CHECK(rel(a.d_lambda, fd.d_lambda) <= 1e-5);
  CHECK(rel(a.d_delta, fd.d_delta) <= 1e-5);
  CHECK(a.d_delta > 0.0);

  int checked = 0;
  for (double nu : {0.7, 1.2, 2.1}) {
    for (double delta : {1e-4, 1e-3, 1e-2}) {
      for (double shift : {-0.6, 0.3, 0.9}) {
        const BranchPoint q{nu, delta, j2(nu) + shift};
        const GPartials x = eval_G_partials(q);
        const GPartials y = central_differences(q);
        CAPTURE(nu);
        CAPTURE(delta);
        CAPTURE(shift);
        CHECK(rel(x.d_lambda, y.d_lambda) <= 1e-5);
        CHECK(rel(x.d_delta, y.d_delta) <= 1e-5);
        CHECK(x.d_delta > 0.0);
        ++checked;
      }
    }
  }
  CHECK(checked == 27);
  CHECK_THROWS_AS(eval_G_partials({1.2, 0.0, lam}), Error);
}

TEST_CASE("G partials half-integer closed form") {
  // nu = 1/2: G = -tan(s) + tan(delta s), s = sqrt(lambda)
  const double delta = 0.01;
  const double lam = 9.0;
  const double s = 3.0;
  const GPartials g = eval_G_partials({0.5, delta, lam});
  const double sec2 = [](double x) { return 1.0 / (std::cos(x) * std::cos(x)); }(s);
  const double sec2d = 1.0 / std::pow(std::cos(delta * s), 2);
  CHECK(g.d_lambda == Approx((-sec2 + delta * sec2d) / (2 * s)).epsilon(1e-12));
  CHECK(g.d_delta == Approx(s * sec2d).epsilon(1e-12));
}

TEST_CASE("G limits") {
  const GPartials h = eval_G_limits(0.5, kPi * kPi);
  CHECK(h.d_delta == Approx(kPi).epsilon(1e-14));
  CHECK(h.d_lambda < 0.0);
  for (double nu : {0.6, 1.2, 1.5, 2.4, 3.7}) {
    const double lam = j2(nu);
    const GPartials lim = eval_G_limits(nu, lam);
    // the limit is approached at rate (eps s)^2, so put eps s at 1e-3
    const double delta = std::pow(1e-3 / std::sqrt(lam), 2 * nu);
    const GPartials near = eval_G_partials({nu, delta, lam});
    CAPTURE(nu);
    CHECK(lim.d_lambda < 0.0);
    CHECK(lim.d_delta > 0.0);
    CHECK(rel(near.d_lambda, lim.d_lambda) <= 0.01);
    CHECK(rel(near.d_delta, lim.d_delta) <= 0.01);
  }
  CHECK_THROWS_AS(eval_G_limits(1.2, j2(1.2) + 0.1), Error);
}

TEST_CASE("coefficient a") {
  for (int n : {2, 3, 4}) {
    for (double b : {1.2, 2.0, 2.6}) {
      const ConeGeometry g(n, b);
      for (const auto& m : charval::sigma_beta(g, 3)) {
        for (int k : {1, 2}) {
          const double lam = spectrum::unperturbed_eigen(m, k).lambda;
          const ExpansionData d = coefficient_a(g, m, lam);
          CHECK(d.coefficient > 0.0);
          CHECK(d.exponent == (n + 2.0 * m.l - 2.0) / n);
          CHECK((d.kind == CoefficientKind::B) == (m.index == 1 && k == 1));
          // implicit-function assembly of the same constant
          const GPartials lim = eval_G_limits(m.nu, lam);
          const double assembled = -(lim.d_delta / lim.d_lambda) *
                                   std::pow(n / geometry::cap_measure(g), 2 * m.nu / n);
          CHECK(rel(d.coefficient, assembled) <= 1e-10);
        }
      }
    }
  }
  CHECK_THROWS_AS(coefficient_a(ConeGeometry(3, 1.0), make_mode(2, 1.0), j2(1.0)), Error);
}

TEST_CASE("predicted gap") {
  const ConeGeometry g(3, 2.0);
  const auto m = make_mode(3, charval::characteristic_value(g));
  const ExpansionData d = coefficient_a(g, m, spectrum::unperturbed_eigen(m, 1).lambda);
  CHECK(predicted_gap(d, 0.0) == 0.0);
  CHECK(predicted_gap(d, 0.02) / predicted_gap(d, 0.01) ==
        Approx(std::pow(2.0, 3 + 2 * m.l - 2)).epsilon(1e-12));
}

TEST_CASE("predicted gap half-integer leading order") {
  // N = 2, l = 1/2 on a sector with cap measure 2, so V = eps^2 and a V^{1/2} = a eps
  const ConeGeometry g(2, 1.0);
  const charval::AngularMode m{2, 0.5, 0.5, 2};
  for (int k : {1, 2}) {
    const double lam = std::pow(k * kPi, 2);
    const ExpansionData d = coefficient_a(g, m, lam);
    const double eps = 1e-6;
    CHECK(predicted_gap(d, eps) == Approx(2 * kPi * kPi * k * k * eps).epsilon(1e-9));
  }
}

TEST_CASE("rate fit on exact power laws") {
  std::vector<double> v = {1e-2, 3e-3, 1e-3, 2e-4, 5e-5};
  for (double s : {0.5, 2.0 / 3.0, 1.3}) {
    std::vector<double> gaps;
    for (double x : v) gaps.push_back(4.2 * std::pow(x, s));
    const RateFit f = rate_fit_points(v, gaps);
    CHECK(f.slope == Approx(s).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == Approx(4.2).epsilon(1e-10));
    CHECK(f.max_residual < 1e-12);
    CHECK(f.points.size() == v.size());
  }
  CHECK_THROWS_AS(rate_fit_points({1, 2, 3}, {1, 2, 3}), Error);
  CHECK_THROWS_AS(rate_fit_points({1, 2, 3, 4}, {1, 2, -3, 4}), Error);
}

TEST_CASE("rate fit rejects noise-floor gaps") {
  const auto m = make_mode(2, 1.0);
  auto branch = spectrum::track_branch(m, 1, {0.1, 0.05, 0.02, 0.01});
  std::vector<double> vols = {1, 2, 3, 4};
  branch[2].lambda = *branch[2].limit_lambda * (1 + 1e-10);
  try {
    rate_fit(branch, vols);
    FAIL("expected a noise-floor error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoiseFloor);
    CHECK(std::string(e.what()).find("eps=0.02") != std::string::npos);
  }
}

TEST_CASE("default eps grid") {
  const ConeGeometry g(2, 3 * kPi / 4);
  const auto m = make_mode(2, charval::characteristic_value(g));
  const ExpansionData d = coefficient_a(g, m, spectrum::unperturbed_eigen(m, 1).lambda);
  const auto grid = default_eps_grid(d);
  REQUIRE(grid.size() == 8);
  CHECK(grid.front() == Approx(0.05));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] < grid[i - 1]);
  CHECK(predicted_gap(d, grid.back()) == Approx(100 * kNoiseFloor * d.limit_lambda).epsilon(1e-8));

  // large order: gaps vanish fast, so the grid moves up
  const charval::AngularMode big{2, 12.0, 12.0, 3};
  const ExpansionData db = coefficient_a(g, big, spectrum::unperturbed_eigen(big, 1).lambda);
  const auto gb = default_eps_grid(db);
  CHECK(gb.front() > 0.05);
  CHECK(predicted_gap(db, gb.back()) >= 100 * kNoiseFloor * db.limit_lambda * (1 - 1e-9));
}

TEST_CASE("branch gaps follow the predicted law") {
  for (auto [n, b] : {std::pair{2, 3 * kPi / 4}, {3, 3 * kPi / 4}, {4, 2 * kPi / 3}, {3, 2.0}}) {
    const ConeGeometry g(n, b);
    const auto m = make_mode(n, charval::characteristic_value(g));
    const double lam = spectrum::unperturbed_eigen(m, 1).lambda;
    const ExpansionData d = coefficient_a(g, m, lam);
    const auto grid = default_eps_grid(d);
    const auto branch = spectrum::track_branch(m, 1, grid);
    for (const auto& r : branch) CHECK(r.lambda - lam > 0.0);
    const auto& last = branch.back();
    const double v = geometry::removed_volume({g, last.eps, geometry::CutVariant::ExactCut});
    CAPTURE(n);
    CHECK(rel((last.lambda - lam) / std::pow(v, d.exponent), d.coefficient) <= 0.05);
  }
}

TEST_CASE("slope robust to grid density and to the sandwich scale") {
  const ConeGeometry g(2, 3 * kPi / 4);
  const auto m = make_mode(2, charval::characteristic_value(g));
  const double lam = spectrum::unperturbed_eigen(m, 1).lambda;
  const ExpansionData d = coefficient_a(g, m, lam);
  auto fit_on = [&](const std::vector<double>& grid) {
    const auto branch = spectrum::track_branch(m, 1, grid);
    std::vector<double> vols;
    for (double e : grid) vols.push_back(geometry::removed_volume({g, e, geometry::CutVariant::ExactCut}));
    return rate_fit(branch, vols).slope;
  };
  GridOptions sparse;
  GridOptions dense;
  dense.points = 16;
  const double s1 = fit_on(default_eps_grid(d, sparse));
  const double s2 = fit_on(default_eps_grid(d, dense));
  CHECK(std::fabs(s1 - s2) <= 0.02);

  // exact cuts at eps and at A eps bracket the Lipschitz truncation
  const double a = geometry::inclusion_constant(g.half_angle());
  std::vector<double> inner = default_eps_grid(d, sparse);
  for (double& e : inner) e *= a;
  CHECK(std::fabs(fit_on(inner) - s1) <= 0.02);
}

TEST_CASE("sharpness report") {
  const SharpnessReport r2 = sharpness_report(ConeGeometry(2, 3 * kPi / 4));
  CHECK(r2.p_sup == Approx(6.0).epsilon(1e-12));
  CHECK(r2.analytic_exponent == Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r2.stability_exponent_limit == Approx(2.0 / 3.0).epsilon(1e-12));
  REQUIRE(r2.fit.has_value());
  CHECK(std::fabs(r2.fit->slope - 2.0 / 3.0) <= 0.02);
  CHECK(r2.match);
  CHECK(r2.improvement_excluded);
  CHECK(*r2.reference_limit == Approx(0.5));
  CHECK(r2.corollary_threshold == Approx(0.5));

  const SharpnessReport r99 = sharpness_report(ConeGeometry(2, 0.99 * kPi));
  CHECK(r99.analytic_exponent == Approx(1.0 / (2 * 0.99)).epsilon(1e-12));
  CHECK(r99.analytic_exponent == Approx(0.5051).epsilon(1e-4));

  const SharpnessReport r4 = sharpness_report(ConeGeometry(4, 2 * kPi / 3));
  CHECK(r4.l_beta == Approx(0.5).epsilon(1e-6));
  CHECK(r4.p_sup == Approx(8.0).epsilon(1e-6));
  CHECK(r4.analytic_exponent == Approx(0.75).epsilon(1e-6));
  CHECK_FALSE(r4.reference_limit.has_value());
  CHECK(r4.corollary_threshold == Approx(1.0 / 3.0));
  CHECK(r4.match);

  const SharpnessReport tail = sharpness_report(ConeGeometry(3, kPi - 0.01));
  CHECK(tail.l_method == charval::Method::Asymptotic);
  CHECK_FALSE(tail.fit.has_value());
  CHECK_FALSE(tail.note.empty());

  try {
    sharpness_report(ConeGeometry(3, kPi / 2));
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Refusal);
  }
}

TEST_CASE("analytic exponent approaches 1/N as beta -> pi") {
  for (int n : {2, 3}) {
    double prev = 1e300;
    for (double gap : {0.5, 0.3, 0.1, 0.06, 0.04, 0.01, 1e-3, 1e-6}) {
      const SharpnessReport r = sharpness_report(ConeGeometry(n, kPi - gap), 0.02, {});
      CHECK(r.analytic_exponent < prev);
      CHECK(r.analytic_exponent > 1.0 / n);
      prev = r.analytic_exponent;
    }
    CHECK(prev - 1.0 / n < 0.05);
  }
}
