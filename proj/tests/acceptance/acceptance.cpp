// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conespec/asymptotics.hpp"
#include "conespec/charval.hpp"
#include "conespec/geometry.hpp"
#include "conespec/oracle.hpp"
#include "conespec/spectrum.hpp"
#include "oracles.hpp"

using namespace conespec;
using charval::make_mode;
using geometry::ConeGeometry;
using geometry::CutVariant;
using geometry::PerturbedCone;

namespace {
constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Collects failed sub-checks for the detail column.
struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
  void time_limit(double seconds, double limit) {
    expect(seconds < limit, "runtime " + std::to_string(seconds) + " s >= " +
                                std::to_string(limit) + " s");
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds_since(t0);
}

void ac1(Outcome& o) {
  double l2 = 0, l3 = 0, l4 = 0;
  o.time_limit(timed([&] { l2 = charval::characteristic_value(ConeGeometry(2, 3 * kPi / 4)); }), 1.0);
  o.time_limit(timed([&] { l3 = charval::characteristic_value(ConeGeometry(3, kPi / 2)); }), 1.0);
  o.time_limit(timed([&] { l4 = charval::characteristic_value(ConeGeometry(4, 2 * kPi / 3)); }), 1.0);
  o.expect(std::fabs(l2 - 2.0 / 3.0) <= 1e-12, "N=2");
  o.expect(std::fabs(l3 - 1.0) <= 1e-8, "N=3");
  o.expect(std::fabs(l4 - 0.5) <= 1e-6, "N=4");
  o.detail << " l2=" << l2 << " l3=" << l3 << " l4=" << l4;
}

void ac2(Outcome& o) {
  double worst = 0.0;
  const double t = timed([&] {
    const auto m = make_mode(2, 0.5);
    for (double eps : {0.1, 0.5}) {
      for (int k = 1; k <= 5; ++k) {
        const double expect = std::pow(k * kPi / (1 - eps), 2);
        worst = std::max(worst, rel(spectrum::cross_product_eigen(m, eps, k).lambda, expect));
      }
    }
  });
  o.time_limit(t, 1.0);
  o.expect(worst <= 1e-8, "relative error");
  o.detail << " max_rel=" << worst;
}

void ac3(Outcome& o) {
  double lam = 0.0;
  o.time_limit(timed([&] { lam = spectrum::unperturbed_eigen(make_mode(2, 1.0), 1).lambda; }), 1.0);
  const double s = oracles::bisect([](double x) { return oracles::series_j(1.0, x); }, 3.0, 4.5);
  o.expect(std::fabs(lam - s * s) <= 1e-8, "bisection oracle");
  o.detail.precision(15);
  o.detail << " lambda=" << lam << " oracle=" << s * s;
}

void ac4(Outcome& o) {
  struct Case {
    int n;
    double beta;
  };
  const double t = timed([&] {
    for (const Case& c : {Case{2, 3 * kPi / 4}, Case{3, 3 * kPi / 4}, Case{4, 2 * kPi / 3}}) {
      const ConeGeometry g(c.n, c.beta);
      const double l = charval::characteristic_value(g);
      const double target = (c.n + 2 * l - 2) / c.n;
      const auto r = asymptotics::sharpness_report(g);
      if (!r.fit) {
        o.expect(false, "no fit for N=" + std::to_string(c.n));
        continue;
      }
      const double coef_err = rel(r.fitted_coefficient, r.coefficient_b);
      o.expect(std::fabs(r.fit->slope - target) <= 0.02, "slope N=" + std::to_string(c.n));
      o.expect(coef_err <= 0.05, "coefficient N=" + std::to_string(c.n));
      o.detail << " N=" << c.n << ":slope=" << r.fit->slope << "/target=" << target
               << ",coef_rel=" << coef_err;
    }
  });
  o.time_limit(t, 30.0);
}

asymptotics::GPartials central_differences(const asymptotics::BranchPoint& p) {
  using asymptotics::eval_G;
  const double hl = 1e-6 * p.lambda;
  const double hd = 1e-6 * p.delta;
  asymptotics::GPartials d;
  d.d_lambda = (eval_G({p.nu, p.delta, p.lambda + hl}) - eval_G({p.nu, p.delta, p.lambda - hl})) /
               (2 * hl);
  d.d_delta = (eval_G({p.nu, p.delta + hd, p.lambda}) - eval_G({p.nu, p.delta - hd, p.lambda})) /
              (2 * hd);
  return d;
}

double first_zero_squared(double nu) {
  return spectrum::unperturbed_eigen({2, nu, nu, 1}, 1).lambda;
}

void ac5(Outcome& o) {
  double worst_fd = 0.0;
  double worst_lim = 0.0;
  int grid = 0;
  const double t = timed([&] {
    for (double nu : {0.7, 1.2, 2.1}) {
      for (double delta : {1e-4, 1e-3, 1e-2}) {
        for (double shift : {-0.6, 0.3, 0.9}) {
          const asymptotics::BranchPoint p{nu, delta, first_zero_squared(nu) + shift};
          const auto a = asymptotics::eval_G_partials(p);
          const auto d = central_differences(p);
          worst_fd = std::max({worst_fd, rel(a.d_lambda, d.d_lambda), rel(a.d_delta, d.d_delta)});
          ++grid;
        }
      }
    }
    for (double nu : {0.5, 0.7, 1.0, 1.5, 2.0}) {
      const double lam = first_zero_squared(nu);
      const auto lim = asymptotics::eval_G_limits(nu, lam);
      const auto near = asymptotics::eval_G_partials({nu, 1e-8, lam});
      worst_lim = std::max({worst_lim, rel(near.d_lambda, lim.d_lambda), rel(near.d_delta, lim.d_delta)});
    }
  });
  o.time_limit(t, 5.0);
  o.expect(grid == 27, "grid size");
  o.expect(worst_fd <= 1e-5, "finite differences");
  o.expect(worst_lim <= 0.01, "limits");
  o.detail << " fd_max_rel=" << worst_fd << " limit_max_rel=" << worst_lim;
}

void ac6(Outcome& o) {
  struct Case {
    int n;
    double beta;
    double l;
  };
  double worst_radial = 0.0;
  const double tr = timed([&] {
    oracle::FdConfig cfg;
    cfg.richardson = true;
    for (const Case& c : {Case{2, kPi / 2, 1.0}, Case{3, kPi / 2, 1.0}, Case{2, 3 * kPi / 4, 2.0 / 3.0}}) {
      for (double eps : {0.0, 0.3}) {
        const auto m = make_mode(c.n, c.l);
        const double exact = eps == 0.0 ? spectrum::unperturbed_eigen(m, 1).lambda
                                        : spectrum::cross_product_eigen(m, eps, 1).lambda;
        const double fd = oracle::radial_fd_eigen(ConeGeometry(c.n, c.beta), c.l, eps, 1, cfg);
        worst_radial = std::max(worst_radial, rel(fd, exact));
      }
    }
  });
  o.expect(worst_radial <= 1e-4, "radial Richardson");

  double worst_polar = 0.0;
  double slowest = 0.0;
  oracle::FdConfig pc;
  pc.radial_nodes = 256;
  pc.angular_nodes = 128;
  for (double beta : {kPi / 2, 3 * kPi / 4}) {
    for (double eps : {0.0, 0.3}) {
      const double l = kPi / (2 * beta);
      const auto m = make_mode(2, l);
      const double exact = eps == 0.0 ? spectrum::unperturbed_eigen(m, 1).lambda
                                      : spectrum::cross_product_eigen(m, eps, 1).lambda;
      double fd = 0.0;
      slowest = std::max(slowest, timed([&] { fd = oracle::polar_fd_eigen(beta, eps, pc); }));
      worst_polar = std::max(worst_polar, rel(fd, exact));
    }
  }
  o.time_limit(slowest, 60.0);
  o.expect(worst_polar <= 1e-2, "polar");
  o.detail << " radial_max_rel=" << worst_radial << " (" << tr << " s) polar_max_rel=" << worst_polar
           << " slowest_polar=" << slowest << " s";
}

std::vector<double> random_point(std::mt19937_64& rng, int n, double radius) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  std::vector<double> x(n);
  double norm = 0.0;
  for (double& v : x) {
    v = gauss(rng);
    norm += v * v;
  }
  const double r = radius * std::pow(unif(rng), 1.0 / n) / std::sqrt(norm);
  for (double& v : x) v *= r;
  return x;
}

void ac7(Outcome& o) {
  std::mt19937_64 rng(2024);
  long violations = 0;
  int cases = 0;
  for (int n : {2, 3, 4}) {
    for (double b : {kPi / 3, kPi / 2, 2 * kPi / 3, 3 * kPi / 4}) {
      for (double eps : {0.05, 0.2}) {
        const ConeGeometry g(n, b);
        const PerturbedCone exact(g, eps, CutVariant::ExactCut);
        const PerturbedCone lip(g, eps, CutVariant::LipschitzCut);
        const PerturbedCone outer(g, geometry::inclusion_constant(b) * eps, CutVariant::ExactCut);
        for (int i = 0; i < 10000; ++i) {
          const auto x = random_point(rng, n, i % 2 ? 1.0 : 1.5 * eps);
          if (geometry::contains(exact, x) && !geometry::contains(lip, x)) ++violations;
          if (geometry::contains(lip, x) && !geometry::contains(outer, x)) ++violations;
        }
        ++cases;
      }
    }
  }
  o.expect(violations == 0, "inclusion chain");

  double worst_sigma = 0.0;
  for (int n : {2, 3, 4}) {
    const ConeGeometry g(n, 3 * kPi / 4);
    const auto big = geometry::mc_removed_volume({g, 0.3, CutVariant::LipschitzCut}, 200000, 5);
    const auto small = geometry::mc_removed_volume({g, 0.15, CutVariant::LipschitzCut}, 200000, 6);
    const double slope = std::log2(big.estimate / small.estimate);
    const double sigma =
        std::hypot(big.std_error / big.estimate, small.std_error / small.estimate) / std::log(2.0);
    worst_sigma = std::max(worst_sigma, std::fabs(slope - n) / sigma);
  }
  o.expect(worst_sigma <= 3.0, "MC scaling exponent");

  double worst_a = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double b = kPi * i / 101.0;
    worst_a = std::max(worst_a, std::fabs(geometry::inclusion_constant(b) - std::cos(b / 2)));
  }
  o.expect(worst_a <= 1e-14, "A = cos(beta/2)");
  o.detail << " cases=" << cases << " violations=" << violations << " mc_sigmas=" << worst_sigma
           << " A_err=" << worst_a;
}

void ac8(Outcome& o) {
  int agree = 0;
  int total = 0;
  bool endpoints = false;
  const double t = timed([&] {
    const ConeGeometry g(2, 3 * kPi / 4);
    const auto mode = make_mode(2, 2.0 / 3.0);
    const auto rec = spectrum::unperturbed_eigen(mode, 1);
    endpoints =
        spectrum::verify_integrability(mode, g, 4.0, rec).verdict == spectrum::Integrability::Finite &&
        spectrum::verify_integrability(mode, g, 6.0, rec).verdict == spectrum::Integrability::Divergent;
    for (int n : {2, 3, 4}) {
      for (double l : {0.2, 0.5, 2.0 / 3.0, 0.9, 1.0, 1.4}) {
        const ConeGeometry gg(n, 2.0);
        const auto m = make_mode(n, l);
        const auto r = spectrum::unperturbed_eigen(m, 1);
        const double sup = spectrum::integrability_threshold(gg, l);
        for (double p : {2.0, 3.0, 5.0, 8.0, 12.0, 20.0, 40.0}) {
          if (std::fabs(p - sup) < 0.5) continue;
          const auto v = spectrum::verify_integrability(m, gg, p, r).verdict;
          ++total;
          if (v == (p < sup ? spectrum::Integrability::Finite : spectrum::Integrability::Divergent)) ++agree;
        }
      }
    }
  });
  o.time_limit(t, 10.0);
  o.expect(endpoints, "p=4 finite, p=6 divergent");
  o.expect(agree == total, "threshold agreement");
  o.detail << " agree=" << agree << "/" << total;
}

void ac9(Outcome& o) {
  const double t = timed([&] {
    for (int n : {2, 3}) {
      double prev = 1e300;
      bool monotone = true;
      bool above = true;
      for (double gap : {0.5, 0.3, 0.1, 0.06, 0.04, 0.01, 1e-3, 1e-6}) {
        const auto r = asymptotics::sharpness_report(ConeGeometry(n, kPi - gap), 0.02, {});
        monotone = monotone && r.analytic_exponent < prev;
        above = above && r.analytic_exponent > 1.0 / n;
        prev = r.analytic_exponent;
        if (r.reference_limit) o.expect(std::fabs(*r.reference_limit - 1.0 / n) < 1e-15, "reference limit");
        o.expect(std::fabs(r.corollary_threshold - (n == 2 ? 0.5 : 1.0 / 3.0)) < 1e-15,
                 "corollary threshold");
      }
      o.expect(monotone, "monotone N=" + std::to_string(n));
      o.expect(above, "above 1/N for N=" + std::to_string(n));
      o.expect(prev - 1.0 / n < 0.05, "approaches 1/N for N=" + std::to_string(n));
      o.detail << " N=" << n << ":last=" << prev;
    }
  });
  o.time_limit(t, 5.0);
}

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = ::pclose(pipe);
  return out;
}

void ac10(Outcome& o, const std::string& exe) {
  const std::vector<std::string> invocations = {
      "sharpness --dim 2 --beta 0.75pi --seed 17 --samples 50000",
      "sharpness --dim 3 --beta 0.8pi --seed 3 --format csv",
      "eigen --dim 3 --beta 0.6pi --eps 0.2 --count 6",
      "oracle --dim 2 --beta 0.75pi --eps 0.1 --polar --nodes 128 --angular-nodes 64",
  };
  for (const std::string& args : invocations) {
    int s1 = 0;
    int s2 = 0;
    const std::string cmd = "\"" + exe + "\" " + args + " 2>&1";
    const std::string a = capture(cmd, s1);
    const std::string b = capture(cmd, s2);
    o.expect(s1 == 0 && s2 == 0, "exit status for '" + args + "'");
    o.expect(!a.empty() && a == b, "bytes differ for '" + args + "'");
  }
  o.detail << " invocations=" << invocations.size();
}

}  // namespace

int main(int argc, char** argv) {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  std::string exe = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"AC1 characteristic values", ac1},
      {"AC2 half-integer closed forms", ac2},
      {"AC3 unperturbed first eigenvalue", ac3},
      {"AC4 rate sharpness", ac4},
      {"AC5 implicit-function derivatives", ac5},
      {"AC6 oracle equivalence", ac6},
      {"AC7 geometry sandwich", ac7},
      {"AC8 integrability endpoint", ac8},
      {"AC9 sharpness report limits", ac9},
      {"AC10 determinism", [&](Outcome& o) {
         if (exe.empty()) {
           o.expect(false, "no CLI path given");
           return;
         }
         ac10(o, exe);
       }},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    o.detail.precision(6);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double t = seconds_since(t0);
    std::printf("%s %s (%.3f s)%s\n", name.substr(0, name.find(' ')).c_str(), o.ok ? "PASS" : "FAIL", t,
                (" " + name.substr(name.find(' ') + 1) + ":" + o.detail.str()).c_str());
    if (!o.ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
