#include "conespec/oracle.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "conespec/error.hpp"

namespace conespec::oracle {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kResidualTol = 1e-10;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Symmetric tridiagonal matrix with constant off-diagonal.
struct Tridiagonal {
  std::vector<double> diag;
  double off = 0.0;

  int size() const { return static_cast<int>(diag.size()); }

  // Number of eigenvalues strictly below sigma.
  int count_below(double sigma) const {
    int count = 0;
    double p = 1.0;
    const double off2 = off * off;
    for (std::size_t i = 0; i < diag.size(); ++i) {
      p = diag[i] - sigma - (i == 0 ? 0.0 : off2 / p);
      if (p == 0.0) p = -std::numeric_limits<double>::epsilon() * (std::fabs(diag[i]) + 1.0);
      if (p < 0.0) ++count;
    }
    return count;
  }

  double norm_inf() const {
    double m = 0.0;
    for (double d : diag) m = std::max(m, std::fabs(d) + 2.0 * std::fabs(off));
    return m;
  }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i < n; ++i) {
      double v = diag[i] * x[i];
      if (i > 0) v += off * x[i - 1];
      if (i + 1 < n) v += off * x[i + 1];
      y[i] = v;
    }
  }

  // Solves (T - sigma) x = b in place by Gaussian elimination without pivoting.
  void solve_shifted(double sigma, std::vector<double>& b) const {
    const std::size_t n = diag.size();
    const double tiny = std::numeric_limits<double>::epsilon() * norm_inf();
    std::vector<double> piv(n);
    piv[0] = diag[0] - sigma;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::fabs(piv[i - 1]) < tiny) piv[i - 1] = piv[i - 1] < 0.0 ? -tiny : tiny;
      const double m = off / piv[i - 1];
      piv[i] = diag[i] - sigma - m * off;
      b[i] -= m * b[i - 1];
    }
    if (std::fabs(piv[n - 1]) < tiny) piv[n - 1] = piv[n - 1] < 0.0 ? -tiny : tiny;
    b[n - 1] /= piv[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - off * b[i + 1]) / piv[i];
  }
};

Tridiagonal radial_operator(double nu, double eps, int intervals) {
  const double h = (1.0 - eps) / intervals;
  const double c = nu * nu - 0.25;
  Tridiagonal t;
  t.off = -1.0 / (h * h);
  t.diag.resize(intervals - 1);
  for (int i = 1; i < intervals; ++i) {
    const double r = eps + i * h;
    t.diag[i - 1] = 2.0 / (h * h) + c / (r * r);
  }
  return t;
}

struct TridiagonalEigen {
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Sturm bisection isolates the k-th eigenvalue; inverse iteration then refines it.
TridiagonalEigen kth_eigenvalue(const Tridiagonal& t, int k) {
  if (k > t.size()) fail(ErrorKind::Domain, "radial_fd_eigen: k exceeds the number of grid nodes");
  double lo = std::numeric_limits<double>::max();
  double hi = std::numeric_limits<double>::lowest();
  for (double d : t.diag) {
    lo = std::min(lo, d - 2.0 * std::fabs(t.off));
    hi = std::max(hi, d + 2.0 * std::fabs(t.off));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (t.count_below(mid) >= k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  const double sigma = 0.5 * (lo + hi);

  const std::size_t n = t.diag.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i));
  std::vector<double> tx(n);
  const double scale = t.norm_inf();
  TridiagonalEigen out;
  for (int it = 1; it <= kMaxIterations; ++it) {
    t.solve_shifted(sigma, x);
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : x) v /= norm;
    t.multiply(x, tx);
    double rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) rho += x[i] * tx[i];
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res += (tx[i] - rho * x[i]) * (tx[i] - rho * x[i]);
    res = std::sqrt(res) / scale;
    out = {rho, res, it};
    if (res <= kResidualTol) return out;
  }
  fail(ErrorKind::Convergence, "radial_fd_eigen: inverse iteration did not reach residual 1e-10 in " +
                                   std::to_string(kMaxIterations) + " iterations");
}

}  // namespace

void FdConfig::validate() const {
  require(radial_nodes >= 64, "FdConfig: radial_nodes must be at least 64");
  require(angular_nodes >= 16, "FdConfig: angular_nodes must be at least 16");
  if (richardson) {
    require(power_of_two(radial_nodes), "FdConfig: radial_nodes must be a power of two with richardson");
    require(power_of_two(angular_nodes), "FdConfig: angular_nodes must be a power of two with richardson");
  }
  require(std::isfinite(shift), "FdConfig: shift must be finite");
}

RadialFdResult radial_fd_solve(const geometry::ConeGeometry& g, double l, double eps, int k,
                               const FdConfig& cfg) {
  cfg.validate();
  require(l >= 0.0, "radial_fd_eigen: l must be nonnegative");
  require(eps >= 0.0 && eps < 1.0, "radial_fd_eigen: eps must lie in [0, 1)");
  require(k >= 1, "radial_fd_eigen: k is 1-based");
  const double nu = l + 0.5 * (g.dim() - 2);

  RadialFdResult out;
  const TridiagonalEigen fine = kth_eigenvalue(radial_operator(nu, eps, cfg.radial_nodes), k);
  out.raw = fine.value;
  out.value = fine.value;
  out.residual = fine.residual;
  out.iterations = fine.iterations;
  if (cfg.richardson) {
    out.coarse = kth_eigenvalue(radial_operator(nu, eps, cfg.radial_nodes / 2), k).value;
    out.coarsest = kth_eigenvalue(radial_operator(nu, eps, cfg.radial_nodes / 4), k).value;
    out.value = (4.0 * out.raw - out.coarse) / 3.0;
    const double ratio = (out.coarsest - out.coarse) / (out.coarse - out.raw);
    out.observed_order = ratio > 0.0 && std::isfinite(ratio) ? std::log2(ratio) : 0.0;
  }
  return out;
}

double radial_fd_eigen(const geometry::ConeGeometry& g, double l, double eps, int k,
                       const FdConfig& cfg) {
  return radial_fd_solve(g, l, eps, k, cfg).value;
}

PolarFdResult polar_fd_solve(double beta, double eps, const FdConfig& cfg) {
  cfg.validate();
  require(beta > 0.0 && beta < std::numbers::pi, "polar_fd_eigen: beta must lie in (0, pi)");
  require(eps >= 0.0 && eps < 1.0, "polar_fd_eigen: eps must lie in [0, 1)");
  const int m = cfg.radial_nodes;
  const int q = cfg.angular_nodes;
  const double hr = (1.0 - eps) / m;
  const double ht = 2.0 * beta / q;
  const int nr = m - 1;
  const int nt = q - 1;
  const int n = nr * nt;
  auto index = [nt](int i, int j) { return (i - 1) * nt + (j - 1); };

  // r-weighted form: -(r u_r)_r - u_tt / r = lambda r u.
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * 5);
  Eigen::VectorXd weight(n);
  for (int i = 1; i <= nr; ++i) {
    const double r = eps + i * hr;
    const double r_in = r - 0.5 * hr;
    const double r_out = r + 0.5 * hr;
    const double radial_in = r_in / (hr * hr);
    const double radial_out = r_out / (hr * hr);
    const double angular = 1.0 / (r * ht * ht);
    for (int j = 1; j <= nt; ++j) {
      const int row = index(i, j);
      weight[row] = r;
      entries.emplace_back(row, row, radial_in + radial_out + 2.0 * angular - cfg.shift * r);
      if (i > 1) entries.emplace_back(row, index(i - 1, j), -radial_in);
      if (i < nr) entries.emplace_back(row, index(i + 1, j), -radial_out);
      if (j > 1) entries.emplace_back(row, index(i, j - 1), -angular);
      if (j < nt) entries.emplace_back(row, index(i, j + 1), -angular);
    }
  }
  Eigen::SparseMatrix<double> shifted(n, n);
  shifted.setFromTriplets(entries.begin(), entries.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::Convergence, "polar_fd_eigen: factorization of the shifted operator failed");
  }

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  PolarFdResult out;
  out.unknowns = n;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const Eigen::VectorXd rhs = weight.cwiseProduct(x);
    x = solver.solve(rhs);
    x /= std::sqrt(x.dot(weight.cwiseProduct(x)));
    const Eigen::VectorXd bx = weight.cwiseProduct(x);
    const Eigen::VectorXd ax = shifted * x + cfg.shift * bx;
    const double rho = x.dot(ax);  // x is B-normalized
    const double res = (ax - rho * bx).norm() / (std::fabs(rho) * bx.norm());
    out.value = rho;
    out.residual = res;
    out.iterations = it;
    if (res <= kResidualTol) return out;
  }
  fail(ErrorKind::Convergence, "polar_fd_eigen: inverse iteration did not reach residual 1e-10 in " +
                                   std::to_string(kMaxIterations) + " iterations");
}

double polar_fd_eigen(double beta, double eps, const FdConfig& cfg) {
  return polar_fd_solve(beta, eps, cfg).value;
}

}  // namespace conespec::oracle
