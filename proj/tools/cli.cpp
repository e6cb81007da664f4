#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "conespec/asymptotics.hpp"
#include "conespec/charval.hpp"
#include "conespec/error.hpp"
#include "conespec/geometry.hpp"
#include "conespec/oracle.hpp"
#include "conespec/spectrum.hpp"
#include "conespec/version.hpp"

namespace conespec::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kExitArgs = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitRefusal = 4;

const std::vector<std::string> kCommands = {"charval", "eigen", "rate", "sharpness", "oracle"};

bool accepts(const std::string& command, std::string_view flag) {
  static const std::map<std::string, std::vector<std::string_view>> table = {
      {"charval", {"count"}},
      {"eigen", {"eps", "count", "raw-mode", "nu"}},
      {"rate", {"l", "k", "points", "eps-max", "synthetic-power", "tol-match"}},
      {"sharpness", {"points", "eps-max", "tol-match", "samples"}},
      {"oracle", {"l", "eps", "k", "nodes", "angular-nodes", "richardson", "polar"}},
  };
  const auto& flags = table.at(command);
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt12(v).c_str(), nullptr);
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_value(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return fmt12(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) return csv_field(v.get<std::string>());
  return csv_field(v.dump());
}

void flatten(const json& v, const std::string& prefix, std::ostringstream& os) {
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      flatten(item, prefix.empty() ? key : prefix + "." + key, os);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      flatten(v[i], prefix + "[" + std::to_string(i) + "]", os);
    }
  } else {
    os << csv_field(prefix) << "," << csv_value(v) << "\n";
  }
}

struct Result {
  json outputs;
  json tolerances = json::object();
  std::string csv;
};

json inputs_of(const RunConfig& c) {
  json in;
  in["dim"] = c.dim;
  in["beta"] = c.beta_text;
  in["beta_radians"] = num(c.beta);
  in["format"] = c.format;
  in["seed"] = c.seed;
  const auto& cmd = c.command;
  if (accepts(cmd, "eps")) in["eps"] = c.eps;
  if (accepts(cmd, "count")) in["count"] = c.count;
  if (accepts(cmd, "raw-mode")) in["raw_mode"] = c.raw_mode;
  if (accepts(cmd, "nu")) in["nu"] = c.nu ? json(*c.nu) : json(nullptr);
  if (accepts(cmd, "l")) in["l"] = c.l ? json(*c.l) : json(nullptr);
  if (accepts(cmd, "k")) in["k"] = c.k;
  if (accepts(cmd, "points")) in["points"] = c.points;
  if (accepts(cmd, "eps-max")) in["eps_max"] = c.eps_max;
  if (accepts(cmd, "synthetic-power")) {
    in["synthetic_power"] = c.synthetic_power ? json(*c.synthetic_power) : json(nullptr);
  }
  if (accepts(cmd, "tol-match")) in["tol_match"] = c.tol_match;
  if (accepts(cmd, "samples")) in["samples"] = c.samples;
  if (accepts(cmd, "nodes")) in["nodes"] = c.nodes;
  if (accepts(cmd, "angular-nodes")) in["angular_nodes"] = c.angular_nodes;
  if (accepts(cmd, "richardson")) in["richardson"] = c.richardson;
  if (accepts(cmd, "polar")) in["polar"] = c.polar;
  return in;
}

Result cmd_charval(const RunConfig& c) {
  const geometry::ConeGeometry g(c.dim, c.beta);
  const charval::CharacteristicValue cv = charval::characteristic_value_auto(g);
  const charval::AngularMode first = charval::make_mode(c.dim, cv.value, 1);
  Result r;
  json prefix = json::array();
  std::ostringstream csv;
  csv << "index,l,nu,method\n";
  if (cv.method == charval::Method::Asymptotic) {
    r.outputs["note"] = "Sigma_beta prefix needs the Legendre path; only l_beta is reported";
    prefix.push_back(num(cv.value));
    csv << 1 << "," << fmt12(cv.value) << "," << fmt12(first.nu) << ","
        << charval::to_string(cv.method) << "\n";
  } else if (c.count > 0) {
    for (const charval::AngularMode& m : charval::sigma_beta(g, c.count)) {
      prefix.push_back(num(m.l));
      csv << m.index << "," << fmt12(m.l) << "," << fmt12(m.nu) << ","
          << charval::to_string(cv.method) << "\n";
    }
  }
  r.outputs["l_beta"] = num(cv.value);
  r.outputs["method"] = std::string(charval::to_string(cv.method));
  r.outputs["nu"] = num(first.nu);
  r.outputs["sigma_prefix"] = prefix;
  r.outputs["gradient_exponent"] = num(spectrum::gradient_exponent(first));
  r.outputs["p_sup"] = num(spectrum::integrability_threshold(g, cv.value));
  r.tolerances["legendre_root_abs"] = 1e-13;
  r.tolerances["n4_closed_form_check"] = 1e-6;
  r.csv = csv.str();
  return r;
}

json record_json(int rank, const spectrum::EigenvalueRecord& rec) {
  return {{"rank", rank},           {"l", num(rec.mode.l)},     {"nu", num(rec.mode.nu)},
          {"k", rec.radial_index},  {"lambda", num(rec.lambda)}, {"eps", num(rec.eps)},
          {"residual", num(rec.residual)}};
}

Result cmd_eigen(const RunConfig& c) {
  std::vector<spectrum::EigenvalueRecord> records;
  bool axisymmetric = false;
  if (c.raw_mode) {
    require(c.nu.has_value(), "eigen --raw-mode requires --nu");
    require(*c.nu > 0.0, "eigen: --nu must be positive");
    require(c.count >= 0 && c.count <= 50, "eigen --raw-mode: --count must lie in [0, 50]");
    const charval::AngularMode mode{c.dim, *c.nu - 0.5 * (c.dim - 2), *c.nu, 1};
    for (int k = 1; k <= c.count; ++k) {
      records.push_back(c.eps == 0.0 ? spectrum::unperturbed_eigen(mode, k)
                                     : spectrum::cross_product_eigen(mode, c.eps, k));
    }
  } else {
    const geometry::ConeGeometry g(c.dim, c.beta);
    spectrum::SpectrumListing listing = spectrum::spectrum_merge(g, c.eps, c.count);
    records = std::move(listing.records);
    axisymmetric = listing.axisymmetric_sector;
  }
  Result r;
  json list = json::array();
  std::ostringstream csv;
  csv << "rank,l,k,lambda,eps\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    list.push_back(record_json(static_cast<int>(i) + 1, rec));
    csv << i + 1 << "," << fmt12(rec.mode.l) << "," << rec.radial_index << ","
        << fmt12(rec.lambda) << "," << fmt12(rec.eps) << "\n";
  }
  r.outputs["records"] = list;
  r.outputs["axisymmetric_sector"] = axisymmetric;
  r.tolerances["root_abs"] = 0.0;
  r.csv = csv.str();
  return r;
}

Result cmd_rate(const RunConfig& c) {
  const geometry::ConeGeometry g(c.dim, c.beta);
  const charval::CharacteristicValue cv = charval::characteristic_value_auto(g);
  const double l = c.l.value_or(cv.value);
  const charval::AngularMode mode = charval::make_mode(c.dim, l, 1);
  const double limit = spectrum::unperturbed_eigen(mode, c.k).lambda;
  const asymptotics::ExpansionData data = asymptotics::coefficient_a(g, mode, limit);
  asymptotics::GridOptions opts;
  opts.points = c.points;
  opts.eps_max = c.eps_max;
  const std::vector<double> grid = asymptotics::default_eps_grid(data, opts);

  std::vector<double> volumes;
  for (double eps : grid) volumes.push_back(data.cap_measure * std::pow(eps, c.dim) / c.dim);
  std::vector<double> gaps;
  asymptotics::RateFit fit;
  if (c.synthetic_power) {
    for (double v : volumes) gaps.push_back(data.coefficient * std::pow(v, *c.synthetic_power));
    fit = asymptotics::rate_fit_points(volumes, gaps);
  } else {
    const auto branch = spectrum::track_branch(mode, c.k, grid);
    for (const auto& rec : branch) gaps.push_back(rec.lambda - limit);
    fit = asymptotics::rate_fit(branch, volumes);
  }

  Result r;
  r.outputs["l"] = num(l);
  r.outputs["l_method"] = c.l ? "user" : std::string(charval::to_string(cv.method));
  r.outputs["sharpness_regime"] = c.beta > 0.5 * kPi;
  r.outputs["source"] = c.synthetic_power ? "synthetic" : "branch";
  r.outputs["injected_power"] = c.synthetic_power ? num(*c.synthetic_power) : json(nullptr);
  r.outputs["limit_lambda"] = num(limit);
  r.outputs["coefficient"] = num(data.coefficient);
  r.outputs["coefficient_kind"] = data.kind == asymptotics::CoefficientKind::B ? "b" : "a";
  r.outputs["analytic_exponent"] = num(data.exponent);
  r.outputs["cap_measure"] = num(data.cap_measure);
  r.outputs["eps_grid"] = nums(grid);
  r.outputs["volumes"] = nums(volumes);
  r.outputs["gaps"] = nums(gaps);
  r.outputs["slope"] = num(fit.slope);
  r.outputs["intercept"] = num(fit.intercept);
  r.outputs["fitted_coefficient"] = num(std::exp(fit.intercept));
  r.outputs["max_residual"] = num(fit.max_residual);
  r.outputs["match"] = std::fabs(fit.slope - data.exponent) <= c.tol_match;
  r.tolerances["slope_match"] = c.tol_match;
  r.tolerances["noise_floor_rel"] = asymptotics::kNoiseFloor;
  std::ostringstream csv;
  csv << "eps,volume,gap,log_volume,log_gap\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv << fmt12(grid[i]) << "," << fmt12(volumes[i]) << "," << fmt12(gaps[i]) << ","
        << fmt12(fit.points[i].log_volume) << "," << fmt12(fit.points[i].log_gap) << "\n";
  }
  r.csv = csv.str();
  return r;
}

Result cmd_sharpness(const RunConfig& c) {
  const geometry::ConeGeometry g(c.dim, c.beta);
  asymptotics::GridOptions opts;
  opts.points = c.points;
  opts.eps_max = c.eps_max;
  const asymptotics::SharpnessReport rep = asymptotics::sharpness_report(g, c.tol_match, opts);

  Result r;
  json& o = r.outputs;
  o["dim"] = rep.dim;
  o["l_beta"] = num(rep.l_beta);
  o["l_method"] = std::string(charval::to_string(rep.l_method));
  o["p_sup"] = num(rep.p_sup);
  o["stability_exponent_limit"] = num(rep.stability_exponent_limit);
  o["analytic_exponent"] = num(rep.analytic_exponent);
  o["reference_limit"] = rep.reference_limit ? num(*rep.reference_limit) : json(nullptr);
  o["corollary_threshold"] = num(rep.corollary_threshold);
  if (rep.fit) {
    o["limit_lambda"] = num(rep.limit_lambda);
    o["coefficient_b"] = num(rep.coefficient_b);
    o["eps_grid"] = nums(rep.eps_grid);
    o["volumes"] = nums(rep.volumes);
    o["gaps"] = nums(rep.gaps);
    o["slope"] = num(rep.fit->slope);
    o["fitted_coefficient"] = num(rep.fitted_coefficient);
    o["max_residual"] = num(rep.fit->max_residual);
    o["match"] = rep.match;
    o["improvement_excluded"] = rep.improvement_excluded;
  } else {
    o["slope"] = nullptr;
    o["match"] = nullptr;
    o["improvement_excluded"] = nullptr;
  }
  o["note"] = rep.note;

  // Removed volume of the Lipschitz truncation against the two exact cuts
  // that bracket it.
  const double eps_mc = 0.1;
  const geometry::PerturbedCone lip(g, eps_mc, geometry::CutVariant::LipschitzCut);
  const geometry::McEstimate mc = geometry::mc_removed_volume(lip, c.samples, c.seed);
  const double a = geometry::inclusion_constant(c.beta);
  o["lipschitz"] = {
      {"eps", eps_mc},
      {"inclusion_constant", num(a)},
      {"removed_volume_estimate", num(mc.estimate)},
      {"std_error", num(mc.std_error)},
      {"lower_bound", num(geometry::removed_volume({g, a * eps_mc, geometry::CutVariant::ExactCut}))},
      {"upper_bound", num(geometry::removed_volume({g, eps_mc, geometry::CutVariant::ExactCut}))},
  };
  r.tolerances["slope_match"] = rep.tolerance;
  r.tolerances["noise_floor_rel"] = asymptotics::kNoiseFloor;
  std::ostringstream csv;
  csv << "field,value\n";
  flatten(o, "", csv);
  r.csv = csv.str();
  return r;
}

Result cmd_oracle(const RunConfig& c) {
  const geometry::ConeGeometry g(c.dim, c.beta);
  oracle::FdConfig fd;
  fd.radial_nodes = c.nodes;
  fd.angular_nodes = c.angular_nodes;
  fd.richardson = c.richardson;
  fd.validate();

  Result r;
  json& o = r.outputs;
  if (c.polar) {
    require(c.dim == 2, "oracle --polar: the polar grid solver is planar (dim 2)");
    require(!c.richardson, "oracle --polar: richardson applies to the radial solver only");
    require(c.k == 1, "oracle --polar: only the first eigenvalue is computed");
    const double l = kPi / (2.0 * c.beta);
    require(!c.l || std::fabs(*c.l - l) < 1e-12, "oracle --polar: l is fixed by beta");
    const charval::AngularMode mode = charval::make_mode(2, l, 1);
    const double spectral = c.eps == 0.0 ? spectrum::unperturbed_eigen(mode, 1).lambda
                                         : spectrum::cross_product_eigen(mode, c.eps, 1).lambda;
    const oracle::PolarFdResult res = oracle::polar_fd_solve(c.beta, c.eps, fd);
    o["solver"] = "polar";
    o["l"] = num(l);
    o["spectral"] = num(spectral);
    o["fd_raw"] = num(res.value);
    o["fd_value"] = num(res.value);
    o["rel_diff"] = num(std::fabs(res.value - spectral) / spectral);
    o["unknowns"] = res.unknowns;
    o["iterations"] = res.iterations;
    o["residual"] = num(res.residual);
    r.tolerances["agreement_rel"] = 1e-2;
  } else {
    const double l = c.l.value_or(charval::characteristic_value_auto(g).value);
    const charval::AngularMode mode = charval::make_mode(c.dim, l, 1);
    const double spectral = c.eps == 0.0 ? spectrum::unperturbed_eigen(mode, c.k).lambda
                                         : spectrum::cross_product_eigen(mode, c.eps, c.k).lambda;
    const oracle::RadialFdResult res = oracle::radial_fd_solve(g, l, c.eps, c.k, fd);
    o["solver"] = "radial";
    o["l"] = num(l);
    o["spectral"] = num(spectral);
    o["fd_raw"] = num(res.raw);
    o["fd_value"] = num(res.value);
    o["rel_diff_raw"] = num(std::fabs(res.raw - spectral) / spectral);
    o["rel_diff"] = num(std::fabs(res.value - spectral) / spectral);
    o["richardson"] = c.richardson ? json{{"coarse", num(res.coarse)},
                                          {"coarsest", num(res.coarsest)},
                                          {"observed_order", num(res.observed_order)}}
                                   : json(nullptr);
    o["iterations"] = res.iterations;
    o["residual"] = num(res.residual);
    r.tolerances["agreement_rel"] = c.richardson ? 1e-4 : 1e-2;
  }
  o["nodes"] = c.nodes;
  o["angular_nodes"] = c.polar ? json(c.angular_nodes) : json(nullptr);
  r.tolerances["inverse_iteration_residual"] = 1e-10;
  std::ostringstream csv;
  csv << "field,value\n";
  flatten(o, "", csv);
  r.csv = csv.str();
  return r;
}

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write to " + tmp + " failed");
  }
  std::filesystem::rename(tmp, path);
}

void report_error(std::ostream& err, const std::string& command, std::string_view kind,
                  const std::string& message, int code) {
  const json e = {{"command", command},
                  {"error", {{"kind", std::string(kind)}, {"message", message}}},
                  {"exit_code", code}};
  err << e.dump() << "\n";
}

int exit_code_for(const Error& e) {
  if (e.kind() == ErrorKind::Refusal) return kExitRefusal;
  return e.numerical() ? kExitNumerical : kExitArgs;
}

}  // namespace

double parse_beta(std::string_view text) {
  static const std::regex pi_form(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)",
      std::regex::icase);
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, pi_form)) {
    const double factor = m[1].matched ? std::stod(m[1].str()) : 1.0;
    const double divisor = m[2].matched ? std::stod(m[2].str()) : 1.0;
    require(divisor != 0.0, "beta: division by zero in '" + s + "'");
    return factor * kPi / divisor;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorKind::Domain, "beta: cannot parse '" + s + "'");
  }
  require(s.find_first_not_of(" \t", used) == std::string::npos, "beta: cannot parse '" + s + "'");
  return v;
}

RunConfig config_from_payload(const json& payload) {
  RunConfig c;
  c.command = payload.at("command").get<std::string>();
  const json& in = payload.at("inputs");
  auto get = [&in](const char* key, auto& field) {
    if (in.contains(key) && !in[key].is_null()) in[key].get_to(field);
  };
  auto get_opt = [&in](const char* key, std::optional<double>& field) {
    if (in.contains(key) && !in[key].is_null()) field = in[key].get<double>();
  };
  get("dim", c.dim);
  get("beta", c.beta_text);
  c.beta = parse_beta(c.beta_text);
  get("format", c.format);
  get("seed", c.seed);
  get("eps", c.eps);
  get("count", c.count);
  get("raw_mode", c.raw_mode);
  get_opt("nu", c.nu);
  get_opt("l", c.l);
  get("k", c.k);
  get("points", c.points);
  get("eps_max", c.eps_max);
  get_opt("synthetic_power", c.synthetic_power);
  get("tol_match", c.tol_match);
  get("samples", c.samples);
  get("nodes", c.nodes);
  get("angular_nodes", c.angular_nodes);
  get("richardson", c.richardson);
  get("polar", c.polar);
  return c;
}

std::vector<std::string> to_args(const RunConfig& c) {
  std::vector<std::string> a = {c.command, "--dim", std::to_string(c.dim), "--beta", c.beta_text,
                                "--format", c.format, "--seed", std::to_string(c.seed)};
  auto flag = [&](std::string_view name, const std::string& value) {
    if (accepts(c.command, name)) {
      a.push_back("--" + std::string(name));
      a.push_back(value);
    }
  };
  auto toggle = [&](std::string_view name, bool on) {
    if (on && accepts(c.command, name)) a.push_back("--" + std::string(name));
  };
  flag("eps", fmt17(c.eps));
  flag("count", std::to_string(c.count));
  toggle("raw-mode", c.raw_mode);
  if (c.nu) flag("nu", fmt17(*c.nu));
  if (c.l) flag("l", fmt17(*c.l));
  flag("k", std::to_string(c.k));
  flag("points", std::to_string(c.points));
  flag("eps-max", fmt17(c.eps_max));
  if (c.synthetic_power) flag("synthetic-power", fmt17(*c.synthetic_power));
  flag("tol-match", fmt17(c.tol_match));
  flag("samples", std::to_string(c.samples));
  if (c.nodes > 0) flag("nodes", std::to_string(c.nodes));
  flag("angular-nodes", std::to_string(c.angular_nodes));
  toggle("richardson", c.richardson);
  toggle("polar", c.polar);
  if (!c.out_file.empty()) {
    a.push_back("--out");
    a.push_back(c.out_file);
  }
  return a;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  if (const char* env = std::getenv("CONESPEC_FORMAT"); env && *env) c.format = env;

  CLI::App app{"Dirichlet eigenvalues of spherical cones with a truncated vertex", "conespec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> about = {
      {"charval", "characteristic value l_beta and the first elements of Sigma_beta"},
      {"eigen", "smallest eigenvalues of the cone or the truncated cone"},
      {"rate", "fit the eigenvalue gap against the removed volume"},
      {"sharpness", "exponent bookkeeping and empirical rate for beta in (pi/2, pi)"},
      {"oracle", "compare spectral eigenvalues with finite differences"},
  };
  for (const std::string& name : kCommands) {
    CLI::App* s = app.add_subcommand(name, about.at(name));
    subs[name] = s;
    s->add_option("--dim", c.dim, "space dimension N")->capture_default_str();
    s->add_option("--beta", c.beta_text, "half-angle: radians or a multiple of pi, e.g. 0.75pi")
        ->capture_default_str();
    s->add_option("--format", c.format, "json or csv (default from CONESPEC_FORMAT)")
        ->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--out", c.out_file, "write the payload to FILE instead of stdout");
    s->add_option("--seed", c.seed, "random seed")->capture_default_str();
    auto opt = [&](std::string_view flag, auto& field, const std::string& help) {
      if (accepts(name, flag)) {
        s->add_option("--" + std::string(flag), field, help)->capture_default_str();
      }
    };
    auto toggle = [&](std::string_view flag, bool& field, const std::string& help) {
      if (accepts(name, flag)) s->add_flag("--" + std::string(flag), field, help);
    };
    opt("eps", c.eps, "inner radius eps");
    opt("count", c.count, "number of values to list");
    toggle("raw-mode", c.raw_mode, "list zeros for a single Bessel order --nu");
    opt("nu", c.nu, "Bessel order for --raw-mode");
    opt("l", c.l, "angular parameter (default l_beta)");
    opt("k", c.k, "radial index");
    opt("points", c.points, "eps grid points");
    opt("eps-max", c.eps_max, "largest eps of the grid");
    opt("synthetic-power", c.synthetic_power, "fit an exact power law instead of the branch");
    opt("tol-match", c.tol_match, "slope match tolerance");
    opt("samples", c.samples, "Monte Carlo samples");
    opt("nodes", c.nodes, "radial intervals (default 4096, 256 with --polar)");
    opt("angular-nodes", c.angular_nodes, "angular intervals for --polar");
    toggle("richardson", c.richardson, "two-grid extrapolation of the radial solver");
    toggle("polar", c.polar, "2D polar-grid solver (dim 2)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string command;
    for (const auto& [name, s] : subs) {
      if (s->parsed()) command = name;
    }
    report_error(err, command, "argument", e.what(), kExitArgs);
    return kExitArgs;
  }
  for (const auto& [name, s] : subs) {
    if (s->parsed()) c.command = name;
  }

  try {
    require(c.format == "json" || c.format == "csv", "format must be json or csv");
    c.beta = parse_beta(c.beta_text);
    require(c.beta > 0.0 && c.beta < kPi, "beta must lie in (0, pi); got " + c.beta_text);
    require(c.dim >= 2, "dim must be at least 2");
    if (c.nodes == 0 && c.command == "oracle") c.nodes = c.polar ? 256 : 4096;

    Result r;
    if (c.command == "charval") r = cmd_charval(c);
    if (c.command == "eigen") r = cmd_eigen(c);
    if (c.command == "rate") r = cmd_rate(c);
    if (c.command == "sharpness") r = cmd_sharpness(c);
    if (c.command == "oracle") r = cmd_oracle(c);

    std::string text;
    if (c.format == "csv") {
      text = r.csv;
    } else {
      const json payload = {{"command", c.command},
                            {"inputs", inputs_of(c)},
                            {"outputs", r.outputs},
                            {"versions", {{"conespec", kVersion}, {"schema", 1}}},
                            {"tolerances", r.tolerances}};
      text = payload.dump(2) + "\n";
    }
    if (c.out_file.empty()) {
      out << text;
    } else {
      write_atomic(c.out_file, text);
    }
    return 0;
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    report_error(err, c.command, to_string(e.kind()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error(err, c.command, "internal", e.what(), kExitNumerical);
    return kExitNumerical;
  }
}

}  // namespace conespec::cli
