#include "carnot/commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "carnot/bounds.hpp"
#include "carnot/report_io.hpp"
#include "carnot/test_function.hpp"
#include "carnot/verify.hpp"
#include "carnot/zfield.hpp"

namespace carnot {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed number '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("malformed number '" + item + "'");
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

StepTwoGroup make_group(const RunConfig& cfg) {
  if (cfg.group == "heisenberg") return StepTwoGroup::heisenberg(cfg.n);
  if (cfg.group == "product") return StepTwoGroup::heisenberg_product(cfg.n, cfg.N);
  if (cfg.group == "nonisotropic") {
    if (cfg.lambdas.empty()) throw std::invalid_argument("nonisotropic group needs --lambdas");
    const std::vector<double> l = parse_list(cfg.lambdas);
    return StepTwoGroup::single_vertical(
        Eigen::Map<const Eigen::VectorXd>(l.data(), static_cast<Eigen::Index>(l.size())));
  }
  if (cfg.group == "general") {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(cfg.lambdas);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_list(row));
    if (rows.empty()) throw std::invalid_argument("general group needs --lambdas rows");
    const std::size_t n = rows[0].size();
    Eigen::MatrixXd c(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[j].size() != n) throw std::invalid_argument("general group: ragged rows");
      for (std::size_t i = 0; i < n; ++i) c(j, i) = rows[j][i];
    }
    // Select, for each vertical direction in turn, the first unused block
    // coupled to it.
    std::vector<int> selected;
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
      int pick = -1;
      for (Eigen::Index i = 0; i < c.cols() && pick < 0; ++i) {
        bool used = false;
        for (int s : selected) used = used || s == i;
        if (!used && c(j, i) != 0.0) pick = static_cast<int>(i);
      }
      if (pick < 0) throw std::invalid_argument("general group: no block for a vertical direction");
      selected.push_back(pick);
    }
    return StepTwoGroup(c, selected, "general");
  }
  throw std::invalid_argument("unknown group '" + cfg.group + "'");
}

namespace {

nlohmann::ordered_json config_json(const RunConfig& cfg) {
  nlohmann::ordered_json c;
  c["command"] = cfg.command;
  if (cfg.command == "verify") c["target"] = cfg.target;
  c["group"] = cfg.group;
  c["n"] = cfg.n;
  if (cfg.group == "product") c["N"] = cfg.N;
  if (!cfg.lambdas.empty()) c["lambdas"] = cfg.lambdas;
  c["norm"] = cfg.norm;
  c["p"] = cfg.p;
  c["theta"] = cfg.theta;
  if (!cfg.quad_method.empty()) c["quad_method"] = cfg.quad_method;
  if (cfg.nodes) c["nodes"] = cfg.nodes;
  if (cfg.samples) c["samples"] = cfg.samples;
  if (cfg.count) c["count"] = cfg.count;
  if (cfg.command == "verify" && cfg.target == "sharpness") c["eps"] = cfg.eps;
  if (!cfg.point.empty()) c["point"] = cfg.point;
  return c;
}

CommandOutput render(const RunConfig& cfg, const std::vector<Result>& results) {
  CommandOutput out;
  if (cfg.format == "csv") {
    out.text = render_csv(results);
  } else if (cfg.format == "json") {
    out.text = render_json({cfg.seed, config_json(cfg)}, results);
  } else {
    throw std::invalid_argument("unknown format '" + cfg.format + "'");
  }
  for (const auto& r : results)
    if (!result_passes(r)) out.exit_code = 1;
  return out;
}

std::vector<double> theta_grid(const RunConfig& cfg, double Q, double p) {
  if (!cfg.theta.empty()) return cfg.theta;
  std::vector<double> grid = {0.0, 0.5, 1.0, 2.0};
  if (std::find(grid.begin(), grid.end(), Q / p) == grid.end()) grid.push_back(Q / p);
  return grid;
}

double first_theta(const RunConfig& cfg) { return cfg.theta.empty() ? 1.0 : cfg.theta[0]; }

NormModel make_norm(const RunConfig& cfg) {
  return NormModel(norm_kind_from_string(cfg.norm), make_group(cfg));
}

SupOptions sup_options(const RunConfig& cfg) {
  SupOptions o;
  if (cfg.samples > 0) o.samples = static_cast<int>(cfg.samples);
  if (cfg.nodes > 0) o.scan_nodes = cfg.nodes;
  return o;
}

// Tensor grids on the polar chart for H^1-like groups (n = 1, h = 1), Monte
// Carlo on the ambient box otherwise.
QuadratureSpec base_quadrature(const RunConfig& cfg, const StepTwoGroup& g) {
  QuadratureSpec q;
  const bool tensor_ok = g.blocks() == 1 && g.vertical_dim() == 1;
  q.method = tensor_ok ? QuadMethod::tensor_grid : QuadMethod::monte_carlo;
  if (!cfg.quad_method.empty()) q.method = quad_method_from_string(cfg.quad_method);
  if (q.method == QuadMethod::tensor_grid) {
    if (!tensor_ok) throw std::invalid_argument("tensor quadrature needs n = 1, h = 1");
    q.chart = Chart::phi_polar;
    q.radial_nodes = 300;
    q.angle_nodes = 64;
    q.lambda_nodes = 200;
    if (cfg.nodes > 0) q.radial_nodes = q.angle_nodes = q.lambda_nodes = cfg.nodes;
  } else {
    q.chart = Chart::ambient;
    q.samples = cfg.samples > 0 ? cfg.samples : 1'000'000;
  }
  q.seed = cfg.seed;
  return q;
}

}  // namespace

CommandOutput cmd_bounds(const RunConfig& cfg) {
  const NormModel d = make_norm(cfg);
  const double Q = d.group().homogeneous_dimension();
  std::vector<Result> results;
  for (double p : cfg.p) {
    for (double theta : theta_grid(cfg, Q, p)) {
      const ZFieldSpec spec = make_zfield_spec(d, p, theta);
      try {
        results.emplace_back(bound_report(spec, sup_options(cfg)));
      } catch (const ConditionError& e) {
        BoundReport r;
        r.group = d.group().label();
        r.norm = to_string(d.kind());
        r.p = p;
        r.theta = theta;
        r.Q = Q;
        r.emitted = false;
        r.note = e.what();
        results.emplace_back(std::move(r));
      }
    }
  }
  return render(cfg, results);
}

CommandOutput cmd_supz(const RunConfig& cfg) {
  const NormModel d = make_norm(cfg);
  const double p = cfg.p.at(0), theta = first_theta(cfg);
  const ZFieldSpec spec = make_zfield_spec(d, p, theta);
  const SupResult sup = sup_z_norm(spec, sup_options(cfg));
  const double Q = spec.Q();

  std::vector<std::pair<double, double>> profile;
  std::string x_name, y_name;
  const int nodes = cfg.nodes > 0 ? cfg.nodes : 401;
  if (d.kind() == NormKind::cc) {
    x_name = "nu";
    y_name = "g";
    const double two_pi = 2.0 * std::numbers::pi;
    for (int k = 0; k < nodes; ++k) {
      const double nu = -two_pi + 2.0 * two_pi * k / (nodes - 1);
      profile.push_back({nu, g_cc(Q, p, theta, nu)});
    }
  } else if (sup.method == SupMethod::closed_form) {
    // lambda = tan(phi) covers the real line with nodes clustered near 0.
    x_name = "lambda";
    y_name = "Z_sq";
    for (int k = 1; k < nodes + 1; ++k) {
      const double phi = -0.5 * std::numbers::pi + std::numbers::pi * k / (nodes + 1);
      const double lam = std::tan(phi);
      profile.push_back({lam, z_profile_koranyi(Q, p, theta, lam)});
    }
  }

  Report r;
  r.check = "supz";
  r.pass = true;
  r.values = {{"sup_Z", sup.sup_value},
              {"sup_Z_sq", sup.sup_value * sup.sup_value},
              {"argmax_" + (sup.arg_name.empty() ? std::string("param") : sup.arg_name), sup.arg},
              {"Q", Q},
              {"p", p},
              {"theta", theta}};
  if (sup.arg_point) {
    for (int k = 0; k < sup.arg_point->z.size(); ++k)
      r.values.push_back({"arg_z" + std::to_string(k + 1), sup.arg_point->z[k]});
    for (int j = 0; j < sup.arg_point->t.size(); ++j)
      r.values.push_back({"arg_t" + std::to_string(j + 1), sup.arg_point->t[j]});
  }
  r.diagnostics = {{"numeric_check", sup.numeric_check},
                   {"samples", static_cast<double>(sup.samples)}};
  r.note = to_string(sup.method);

  CommandOutput out;
  if (cfg.format == "csv") {
    if (profile.empty())
      throw std::invalid_argument("no one-parameter profile for this norm; use --format json");
    out.text = render_profile_csv(x_name, y_name, profile);
    return out;
  }
  if (cfg.format != "json") throw std::invalid_argument("unknown format '" + cfg.format + "'");
  nlohmann::ordered_json doc;
  doc["meta"] = {{"version", kVersion}, {"seed", cfg.seed}, {"config", config_json(cfg)}};
  doc["results"] = nlohmann::ordered_json::array({to_json(r)});
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& [x, y] : profile) rows.push_back({x, y});
  doc["profile"] = {{"columns", {x_name, y_name}}, {"rows", rows}};
  out.text = doc.dump(2) + "\n";
  return out;
}

CommandOutput cmd_verify(const RunConfig& cfg) {
  std::vector<Result> results;
  const std::string& t = cfg.target;
  if (t == "counterexample") {
    ScanOptions opt;
    if (cfg.samples > 0) opt.samples = static_cast<int>(cfg.samples);
    const double pt = cfg.p.at(0) * first_theta(cfg);
    results.emplace_back(counterexample_scan(pt, false, opt));
    results.emplace_back(counterexample_scan(pt, true, opt));
    return render(cfg, results);
  }
  if (t == "product") {
    ProductOptions opt;
    if (cfg.samples > 0) opt.mc_samples = cfg.samples;
    opt.seed = cfg.seed;
    const int N = cfg.group == "product" ? cfg.N : 2;
    for (auto& r : product_check(cfg.n, N, cfg.p.at(0), first_theta(cfg), opt))
      results.emplace_back(std::move(r));
    return render(cfg, results);
  }

  const NormModel d = make_norm(cfg);
  const StepTwoGroup& g = d.group();
  const double Q = g.homogeneous_dimension();
  SplitMix64 rng(cfg.seed);

  if (t == "identity") {
    const int count = cfg.count > 0 ? cfg.count : 1;
    std::vector<std::pair<double, double>> grid;
    for (double p : cfg.p)
      for (double theta : cfg.theta.empty() ? std::vector<double>{0.0, 1.0, 2.0} : cfg.theta)
        grid.push_back({p, theta});
    for (int k = 0; k < count; ++k) {
      const TestFunction u = random_bump(d, rng);
      const QuadratureSpec q = support_quadrature(u, base_quadrature(cfg, g));
      for (auto& r : check_ibp_identity_grid(d, u, grid, q)) {
        r.note = u.describe() + " " + r.note;
        results.emplace_back(std::move(r));
      }
    }
  } else if (t == "hardy") {
    const int count = cfg.count > 0 ? cfg.count : 1;
    const double p = cfg.p.at(0), theta = first_theta(cfg);
    const ZFieldSpec spec = make_zfield_spec(d, p, theta);
    const BoundReport b = bound_report(spec);
    const double target = std::pow(std::abs((Q - p * theta) / p), p);
    for (int k = 0; k < count; ++k) {
      const TestFunction u = random_bump(d, rng);
      const Quotients qt = hardy_quotients(spec, u, support_quadrature(u, base_quadrature(cfg, g)));
      Report r;
      r.check = "hardy_quotient";
      r.values = {{"projected", qt.projected},
                  {"full", qt.full},
                  {"projected_target", target},
                  {"full_bound", b.bound}};
      r.bound = b.bound;
      r.diagnostics = {{"err_projected_num", qt.errors[0]},
                       {"err_full_num", qt.errors[1]},
                       {"err_den", qt.errors[2]}};
      r.tolerance = 1e-3;
      r.tolerance_kind = "absolute";
      r.pass = qt.projected >= target - 1e-3 && qt.full >= b.bound - 1e-3;
      r.note = u.describe();
      results.emplace_back(std::move(r));
    }
  } else if (t == "sharpness") {
    const ZFieldSpec spec = make_zfield_spec(d, cfg.p.at(0), first_theta(cfg));
    QuadratureSpec base;
    base.radial_nodes = cfg.nodes > 0 ? cfg.nodes : 64;
    base.angle_nodes = 8;
    results.emplace_back(sharpness_sequence(spec, cfg.eps, base).report);
  } else if (t == "divergence") {
    const double pt = cfg.p.at(0) * first_theta(cfg);
    const TestFunction phi = random_bump(d, rng);
    for (auto& r : check_divergence_identities(
             d, pt, phi, support_quadrature(phi, base_quadrature(cfg, g))))
      results.emplace_back(std::move(r));
  } else if (t == "adjoint") {
    const int count = cfg.count > 0 ? cfg.count : 3;
    for (int k = 0; k < count; ++k) {
      const TestFunction u = random_bump(d, rng);
      const TestFunction v = random_bump(d, rng);
      results.emplace_back(
          check_euler_adjoint(u, v, support_quadrature(u, base_quadrature(cfg, g))));
    }
  } else {
    throw std::invalid_argument("unknown verify target '" + t + "'");
  }
  return render(cfg, results);
}

CommandOutput cmd_cc(const RunConfig& cfg) {
  const StepTwoGroup g = make_group(cfg);
  if (!g.is_heisenberg()) throw std::invalid_argument("cc needs a Heisenberg group");
  if (static_cast<int>(cfg.point.size()) != g.horizontal_dim() + 1)
    throw std::invalid_argument("cc: --point needs " + std::to_string(g.horizontal_dim() + 1) +
                                " coordinates");
  Point x;
  x.z = Eigen::Map<const Eigen::VectorXd>(cfg.point.data(), g.horizontal_dim());
  x.t = VVector::Constant(1, cfg.point.back());
  if (x.z.squaredNorm() == 0.0 && x.t[0] == 0.0)
    throw std::domain_error("cc: the origin has no polar coordinates");
  const CCPolar pc = cc_invert(x);
  Report r;
  r.check = "cc";
  r.pass = true;
  r.values = {{"delta_cc", pc.r}, {"nu", pc.nu}, {"r", pc.r}};
  if (x.z.squaredNorm() > 0.0) {
    r.values.push_back({"hgrad_norm", cc_hgrad_from_polar(pc).norm()});
    r.values.push_back({"dt", cc_dt(x)});
  } else {
    r.note = "center point: the distance is not differentiable here";
  }
  return render(cfg, {Result(r)});
}

CommandOutput run_command(const RunConfig& cfg) {
  if (cfg.command == "bounds") return cmd_bounds(cfg);
  if (cfg.command == "supz") return cmd_supz(cfg);
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "cc") return cmd_cc(cfg);
  throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace carnot
