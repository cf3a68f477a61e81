// carnot_hardy: bound tables, Z profiles, verification reports and CC
// distance queries.
//
//   carnot_hardy bounds --group heisenberg --n 1 --norm koranyi --p 2
//   carnot_hardy supz --norm cc --p 2 --theta 1 --format csv --out g.csv
//   carnot_hardy verify sharpness --eps 1e-2,1e-3,1e-4
//   carnot_hardy cc --point 1,0,1.5707963267948966

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "carnot/commands.hpp"

namespace {

struct Flags {
  std::string p = "2";
  std::string theta;
  std::string eps = "1e-2,1e-3,1e-4";
  std::string point;
  std::string out;
};

void add_common(CLI::App* sub, carnot::RunConfig& cfg, Flags& f) {
  sub->add_option("--group", cfg.group, "heisenberg | nonisotropic | product | general")
      ->capture_default_str();
  sub->add_option("--n", cfg.n, "blocks per Heisenberg factor")->capture_default_str();
  sub->add_option("--N", cfg.N, "number of Heisenberg factors")->capture_default_str();
  sub->add_option("--lambdas", cfg.lambdas,
                  "block eigenvalues a,b,..; rows separated by ';' for general groups");
  sub->add_option("--norm", cfg.norm, "koranyi | koranyi_B | cc | balogh_tyson")
      ->capture_default_str();
  sub->add_option("--p", f.p, "exponent(s), comma separated")->capture_default_str();
  sub->add_option("--theta", f.theta, "weight exponent(s), comma separated");
  sub->add_option("--quad-method", cfg.quad_method, "tensor | monte_carlo");
  sub->add_option("--nodes", cfg.nodes, "grid or scan nodes");
  sub->add_option("--samples", cfg.samples, "sample count");
  sub->add_option("--count", cfg.count, "number of random test functions");
  sub->add_option("--seed", cfg.seed, "seed")->capture_default_str();
  sub->add_option("--eps", f.eps, "cut-off parameters for sharpness")->capture_default_str();
  sub->add_option("--format", cfg.format, "json | csv")->capture_default_str();
  sub->add_option("--out", f.out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy constants on step-two Carnot groups"};
  app.require_subcommand(1);
  carnot::RunConfig cfg;
  Flags f;

  auto* bounds = app.add_subcommand("bounds", "tabulate lower bounds for Hardy constants");
  add_common(bounds, cfg, f);
  auto* supz = app.add_subcommand("supz", "sup |Z_d| and its profile");
  add_common(supz, cfg, f);
  auto* verify = app.add_subcommand("verify", "numerical verification reports");
  add_common(verify, cfg, f);
  verify
      ->add_option("target", cfg.target,
                   "identity | hardy | sharpness | counterexample | product | divergence | "
                   "adjoint")
      ->capture_default_str();
  auto* cc = app.add_subcommand("cc", "CC distance, polar data and derivatives at a point");
  add_common(cc, cfg, f);
  cc->add_option("--point", f.point, "z_1,..,z_2n,t")->required();

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    cfg.p = carnot::parse_list(f.p);
    if (!f.theta.empty()) cfg.theta = carnot::parse_list(f.theta);
    cfg.eps = carnot::parse_list(f.eps);
    if (!f.point.empty()) cfg.point = carnot::parse_list(f.point);
    const carnot::CommandOutput res = carnot::run_command(cfg);
    if (f.out.empty()) {
      std::cout << res.text;
    } else {
      std::ofstream os(f.out, std::ios::binary);
      if (!os) {
        std::fprintf(stderr, "error: cannot open %s\n", f.out.c_str());
        return 2;
      }
      os << res.text;
    }
    return res.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
