#pragma once

// Command implementations behind the carnot_hardy executable. Each command
// returns the rendered output and the process exit status, so the CLI stays
// a thin argument parser and the commands can be tested in-process.

#include <cstdint>
#include <string>
#include <vector>

#include "carnot/norms.hpp"
#include "carnot/quadrature.hpp"

namespace carnot {

struct RunConfig {
  std::string command;             // bounds | supz | verify | cc
  std::string target = "identity"; // verify: identity | hardy | sharpness |
                                   // counterexample | product | divergence | adjoint
  // heisenberg | nonisotropic | product | general. For general, --lambdas
  // holds the coupling rows separated by ';'.
  std::string group = "heisenberg";
  int n = 1;
  int N = 2;
  std::string lambdas;
  std::string norm = "koranyi";
  std::vector<double> p = {2.0};
  std::vector<double> theta;  // empty: {0, 0.5, 1, 2, Q/p} for tables, {1} elsewhere
  std::string quad_method;    // empty: tensor grid where available
  int nodes = 0;              // 0: command default
  long samples = 0;           // 0: command default
  int count = 0;              // number of random test functions, 0: default
  std::uint64_t seed = 20240917;
  std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  std::vector<double> point;  // cc: z_1 .. z_2n, t
  std::string format = "json";
};

struct CommandOutput {
  std::string text;
  int exit_code = 0;
};

StepTwoGroup make_group(const RunConfig& cfg);

CommandOutput cmd_bounds(const RunConfig& cfg);
CommandOutput cmd_supz(const RunConfig& cfg);
CommandOutput cmd_verify(const RunConfig& cfg);
CommandOutput cmd_cc(const RunConfig& cfg);

// Dispatch on cfg.command; std::invalid_argument for unknown commands.
CommandOutput run_command(const RunConfig& cfg);

// Parses "a,b,c" into doubles; std::invalid_argument on malformed input.
std::vector<double> parse_list(const std::string& text);

}  // namespace carnot
