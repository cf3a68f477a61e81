#pragma once

// Explicit lower bounds for the unweighted Hardy constant
//   c(d, p, theta) = sup { c : int |grad_G u|^p / d^{p(theta-1)} >= c int |u|^p / d^{p theta} }.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "carnot/zfield.hpp"

namespace carnot {

// Raised when a hypothesis of a closed-form bound does not hold.
class ConditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Branch { first, second, closed, fallback, product, generic };
const char* to_string(Branch b);

struct BranchBound {
  double bound = 0.0;
  Branch branch = Branch::generic;
};

// |(Q - p theta)/p|^p / sup_z^p.
double bound_generic(double sup_z, double Q, double p, double theta);

// pθ-interval [(1 - sqrt(3/2)) Q, (1 + sqrt(3/2)) Q] of the first branch.
bool koranyi_first_branch(double Q, double p, double theta);

BranchBound bound_koranyi(double Q, double p, double theta);

// CC closed branch when theta >= 0 and Q >= 4 p theta / (12 - pi^2);
// otherwise the fallback with g_sup = max g (the squared profile sup).
bool cc_closed_condition(double Q, double p, double theta);
BranchBound bound_cc(double Q, double p, double theta,
                     std::optional<double> g_sup = std::nullopt);

BranchBound bound_koranyi_B(const StepTwoGroup& g, double p, double theta);

// (n/(n+1))^p |(Q - p theta)/p|^p on (H^n)^N, Q = 2N(n+1). Throws
// ConditionError unless theta >= 0 and n >= (p theta - 4)/4.
double bound_product(int n, int N, double p, double theta);

struct ConditionCheck {
  std::string name;
  bool holds = false;
};

struct BoundReport {
  std::string group;
  std::string norm;
  double p = 0.0;
  double theta = 0.0;
  double Q = 0.0;
  double sup_z = 0.0;
  std::string sup_method;
  double bound = 0.0;
  std::string branch;
  std::vector<ConditionCheck> conditions;
  // False when a hypothesis failed and no bound could be emitted.
  bool emitted = true;
  // (Q-2)^2/4 for p = 2, theta = 1 on H^n: a known upper limit for c.
  std::optional<double> known_upper;
  std::string note;
};

// Bound for a (group, norm, p, theta) tuple: the closed form where one
// applies, otherwise bound_generic with the computed sup |Z_d|.
BoundReport bound_report(const ZFieldSpec& spec, const SupOptions& opt = {});

// Recover (n, N) when the group is (H^n)^N with lambda = 4.
std::optional<std::pair<int, int>> heisenberg_product_shape(const StepTwoGroup& g);

}  // namespace carnot
