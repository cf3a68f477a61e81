#include "carnot/bounds.hpp"

#include <cmath>
#include <numbers>

namespace carnot {

const char* to_string(Branch b) {
  switch (b) {
    case Branch::first: return "first";
    case Branch::second: return "second";
    case Branch::closed: return "closed";
    case Branch::fallback: return "fallback";
    case Branch::product: return "product";
    case Branch::generic: return "generic";
  }
  return "unknown";
}

namespace {

void require_p(double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("bounds: p must be >= 2");
}

void require_q(double Q) {
  if (!(Q > 2.0)) throw std::invalid_argument("bounds: Q must exceed 2");
}

double projected_constant(double Q, double p, double theta) {
  return std::pow(std::abs((Q - p * theta) / p), p);
}

}  // namespace

double bound_generic(double sup_z, double Q, double p, double theta) {
  require_p(p);
  if (!(sup_z > 0.0)) throw std::invalid_argument("bound_generic: sup_z must be positive");
  return projected_constant(Q, p, theta) / std::pow(sup_z, p);
}

bool koranyi_first_branch(double Q, double p, double theta) {
  const double r = std::sqrt(1.5);
  const double pt = p * theta;
  return pt >= (1.0 - r) * Q && pt <= (1.0 + r) * Q;
}

BranchBound bound_koranyi(double Q, double p, double theta) {
  require_q(Q);
  require_p(p);
  const double pt = p * theta;
  if (koranyi_first_branch(Q, p, theta))
    return {projected_constant(Q, p, theta) * std::pow(std::abs((Q - 2.0) / Q), p),
            Branch::first};
  const double radicand = 3.0 * pt * (pt - 2.0 * Q);
  if (!(radicand > 0.0))
    throw ConditionError("bound_koranyi: second branch needs p theta (p theta - 2Q) > 0");
  const double b = std::pow(1.5, p / 2.0) * std::pow(radicand, p / 4.0) /
                   std::pow(std::abs(pt - Q), p / 2.0) *
                   std::pow(std::abs((Q - 2.0) / p), p);
  return {b, Branch::second};
}

bool cc_closed_condition(double Q, double p, double theta) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return theta >= 0.0 && Q >= 4.0 * p * theta / (12.0 - pi2);
}

BranchBound bound_cc(double Q, double p, double theta, std::optional<double> g_sup) {
  require_q(Q);
  require_p(p);
  if (cc_closed_condition(Q, p, theta))
    return {std::pow((Q - 2.0) / Q, p) * projected_constant(Q, p, theta), Branch::closed};
  if (!g_sup || !(*g_sup > 0.0))
    throw std::invalid_argument("bound_cc: fallback branch needs a positive sup of g");
  return {projected_constant(Q, p, theta) / std::pow(*g_sup, p / 2.0), Branch::fallback};
}

BranchBound bound_koranyi_B(const StepTwoGroup& g, double p, double theta) {
  BranchBound b = bound_koranyi(g.homogeneous_dimension(), p, theta);
  b.bound *= std::pow(lambda_min(g) / 4.0, p / 2.0);
  return b;
}

double bound_product(int n, int N, double p, double theta) {
  require_p(p);
  if (n < 1 || N < 1) throw std::invalid_argument("bound_product: n, N must be >= 1");
  if (!(theta >= 0.0)) throw ConditionError("bound_product: needs theta >= 0");
  if (!(n >= (p * theta - 4.0) / 4.0))
    throw ConditionError("bound_product: needs n >= (p theta - 4)/4");
  const double Q = 2.0 * N * (n + 1.0);
  return std::pow(n / (n + 1.0), p) * projected_constant(Q, p, theta);
}

std::optional<std::pair<int, int>> heisenberg_product_shape(const StepTwoGroup& g) {
  const int N = g.vertical_dim();
  if (g.blocks() % N != 0) return std::nullopt;
  const int n = g.blocks() / N;
  const auto& c = g.couplings();
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < g.blocks(); ++i) {
      const double want = (i / n == j) ? 4.0 : 0.0;
      if (c(j, i) != want) return std::nullopt;
    }
  return std::pair{n, N};
}

BoundReport bound_report(const ZFieldSpec& spec, const SupOptions& opt) {
  const StepTwoGroup& g = spec.group();
  BoundReport r;
  r.group = g.label();
  r.norm = to_string(spec.norm.kind());
  r.p = spec.p;
  r.theta = spec.theta;
  r.Q = spec.Q();
  const double pt = spec.p * spec.theta;
  const NormKind kind = spec.norm.kind();

  if (g.is_heisenberg() && spec.p == 2.0 && spec.theta == 1.0)
    r.known_upper = (r.Q - 2.0) * (r.Q - 2.0) / 4.0;

  const auto product = heisenberg_product_shape(g);
  const bool product_closed = kind == NormKind::koranyi && g.vertical_dim() > 1 &&
                              product && spec.variant == ZVariant::product;
  if (product_closed) {
    const auto [n, N] = *product;
    r.conditions.push_back({"theta >= 0", spec.theta >= 0.0});
    r.conditions.push_back({"n >= (p theta - 4)/4", n >= (pt - 4.0) / 4.0});
    try {
      r.bound = bound_product(n, N, spec.p, spec.theta);
      r.branch = to_string(Branch::product);
      r.sup_z = (n + 1.0) / n;
      r.sup_method = to_string(SupMethod::closed_form);
      return r;
    } catch (const ConditionError& e) {
      r.note = e.what();
      // fall through to the sampled generic bound
    }
  }

  const SupResult sup = sup_z_norm(spec, opt);
  r.sup_z = sup.sup_value;
  r.sup_method = to_string(sup.method);

  if (kind == NormKind::koranyi && g.is_heisenberg() && spec.variant == ZVariant::single) {
    r.conditions.push_back({"p theta in [(1 - sqrt(3/2))Q, (1 + sqrt(3/2))Q]",
                            koranyi_first_branch(r.Q, spec.p, spec.theta)});
    const BranchBound b = bound_koranyi(r.Q, spec.p, spec.theta);
    r.bound = b.bound;
    r.branch = to_string(b.branch);
    return r;
  }
  if (kind == NormKind::koranyi_B) {
    r.conditions.push_back({"p theta in [(1 - sqrt(3/2))Q, (1 + sqrt(3/2))Q]",
                            koranyi_first_branch(r.Q, spec.p, spec.theta)});
    const BranchBound b = bound_koranyi_B(g, spec.p, spec.theta);
    r.bound = b.bound;
    r.branch = to_string(b.branch);
    return r;
  }
  if (kind == NormKind::cc && spec.variant == ZVariant::single) {
    r.conditions.push_back({"theta >= 0", spec.theta >= 0.0});
    r.conditions.push_back({"Q >= 4 p theta / (12 - pi^2)",
                            r.Q >= 4.0 * pt / (12.0 - std::numbers::pi * std::numbers::pi)});
    const BranchBound b = bound_cc(r.Q, spec.p, spec.theta, sup.sup_value * sup.sup_value);
    r.bound = b.bound;
    r.branch = to_string(b.branch);
    return r;
  }

  r.bound = bound_generic(sup.sup_value, r.Q, spec.p, spec.theta);
  r.branch = to_string(Branch::generic);
  if (sup.method == SupMethod::multistart) {
    if (!r.note.empty()) r.note += "; ";
    r.note += "sup |Z| is a sampled lower estimate, so the bound is not certified";
  }
  return r;
}

}  // namespace carnot
