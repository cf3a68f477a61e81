#include <doctest.h>

#include <cmath>
#include <vector>

#include "carnot/verify.hpp"

using namespace carnot;

namespace {

std::vector<double> random_vector(SplitMix64& rng, int n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

// Closed form of p (p-1) int_0^1 s |s g + (1-s) f|^{p-2} ds after u = f + s (g - f):
// antiderivatives |u|^p / p and sgn(u) |u|^{p-1} / (p-1). Cancels badly as g -> f.
double weight_oracle(double p, double f, double g) {
  const double b = g - f;
  auto pw = [](double u, double e) { return std::copysign(std::pow(std::abs(u), e), u); };
  const double first = (std::pow(std::abs(g), p) - std::pow(std::abs(f), p)) / p;
  const double second = f * (pw(g, p - 1.0) - pw(f, p - 1.0)) / (p - 1.0);
  return p * (p - 1.0) * (first - second) / (b * b);
}

QuadratureSpec h1_grid() {
  QuadratureSpec q;
  q.radial_nodes = 300;
  q.angle_nodes = 64;
  q.lambda_nodes = 200;
  return q;
}

}  // namespace

TEST_CASE("w weight against closed forms and an independent rule") {
  SplitMix64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const double f = rng.uniform(-2.0, 2.0), g = rng.uniform(-2.0, 2.0);
    CHECK(w_weight_squared(2.0, f, g) == doctest::Approx(1.0).epsilon(1e-14));
    // p = 4: 12 int_0^1 s (f + s (g - f))^2 ds
    const double a = f, b = g - f;
    const double p4 = 12.0 * (a * a / 2.0 + 2.0 * a * b / 3.0 + b * b / 4.0);
    CHECK(w_weight_squared(4.0, f, g) == doctest::Approx(p4).epsilon(1e-12));
    if (std::abs(g - f) < 0.2) continue;
    for (double p : {2.5, 3.0, 3.7})
      CHECK(w_weight_squared(p, f, g) == doctest::Approx(weight_oracle(p, f, g)).epsilon(1e-10));
  }
}

TEST_CASE("w identity on random vectors") {
  SplitMix64 rng(2);
  for (double p : {2.0, 2.5, 3.0, 4.0}) {
    const Report r = check_w_identity(p, random_vector(rng, 100), random_vector(rng, 100));
    CHECK(r.pass);
    CHECK(r.tolerance == (p == 2.0 ? 1e-14 : 1e-10));
  }
  const std::vector<double> f = random_vector(rng, 100);
  const Report same = check_w_identity(3.0, f, f);
  CHECK(std::abs(same.value("lhs")) == 0.0);
  CHECK(std::abs(same.value("rhs")) <= 1e-12);
  CHECK(same.pass);
  CHECK_THROWS_AS(check_w_identity(1.5, f, f), std::invalid_argument);
  CHECK_THROWS_AS(check_w_identity(2.0, f, {1.0}), std::invalid_argument);
}

TEST_CASE("integration by parts identity on H^1") {
  const NormModel d(NormKind::koranyi, StepTwoGroup::heisenberg(1));
  SplitMix64 rng(3);
  const TestFunction u = random_bump(d, rng);
  const QuadratureSpec q = support_quadrature(u, h1_grid());
  const auto reps = check_ibp_identity_grid(d, u, {{2.0, 1.0}, {3.0, 0.0}, {2.0, 2.0}}, q);
  REQUIRE(reps.size() == 3);
  for (const Report& r : reps) CHECK(r.pass);
  CHECK(reps[2].tolerance_kind == "absolute");  // p theta = Q

  // the single-ZFieldSpec entry point agrees with the grid
  const Report one = check_ibp_identity(make_zfield_spec(d, 2.0, 1.0), u, q);
  CHECK(one.value("I1") == doctest::Approx(reps[0].value("I1")).epsilon(1e-12));
  CHECK(one.pass);
}

TEST_CASE("integration by parts identity with the CC distance") {
  const NormModel d(NormKind::cc, StepTwoGroup::heisenberg(1));
  SplitMix64 rng(4);
  const TestFunction u = random_bump(d, rng);
  QuadratureSpec q = h1_grid();
  q.radial_nodes = 120;
  q.lambda_nodes = 160;
  const Report r = check_ibp_identity(make_zfield_spec(d, 2.0, 1.0), u, support_quadrature(u, q));
  CHECK(r.pass);
}

TEST_CASE("Hardy quotients dominate the bounds") {
  SplitMix64 rng(5);
  for (NormKind kind : {NormKind::koranyi, NormKind::cc}) {
    const NormModel d(kind, StepTwoGroup::heisenberg(1));
    const ZFieldSpec spec = make_zfield_spec(d, 2.0, 1.0);
    const TestFunction u = random_bump(d, rng);
    QuadratureSpec q = h1_grid();
    q.radial_nodes = 96;
    q.angle_nodes = 32;
    q.lambda_nodes = 128;
    const Quotients qt = hardy_quotients(spec, u, support_quadrature(u, q));
    CHECK(qt.projected >= 1.0 - 1e-3);
    CHECK(qt.full >= 0.25 - 1e-3);
    CHECK(qt.full * 4.0 >= qt.projected - 1e-3);  // |<grad u, Z>| <= 2 |grad u|
    CHECK(hardy_quotient(spec, u, support_quadrature(u, q), true) == qt.projected);
  }
}

TEST_CASE("sharpness family approaches the projected constant") {
  const NormModel d(NormKind::koranyi, StepTwoGroup::heisenberg(1));
  QuadratureSpec base;
  base.radial_nodes = 64;
  base.angle_nodes = 8;
  const SharpnessResult s = sharpness_sequence(make_zfield_spec(d, 2.0, 1.0), {1e-2, 1e-3, 1e-4}, base);
  CHECK(s.target == 1.0);
  CHECK(s.decreasing);
  CHECK(s.above_target);
  CHECK(s.fit_C > 0.0);
  CHECK(s.fit_residual <= 0.2);
  CHECK(s.log_growth);
  CHECK(s.report.pass);
  CHECK_THROWS_AS(sharpness_sequence(make_zfield_spec(d, 2.0, 1.0), {1e-3, 1e-2}, base),
                  std::invalid_argument);
  const NormModel prod(NormKind::koranyi, StepTwoGroup::heisenberg_product(1, 2));
  CHECK_THROWS_AS(sharpness_sequence(make_zfield_spec(prod, 2.0, 1.0), {1e-2, 1e-3}, base),
                  std::invalid_argument);
}

TEST_CASE("extremal profile makes the pairing an equality") {
  const Point x = make_point({1, 0}, {1});
  const StepTwoGroup h = StepTwoGroup::heisenberg(1);
  CHECK(extremal_residual(make_zfield_spec(NormModel(NormKind::koranyi, h), 2.0, 1.0), x) <= 1e-8);
  CHECK(extremal_residual(make_zfield_spec(NormModel(NormKind::cc, h), 2.0, 1.0), x) <= 1e-7);
  SplitMix64 rng(6);
  for (int k = 0; k < 20; ++k) {
    const Point y = make_point({rng.uniform(0.2, 1.0), rng.uniform(-1.0, 1.0)}, {rng.uniform(0.1, 1.0)});
    const double p = rng.uniform(2.0, 4.0), theta = rng.uniform(-1.0, 2.0);
    CHECK(extremal_residual(make_zfield_spec(NormModel(NormKind::koranyi, h), p, theta), y,
                            DiffScheme::analytic()) <= 1e-10);
  }
  CHECK_THROWS_AS(extremal_residual(make_zfield_spec(NormModel(NormKind::koranyi, h), 2.0, 1.0),
                                    make_point({1, 0}, {0})),
                  std::domain_error);
}

TEST_CASE("divergence identities and the Euler adjoint") {
  SplitMix64 rng(7);
  for (NormKind kind : {NormKind::koranyi, NormKind::cc}) {
    const NormModel d(kind, StepTwoGroup::heisenberg(1));
    const TestFunction phi = random_bump(d, rng);
    QuadratureSpec q = h1_grid();
    q.radial_nodes = 120;
    q.lambda_nodes = 160;
    for (double pt : {0.0, 2.0, 5.0})
      for (const Report& r : check_divergence_identities(d, pt, phi, support_quadrature(phi, q)))
        CHECK(r.pass);
    const TestFunction v = random_bump(d, rng);
    CHECK(check_euler_adjoint(phi, v, support_quadrature(phi, q)).pass);
  }
}

TEST_CASE("counterexample search and its isotropic control") {
  ScanOptions opt;
  opt.samples = 20000;
  const Report r = counterexample_scan(2.0, false, opt);
  CHECK(r.pass);
  CHECK(r.value("max_B") > 0.1);
  // the reported point reproduces B
  CHECK(r.value("Z_sq_at_arg") - r.value("Z_sq_at_arg_t0") == doctest::Approx(r.value("max_B")).epsilon(1e-9));
  const Report c = counterexample_scan(2.0, true, opt);
  CHECK(c.pass);
  CHECK(c.value("max_B") <= 1e-6);
}

TEST_CASE("product check") {
  ProductOptions opt;
  opt.samples = 20000;
  opt.identity = false;
  const auto ok = product_check(1, 2, 2.0, 1.0, opt);
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].pass);
  CHECK(ok[0].value("sup_Z_sq") <= 4.0 + 1e-9);
  REQUIRE(ok[0].bound);
  CHECK(*ok[0].bound == doctest::Approx(2.25));
  // n = 1, p theta = 12 violates n + 1 >= p theta / 4
  const auto bad = product_check(1, 2, 2.0, 6.0, opt);
  CHECK(bad[0].value("hypothesis_holds") == 0.0);
  CHECK(bad[0].value("sup_Z_sq") > 4.0);
  CHECK(bad[0].pass);
  CHECK_FALSE(bad[0].bound);
}
