#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carnot/norms.hpp"
#include "carnot/quadrature.hpp"

using namespace carnot;

namespace {

constexpr double kPi = std::numbers::pi;

// |{rho < 1}| on H^n: int 2 sqrt(1 - |z|^4) dz over the unit ball of R^{2n}.
double koranyi_ball_volume(int n) {
  if (n == 1) return kPi * kPi / 2.0;
  if (n == 2) return 2.0 * kPi * kPi / 3.0;
  throw std::invalid_argument("n");
}

}  // namespace

TEST_CASE("phi chart lands on the unit sphere") {
  SplitMix64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const double a = rng.uniform(0.0, 2.0 * kPi);
    HVector w(2);
    w << std::cos(a), std::sin(a);
    const double lam = std::tan(rng.uniform(-1.5, 1.5));
    const Point x = phi_chart(w, lam);
    CHECK(koranyi_value(x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x.t[0] / x.z.squaredNorm() == doctest::Approx(lam).epsilon(1e-12));
  }
}

TEST_CASE("tensor grid: zero, constants and a radial Gaussian") {
  const StepTwoGroup h = StepTwoGroup::heisenberg(1);
  QuadratureSpec q;
  q.radial_nodes = 32;
  q.angle_nodes = 16;
  q.lambda_nodes = 64;
  CHECK(integrate(h, [](const Point&) { return 0.0; }, q).values[0] == 0.0);

  const double shell = koranyi_ball_volume(1) * (std::pow(q.r_max, 4) - std::pow(q.r_min, 4));
  const QuadResult one = integrate(h, [](const Point&) { return 1.0; }, q);
  CHECK(one.values[0] == doctest::Approx(shell).epsilon(1e-12));

  // d vol = 2 pi^2 rho^3 d rho on H^1
  const auto gauss = [](const Point& x) { return std::exp(-std::pow(koranyi_value(x), 4)); };
  const double expect = kPi * kPi / 2.0 * (std::exp(-std::pow(q.r_min, 4)) - std::exp(-std::pow(q.r_max, 4)));
  const QuadResult r = integrate(h, gauss, q);
  CHECK(r.values[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.errors[0] <= 1e-6);  // the half-grid indicator is pessimistic
  CHECK(r.evaluations > 0);
}

TEST_CASE("tensor grid integrates an anisotropic polynomial exactly") {
  // t^2 |z|^2 over the shell in the chart z = rho sqrt(cos b) sigma,
  // t = rho^2 sin b, dz dt = rho^3 d rho d sigma d b:
  // int rho^9 d rho * 2 pi * int sin^2 b cos b d b = 2 pi [rho^10/10] (2/3)
  const StepTwoGroup h = StepTwoGroup::heisenberg(1);
  QuadratureSpec q;
  q.radial_nodes = 16;
  q.angle_nodes = 8;
  q.lambda_nodes = 96;
  const double expect = 2.0 * kPi * (std::pow(q.r_max, 10) - std::pow(q.r_min, 10)) / 10.0 * (2.0 / 3.0);
  const QuadResult r = integrate(h, [](const Point& x) { return x.t[0] * x.t[0] * x.z.squaredNorm(); }, q);
  CHECK(r.values[0] == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("log window covers the positive-lambda half") {
  const StepTwoGroup h = StepTwoGroup::heisenberg(1);
  QuadratureSpec q;
  q.lambda_map = LambdaMap::log_window;
  q.lambda_lo = 1e-8;
  q.lambda_hi = 1e8;
  q.lambda_nodes = 400;
  q.radial_nodes = 16;
  q.angle_nodes = 8;
  const double half = 0.5 * koranyi_ball_volume(1) * (std::pow(q.r_max, 4) - std::pow(q.r_min, 4));
  const QuadResult r = integrate(h, [](const Point&) { return 1.0; }, q);
  CHECK(r.values[0] == doctest::Approx(half).epsilon(1e-7));
}

TEST_CASE("Monte Carlo on the ambient box") {
  for (int n : {1, 2}) {
    const StepTwoGroup h = StepTwoGroup::heisenberg(n);
    QuadratureSpec q;
    q.method = QuadMethod::monte_carlo;
    q.chart = Chart::ambient;
    q.samples = 400000;
    q.r_min = 0.5;
    q.r_max = 1.5;
    const auto ind = [&](const Point& x) {
      const double r = koranyi_value(x);
      return r > q.r_min && r < q.r_max ? 1.0 : 0.0;
    };
    const double Q = 2.0 * n + 2.0;
    const double expect = koranyi_ball_volume(n) * (std::pow(q.r_max, Q) - std::pow(q.r_min, Q));
    const QuadResult r = integrate(h, ind, q);
    CHECK(std::abs(r.values[0] - expect) <= 5.0 * r.errors[0] + 1e-3 * expect);
    CHECK(r.errors[0] < 0.02 * expect);
    // same seed, same bits
    CHECK(integrate(h, ind, q).values[0] == r.values[0]);
  }
}

TEST_CASE("Monte Carlo in the polar chart agrees with the tensor grid") {
  const StepTwoGroup h = StepTwoGroup::heisenberg(1);
  const auto f = [](const Point& x) {
    const double r = koranyi_value(x);
    return std::exp(-r * r) * (1.0 + 0.5 * x.z[0] / r + 0.3 * x.t[0] / (r * r));
  };
  QuadratureSpec t;
  t.radial_nodes = 48;
  t.angle_nodes = 32;
  t.lambda_nodes = 96;
  QuadratureSpec m = t;
  m.method = QuadMethod::monte_carlo;
  m.samples = 200000;
  const QuadResult a = integrate(h, f, t), b = integrate(h, f, m);
  CHECK(std::abs(a.values[0] - b.values[0]) <= 5.0 * b.errors[0] + 1e-9);
}

TEST_CASE("quadrature validation") {
  const StepTwoGroup h2 = StepTwoGroup::heisenberg(2);
  QuadratureSpec q;
  CHECK_THROWS_AS(integrate(h2, [](const Point&) { return 1.0; }, q), std::invalid_argument);
  const StepTwoGroup h1 = StepTwoGroup::heisenberg(1);
  CHECK_THROWS_AS(integrate(h1, [](const Point&) { return std::nan(""); }, q), std::runtime_error);
}
