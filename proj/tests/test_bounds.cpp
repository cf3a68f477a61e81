#include <doctest.h>

#include <cmath>
#include <numbers>

#include "carnot/bounds.hpp"

using namespace carnot;

namespace {

// Printed Heisenberg bounds, transcribed independently of the library.
double printed_first(double Q, double p, double theta) {
  return std::pow(std::abs((Q - p * theta) / p), p) * std::pow(std::abs((Q - 2.0) / Q), p);
}

double printed_second(double Q, double p, double theta) {
  const double pt = p * theta;
  return std::pow(1.5, p / 2.0) * std::pow(3.0 * pt * (pt - 2.0 * Q), p / 4.0) /
         std::pow(std::abs(pt - Q), p / 2.0) * std::pow(std::abs((Q - 2.0) / p), p);
}

bool in_first_interval(double Q, double pt) {
  return pt >= (1.0 - std::sqrt(1.5)) * Q && pt <= (1.0 + std::sqrt(1.5)) * Q;
}

}  // namespace

TEST_CASE("generic bound examples") {
  CHECK(bound_generic(2.0, 4.0, 2.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(bound_generic(2.0, 4.0, 2.0, 2.0) == 0.0);
  CHECK(bound_generic(1.0, 6.0, 3.0, 0.5) == doctest::Approx(std::pow(1.5, 3)).epsilon(1e-15));
  CHECK_THROWS_AS(bound_generic(0.0, 4.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("Koranyi bound examples") {
  const BranchBound a = bound_koranyi(4.0, 2.0, 1.0);
  CHECK(a.bound == 0.25);
  CHECK(a.branch == Branch::first);
  const BranchBound b = bound_koranyi(4.0, 2.0, 6.0);
  CHECK(b.branch == Branch::second);
  CHECK(b.bound == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(bound_generic(std::sqrt(192.0 / 27.0), 4.0, 2.0, 6.0) ==
        doctest::Approx(b.bound).epsilon(1e-12));
  CHECK(bound_koranyi(4.0, 2.0, 2.0).bound == 0.0);
}

TEST_CASE("Koranyi bound equals the printed cases and the generic bound") {
  for (double Q : {4.0, 6.0, 8.0, 12.0}) {
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
      for (double theta : {-4.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0}) {
        const double pt = p * theta;
        const BranchBound b = bound_koranyi(Q, p, theta);
        const double printed =
            in_first_interval(Q, pt) ? printed_first(Q, p, theta) : printed_second(Q, p, theta);
        CHECK(b.bound == doctest::Approx(printed).epsilon(1e-12));
        CHECK(b.branch == (in_first_interval(Q, pt) ? Branch::first : Branch::second));
        const ProfileMax m = koranyi_profile_max(Q, p, theta);
        CHECK(bound_generic(std::sqrt(m.value), Q, p, theta) == doctest::Approx(b.bound).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("CC bound") {
  const BranchBound a = bound_cc(4.0, 2.0, 1.0);
  CHECK(a.branch == Branch::closed);
  CHECK(a.bound == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(bound_cc(4.0, 2.0, 0.0).bound == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cc_closed_condition(4.0, 2.0, 1.0));
  CHECK_FALSE(cc_closed_condition(4.0, 2.0, 2.0));  // 4 < 8/(12 - pi^2)
  CHECK_FALSE(cc_closed_condition(4.0, 2.0, -1.0));

  // outside the condition the bound needs the sup of g
  const BranchBound f = bound_cc(4.0, 2.0, -1.0, 5.0);
  CHECK(f.branch == Branch::fallback);
  CHECK(f.bound == doctest::Approx(9.0 / 5.0).epsilon(1e-14));

  // CC bound agrees with the sampled g sup through the report
  const BoundReport r = bound_report(
      make_zfield_spec(NormModel(NormKind::cc, StepTwoGroup::heisenberg(1)), 2.0, -1.0));
  CHECK(r.branch == "fallback");
  CHECK(r.bound == doctest::Approx(9.0 / (r.sup_z * r.sup_z)).epsilon(1e-12));
}

TEST_CASE("generalized Koranyi bound") {
  const StepTwoGroup g = StepTwoGroup::single_vertical(Eigen::Vector2d(1.0, 2.0));
  const BranchBound b = bound_koranyi_B(g, 2.0, 1.0);
  CHECK(b.bound == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  // reduces to the Heisenberg bound when lambda = 4
  for (double theta : {0.0, 1.0, 7.0})
    CHECK(bound_koranyi_B(StepTwoGroup::heisenberg(2), 3.0, theta).bound ==
          doctest::Approx(bound_koranyi(6.0, 3.0, theta).bound).epsilon(1e-14));
  // and agrees with the report built from the scaled sup
  const BoundReport r = bound_report(make_zfield_spec(NormModel(NormKind::koranyi_B, g), 2.0, 1.0));
  CHECK(r.bound == doctest::Approx(bound_generic(r.sup_z, 6.0, 2.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("product bound") {
  CHECK(bound_product(1, 2, 2.0, 1.0) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(bound_product(2, 3, 3.0, 0.5) ==
        doctest::Approx(std::pow(2.0 / 3.0, 3) * std::pow((18.0 - 1.5) / 3.0, 3)).epsilon(1e-14));
  // void condition whenever 0 <= p theta <= 4
  for (double pt : {0.0, 1.0, 4.0}) CHECK_NOTHROW(bound_product(1, 2, 2.0, pt / 2.0));
  CHECK_THROWS_AS(bound_product(1, 2, 2.0, 6.0), ConditionError);  // n = 1 < (12 - 4)/4
  CHECK_THROWS_AS(bound_product(1, 2, 2.0, -1.0), ConditionError);
}

TEST_CASE("bound reports") {
  const BoundReport k = bound_report(
      make_zfield_spec(NormModel(NormKind::koranyi, StepTwoGroup::heisenberg(1)), 2.0, 1.0));
  CHECK(k.bound == 0.25);
  CHECK(k.Q == 4.0);
  REQUIRE(k.known_upper);
  CHECK(*k.known_upper == 1.0);
  CHECK(k.bound < *k.known_upper);

  const BoundReport p = bound_report(make_zfield_spec(
      NormModel(NormKind::koranyi, StepTwoGroup::heisenberg_product(1, 2)), 2.0, 1.0));
  CHECK(p.branch == "product");
  CHECK(p.bound == doctest::Approx(2.25));

  SupOptions opt;
  opt.samples = 5000;
  const BoundReport bt = bound_report(
      make_zfield_spec(NormModel(NormKind::balogh_tyson,
                                 StepTwoGroup::single_vertical(Eigen::Vector2d(0.5, 1.0))),
                       2.0, 1.0),
      opt);
  CHECK(bt.branch == "generic");
  CHECK(bt.sup_method == "multistart");
  CHECK_FALSE(bt.note.empty());
}
