#include <cmath>

#include "doctest.h"
#include "dioph/bounds.hpp"
#include "dioph/errors.hpp"
#include "oracles.hpp"

using namespace dioph;

TEST_CASE("g1 anchors and closed form") {
  CHECK(std::fabs(static_cast<double>(eval_g1(1.0L / 3)) - 1) < 1e-12);
  CHECK(std::fabs(static_cast<double>(eval_g1(1.0L)) - 1) < 1e-12);
  CHECK(std::fabs(static_cast<double>(eval_g1(0.5L)) - (1 + std::sqrt(17.0)) / 4) < 1e-12);
  for (double a = 0.05; a < 3; a += 0.05) {
    CHECK(std::fabs(static_cast<double>(eval_g1(a)) - oracle::g1(a)) < 1e-12);
  }
  CHECK_THROWS_AS((void)eval_g1(0), DomainError);
}

TEST_CASE("g2, h and the quadratic identity") {
  CHECK(std::fabs(static_cast<double>(eval_g2(3)) - 1) < 1e-12);
  CHECK(std::fabs(static_cast<double>(eval_h(3)) - 1) < 1e-12);
  // 4x^2 + 2x - 9 = 0
  CHECK(std::fabs(static_cast<double>(eval_g2(4)) - (-2 + std::sqrt(148.0)) / 8) < 1e-12);
  // sqrt(8.26) + 0.1 - 0.5 = 2.4740215...
  CHECK(std::fabs(static_cast<double>(eval_g2(10)) - 2.4740215) < 1e-6);
  CHECK(std::fabs(static_cast<double>(g2_poly(10, eval_g2(10)))) < 1e-9);
  for (double a = 3; a < 100; a += 1.5) {
    CHECK(std::fabs(static_cast<double>(eval_g2(a)) - oracle::g2(a)) < 1e-12);
    CHECK(eval_g2(a) <= a - 2 + 1e-15L);
  }
  CHECK_THROWS_AS((void)eval_g2(2.5L), DomainError);
}

TEST_CASE("g3 anchors") {
  CHECK(std::fabs(static_cast<double>(eval_g3(1)) - 1) < 1e-12);
  const long double phi2 = (3 + std::sqrt(5.0L)) / 2;
  CHECK(std::fabs(static_cast<double>(eval_g3(phi2)) - (1 + std::sqrt(5.0)) / 2) < 1e-12);
  CHECK(std::fabs(static_cast<double>(eval_g3(2)) - (-1 + std::sqrt(41.0)) / 4) < 1e-12);
  for (double a = 1; a < 20; a += 0.25) {
    CHECK(std::fabs(static_cast<double>(eval_g3(a)) - oracle::g3(a)) < 1e-12);
  }
  CHECK_THROWS_AS((void)eval_g3(0.5L), DomainError);
}

TEST_CASE("alpha0") {
  const long double a = alpha0();
  CHECK(std::fabs(static_cast<double>(a) - 0.569840) < 1e-6);
  CHECK(std::fabs(static_cast<double>(a * a * a - a * a + 2 * a - 1)) < 1e-11);
  CHECK(std::fabs(static_cast<double>(eval_g1(a) - a / (1 - a))) < 1e-6);
}

TEST_CASE("solve_sys") {
  const SysSolution s = solve_sys(0.5L);
  CHECK(std::fabs(static_cast<double>(s.gamma) - (3 + std::sqrt(17.0)) / 4) < 1e-12);
  CHECK(std::fabs(static_cast<double>(s.delta) - (1 + std::sqrt(17.0)) / 4) < 1e-12);
  // both displayed equalities
  const long double a = 0.5L, g = s.gamma, d = s.delta;
  CHECK(std::fabs(static_cast<double>(d - (1 / a + (a - 1) / a * d / g))) < 1e-12);
  CHECK(std::fabs(static_cast<double>(d - a / (g * (1 - a) - a))) < 1e-12);
  const SysSolution t = solve_sys(1.0L / 3);
  CHECK(std::fabs(static_cast<double>(t.gamma) - 1) < 1e-12);
  CHECK(std::fabs(static_cast<double>(t.delta) - 1) < 1e-12);
  CHECK_THROWS_AS((void)solve_sys(1.0L), DomainError);
  CHECK_THROWS_AS((void)solve_sys(0.2L), DomainError);
}

TEST_CASE("solve_sys near the singular point") {
  // 1 - a g1(a) vanishes at the root of the system's denominator; scan for it
  bool flagged = false;
  for (long double a = 0.9L; a < 0.999L; a += 0.0005L) {
    try {
      flagged = flagged || solve_sys(a).near_singular;
    } catch (const SingularSystem&) {
      flagged = true;
    }
  }
  CHECK(flagged);
}

TEST_CASE("jarnik and new right-hand sides") {
  CHECK(static_cast<double>(rhs_jarnik(CaseTag::m1n3, 0.5L).value) == doctest::Approx(0.5));
  CHECK_FALSE(rhs_jarnik(CaseTag::m3n1, 100).applicable);
  CHECK(rhs_jarnik(CaseTag::m3n1, 2026).applicable);
  CHECK(static_cast<double>(rhs_jarnik(CaseTag::m2n2, 2).value) == doctest::Approx(2));
  CHECK(static_cast<double>(rhs_new(CaseTag::m1n3, 0.5L)) == doctest::Approx(0.640388).epsilon(1e-6));
  CHECK(static_cast<double>(rhs_new(CaseTag::m3n1, 3)) == doctest::Approx(3).epsilon(1e-12));
  CHECK(static_cast<double>(rhs_new(CaseTag::m2n2, 1)) == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("comparison tables") {
  const auto rows = compare_bounds(CaseTag::m1n3, linear_grid(1.0L / 3 + 1e-3L, alpha0() - 1e-3L, 50));
  for (const auto& r : rows) CHECK(r.winner == Winner::new_bound);
  const long double x = find_crossing(CaseTag::m1n3, 0.5L, 0.7L);
  CHECK(std::fabs(static_cast<double>(x - alpha0())) < 1e-6);
  const auto m3 = compare_bounds(CaseTag::m3n1, {100});
  CHECK(m3[0].winner == Winner::only_new);
  const auto phi2 = compare_bounds(CaseTag::m2n2, {(3 + std::sqrt(5.0L)) / 2});
  CHECK(phi2[0].winner == Winner::tie);
  CHECK(bounds_table_csv(rows).find("alpha") != std::string::npos);
  CHECK(bounds_table_json(CaseTag::m1n3, rows, false).find("\"rows\"") != std::string::npos);
}
