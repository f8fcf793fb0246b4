#include <cmath>

#include "doctest.h"
#include "dioph/errors.hpp"
#include "dioph/polynomial.hpp"
#include "dioph/realnum.hpp"

using namespace dioph;

namespace {

// Bisection on x^2 - 2 in rationals: the reference enclosure of sqrt(2).
std::pair<mpq_class, mpq_class> bisect_sqrt2(int steps) {
  mpq_class lo = 1, hi = 2;
  for (int i = 0; i < steps; ++i) {
    mpq_class mid = (lo + hi) / 2;
    if (mid * mid < 2) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("dyadic normal form and decimal round trip") {
  const Dyadic a(mpz_class(12), -3);  // 1.5
  CHECK(a.mantissa() == 3);
  CHECK(a.exponent() == -1);
  CHECK(a.to_decimal() == "1.5");
  CHECK(Dyadic::parse_decimal("-0.15625") == Dyadic(mpz_class(-5), -5));
  CHECK_THROWS_AS((void)Dyadic::parse_decimal("0.1"), InvalidArgument);
  CHECK(Dyadic(0).to_decimal() == "0");
  CHECK(Dyadic::floor_of(mpq_class(1, 3), 4) == Dyadic(mpz_class(5), -4));
  CHECK(Dyadic::ceil_of(mpq_class(1, 3), 4) == Dyadic(mpz_class(6), -4));
}

TEST_CASE("refine: algebraic sqrt2 at 10 bits") {
  const auto r = CertifiedReal::algebraic(make_poly({-2, 0, 1}), 1, 2);
  const DyadicInterval iv = refine(r, 10);
  CHECK(iv.lower() >= Dyadic::parse_decimal("1.4140625"));
  CHECK(iv.upper() <= Dyadic::parse_decimal("1.4150390625"));
  CHECK(iv.width() <= Dyadic(mpz_class(1), -10));
  const auto [lo, hi] = bisect_sqrt2(40);
  CHECK(iv.lower().to_rational() <= lo);
  CHECK(hi <= iv.upper().to_rational());
}

TEST_CASE("refine is monotone in precision") {
  const auto r = CertifiedReal::algebraic(make_poly({-1, -1, 0, 0, 1}), 1, 2);
  DyadicInterval prev = refine(r, 8);
  for (int p : {16, 32, 64, 128, 512}) {
    const DyadicInterval cur = refine(r, p);
    CHECK(cur.subset_of(prev));
    CHECK(cur.width() <= Dyadic(mpz_class(1), -p));
    prev = cur;
  }
}

TEST_CASE("refine: rational and decimal") {
  const auto half = CertifiedReal::rational(1, 2);
  CHECK(refine(half, 100) == DyadicInterval(Dyadic(mpz_class(1), -1)));
  const auto third = CertifiedReal::decimal("0.333");
  CHECK(third.as_decimal().error_digits == 3);
  CHECK_NOTHROW((void)refine(third, 8));
  CHECK_THROWS_AS((void)refine(third, 20), PrecisionExhausted);
  CHECK(refine(third, 8).contains(mpq_class(333, 1000)));
}

TEST_CASE("algebraic input validation") {
  CHECK_THROWS_AS((void)CertifiedReal::algebraic(make_poly({-2, 0, 1}), -2, 2), InvalidArgument);
  CHECK_THROWS_AS((void)CertifiedReal::algebraic(make_poly({-2, 0, 1}), 2, 3), InvalidArgument);
  // an endpoint that is a root gets tightened away
  const auto r = CertifiedReal::algebraic(make_poly({-3, 2, 1}), 1, 2);  // (x-1)(x+3)
  CHECK(refine(r, 30).contains(Dyadic(1)));
}

TEST_CASE("describe / parse round trip") {
  for (const char* text : {"rational 3/7", "algebraic coeffs=-1,-1,0,0,1 lo=1 hi=2",
                           "decimal 0.1415", "decimal 0.25 err=10"}) {
    const auto r = CertifiedReal::parse(text);
    CHECK(CertifiedReal::parse(r.describe()).describe() == r.describe());
  }
  CHECK_THROWS_AS((void)CertifiedReal::parse("irrational pi"), InvalidArgument);
}

TEST_CASE("nearest integer distance") {
  const auto a = nearest_int_dist({Dyadic::parse_decimal("1.40625"), Dyadic::parse_decimal("1.421875")});
  REQUIRE(a.has_value());
  CHECK(a->offset == -1);
  CHECK(a->dist.lower() == Dyadic::parse_decimal("0.40625"));
  CHECK_FALSE(nearest_int_dist({Dyadic::parse_decimal("0.4921875"), Dyadic::parse_decimal("0.5078125")}));
  const auto h = nearest_int_dist(DyadicInterval(Dyadic(mpz_class(1), -1)));
  REQUIRE(h.has_value());
  CHECK(h->offset == -1);  // 1/2 rounds up to 1
  CHECK(h->dist == DyadicInterval(Dyadic(mpz_class(1), -1)));
  const auto neg = nearest_int_dist({Dyadic::parse_decimal("-2.25"), Dyadic::parse_decimal("-2.125")});
  REQUIRE(neg.has_value());
  CHECK(neg->offset == 2);
}

TEST_CASE("certified comparison") {
  const auto sqrt2 = CertifiedReal::algebraic(make_poly({-2, 0, 1}), 1, 2);
  CHECK(compare(CertifiedReal::rational(1), CertifiedReal::rational(2), 256) == Ordering::less);
  CHECK(compare(CertifiedReal::rational(3, 7), CertifiedReal::rational(3, 7), 256) == Ordering::equal);
  // sqrt2 - 1.41421356237 is about 3.1e-12: below the default error 1e-11,
  // above a declared error of 1e-13
  CHECK(compare(sqrt2, CertifiedReal::decimal("1.41421356237"), 256) == Ordering::undecided);
  CHECK(compare(sqrt2, CertifiedReal::decimal("1.41421356237", 13), 256) == Ordering::greater);
  CHECK(compare(sqrt2, CertifiedReal::decimal("1.41421356238", 13), 256) == Ordering::less);
  // the same algebraic number given by two intervals
  const auto other = CertifiedReal::algebraic(make_poly({-4, 0, 2}), mpq_class(7, 5), mpq_class(3, 2));
  CHECK(compare(sqrt2, other, 256) == Ordering::equal);
}

TEST_CASE("polynomial tools") {
  const IntPoly f = make_poly({-1, -1, 0, 0, 1});
  CHECK(degree(f) == 4);
  CHECK(count_real_roots(f, 1, 2) == 1);
  CHECK(count_real_roots(f, -2, 2) == 2);
  CHECK(sign_at(f, mpq_class(1)) == -1);
  CHECK(sign_at(f, mpq_class(2)) == 1);
  // (x-1)^2 (x+2) -> squarefree part (x-1)(x+2)
  CHECK(squarefree_part(make_poly({2, -3, 0, 1})) == make_poly({-2, 1, 1}));
  // xi^2 for xi^4 = xi + 1 has minimal polynomial x^4 - 2x^2 - x + 1
  CHECK(squarefree_part(charpoly_of_power(f, 2)) == make_poly({1, -1, -2, 0, 1}));
  CHECK(squarefree_part(charpoly_of_power(f, 3)) == make_poly({-1, -1, 3, -3, 1}));
  const auto s = screen_irreducible(f);
  CHECK_FALSE(s.has_rational_root);
  CHECK(s.certifying_prime.has_value());
  CHECK(screen_irreducible(make_poly({-2, 1, 1})).has_rational_root);
}
