#include <cmath>

#include "doctest.h"
#include "dioph/bestapprox.hpp"
#include "dioph/errors.hpp"
#include "dioph/polynomial.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

CertifiedReal sqrt_of(long k, long lo, long hi) {
  return CertifiedReal::algebraic(make_poly({-k, 0, 1}), lo, hi);
}

ThetaMatrix sqrt_triple() {
  auto s = [](long c1, long c0) { return CertifiedReal::algebraic(make_poly({c0, c1, 1}), 0, 1); };
  return ThetaMatrix(1, 3, {s(2, -1), s(2, -2), s(4, -1)});
}

std::vector<std::int64_t> heights(const ApproxSequence& seq) {
  std::vector<std::int64_t> out;
  for (const auto& r : seq.records) out.push_back(r.M);
  return out;
}

}  // namespace

TEST_CASE("sqrt2: records are the continued-fraction denominators") {
  const ThetaMatrix t(1, 1, {sqrt_of(2, 1, 2)});
  const ApproxSequence seq = compute_sequence(t, 200);
  CHECK(heights(seq) == oracle::sqrt_convergent_denominators(2, 200));
  CHECK(heights(seq) == std::vector<std::int64_t>{1, 2, 5, 12, 29, 70, 169});
  CHECK(seq.records[2].y == IntVector{-7});
  const ApproxSequence s7 = compute_sequence(ThetaMatrix(1, 1, {sqrt_of(7, 2, 3)}), 5000);
  CHECK(heights(s7) == oracle::sqrt_convergent_denominators(7, 5000));
}

TEST_CASE("T = 1 gives the single point x = 1") {
  const ApproxSequence seq = compute_sequence(sqrt_triple(), 1);
  REQUIRE(seq.records.size() == 1);
  CHECK(seq.records[0].x == IntVector{1});
  CHECK(std::fabs(seq.records[0].zeta.midpoint() - (std::sqrt(2.0) - 1)) < 1e-15);
}

TEST_CASE("sqrt triple matches the long double scan and the oracle") {
  const ThetaMatrix t = sqrt_triple();
  const ApproxSequence seq = compute_sequence(t, 2000);
  const auto ref = oracle::column_record_heights(
      {std::sqrt(2.0L) - 1, std::sqrt(3.0L) - 1, std::sqrt(5.0L) - 2}, 2000);
  REQUIRE(ref.has_value());
  CHECK(heights(seq) == *ref);
  std::string why;
  CHECK_MESSAGE(same_records(seq, oracle_sequence(t, 2000), &why), why);
  CHECK(verify_sequence(t, seq).ok);
}

TEST_CASE("m = 3, T = 1: minimum over the 13 canonical points") {
  const ThetaMatrix row(3, 1, {sqrt_of(2, 1, 2), sqrt_of(3, 1, 2), sqrt_of(5, 2, 3)});
  const ApproxSequence seq = compute_sequence(row, 1);
  REQUIRE(seq.records.size() == 1);
  // brute force over canonical points of height 1
  double best = 2;
  IntVector arg;
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b)
      for (int c = -1; c <= 1; ++c) {
        const IntVector x{a, b, c};
        if (!is_canonical(x)) continue;
        const double v = a * std::sqrt(2.0) + b * std::sqrt(3.0) + c * std::sqrt(5.0);
        const double d = std::fabs(v - std::nearbyint(v));
        if (d < best) {
          best = d;
          arg = x;
        }
      }
  CHECK(seq.records[0].x == arg);
  CHECK(std::fabs(seq.records[0].zeta.midpoint() - best) < 1e-12);
}

TEST_CASE("engine equals oracle for m = 2 and m = 3, any worker count") {
  const ThetaMatrix quad(2, 2, {sqrt_of(2, 1, 2), sqrt_of(3, 1, 2), sqrt_of(5, 2, 3), sqrt_of(7, 2, 3)});
  const ThetaMatrix row(3, 1, {sqrt_of(2, 1, 2), sqrt_of(3, 1, 2), sqrt_of(5, 2, 3)});
  for (const ThetaMatrix* t : {&quad, &row}) {
    const std::int64_t T = t->m() == 2 ? 120 : 30;
    const ApproxSequence one = compute_sequence(*t, T, {}, 1);
    const ApproxSequence four = compute_sequence(*t, T, {}, 4);
    CHECK(to_json(one) == to_json(four));
    std::string why;
    CHECK_MESSAGE(same_records(one, oracle_sequence(*t, T), &why), why);
    CHECK(verify_sequence(*t, one).ok);
  }
}

TEST_CASE("rational theta terminates at the first exact hit") {
  const ThetaMatrix t(1, 1, {CertifiedReal::rational(3, 7)});
  const ApproxSequence seq = compute_sequence(t, 100);
  REQUIRE(seq.flags.terminated_at.has_value());
  CHECK(*seq.flags.terminated_at == IntVector{7});
  CHECK(seq.records.back().M < 7);
  const ApproxSequence ref = oracle_sequence(t, 100);
  CHECK(same_records(seq, ref));
  CHECK(ref.flags.terminated_at == seq.flags.terminated_at);
  CHECK(verify_sequence(t, seq).ok);
}

TEST_CASE("verify rejects corrupted sequences") {
  const ThetaMatrix t(1, 1, {sqrt_of(2, 1, 2)});
  const ApproxSequence seq = compute_sequence(t, 200);
  REQUIRE(verify_sequence(t, seq).ok);

  ApproxSequence swapped = seq;
  std::swap(swapped.records[2], swapped.records[3]);
  swapped.records[2].nu = 3;
  swapped.records[3].nu = 4;
  const VerifyReport r1 = verify_sequence(t, swapped);
  CHECK_FALSE(r1.ok);
  CHECK(r1.failure.find("monoton") != std::string::npos);

  ApproxSequence doubled = seq;
  auto& rec = doubled.records[3];
  rec.x[0] *= 2;
  rec.M *= 2;
  rec.y[0] *= 2;
  rec.zeta = zeta(t, rec.x, {64, 4096}).zeta;
  CHECK_FALSE(verify_sequence(t, doubled).ok);

  ApproxSequence dropped = seq;
  dropped.records.erase(dropped.records.begin() + 4);
  for (std::size_t i = 0; i < dropped.records.size(); ++i) dropped.records[i].nu = static_cast<int>(i) + 1;
  const VerifyReport r3 = verify_sequence(t, dropped);
  CHECK_FALSE(r3.ok);
  REQUIRE(r3.counterexample.has_value());
  CHECK(*r3.counterexample == IntVector{29});
}

TEST_CASE("input checks") {
  const ThetaMatrix t(1, 1, {sqrt_of(2, 1, 2)});
  CHECK_THROWS_AS((void)compute_sequence(t, 0), InvalidArgument);
  CHECK_THROWS_AS((void)compute_sequence(t, 10, {}, 0), InvalidArgument);
}

TEST_CASE("JSON round trip is byte-identical") {
  const ThetaMatrix t = sqrt_triple();
  const ApproxSequence seq = compute_sequence(t, 500);
  const std::string a = to_json(seq);
  const ApproxSequence back = sequence_from_json(a);
  CHECK(to_json(back) == a);
  CHECK(same_records(seq, back));
  CHECK_THROWS_AS((void)sequence_from_json("{"), InvalidArgument);
  CHECK_THROWS_AS((void)sequence_from_json("{\"records\": 3}"), InvalidArgument);
  const std::string csv = to_csv(seq);
  CHECK(csv.rfind("nu,M,x1,y1,y2,y3,zeta_lo,zeta_hi,bits\n", 0) == 0);
}

TEST_CASE("is_canonical") {
  CHECK(is_canonical({0, 1, -3}));
  CHECK_FALSE(is_canonical({0, -1, 3}));
  CHECK_FALSE(is_canonical({0, 0}));
}
