#include "doctest.h"
#include "dioph/bestapprox.hpp"
#include "dioph/errors.hpp"
#include "dioph/polynomial.hpp"
#include "dioph/structure.hpp"
#include "oracles.hpp"

using namespace dioph;

namespace {

std::vector<ZVector> zs_of(const std::vector<IntVector>& v) {
  std::vector<ZVector> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back({static_cast<int>(i) + 1, v[i]});
  return out;
}

std::vector<std::vector<long double>> as_ld(const std::vector<IntVector>& v) {
  std::vector<std::vector<long double>> out;
  for (const auto& row : v) out.emplace_back(row.begin(), row.end());
  return out;
}

ApproxSequence sqrt2_sequence(std::int64_t T) {
  const ThetaMatrix t(1, 1, {CertifiedReal::algebraic(make_poly({-2, 0, 1}), 1, 2)});
  return compute_sequence(t, T);
}

}  // namespace

TEST_CASE("z vectors") {
  const ApproxSequence seq = sqrt2_sequence(200);
  const auto zs = z_vectors(seq);
  CHECK(zs[2].coords == IntVector{5, -7});
  CHECK(z_vectors(ApproxSequence{}).empty());
}

TEST_CASE("exact rank and determinant against cofactor expansion") {
  const std::vector<std::vector<IntVector>> cases = {
      {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
      {{1, 2, 3, 4}, {2, 4, 6, 8}},
      {{1, -1}, {2, -3}},
      {{3, 1, 4, 1}, {5, 9, 2, 6}, {5, 3, 5, 8}, {9, 7, 9, 3}},
      {{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}, {2, 0, 1, 7}},
      {{0, 0, 0, 0}},
  };
  for (const auto& c : cases) {
    CHECK(exact_rank(c) == oracle::rank(as_ld(c)));
    if (c.size() == c[0].size()) {
      IntMatrix m;
      for (const auto& row : c) {
        std::vector<mpz_class> r;
        for (auto v : row) r.emplace_back(static_cast<long>(v));
        m.push_back(r);
      }
      CHECK(exact_det(m).get_d() == doctest::Approx(static_cast<double>(oracle::det(as_ld(c)))));
    }
  }
  CHECK(exact_rank({{1, -1}, {2, -3}}) == 2);
}

TEST_CASE("runs") {
  const auto zs = zs_of({{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}});
  const auto runs = find_runs(zs);
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].a == 1);
  CHECK(runs[0].b == 3);
  CHECK_FALSE(runs[0].left_exit);
  CHECK(runs[0].right_exit);
  CHECK(runs[0].det2_squared == 1);
  CHECK(runs[1].a == 3);
  CHECK(runs[1].b == 4);
  CHECK(runs[1].left_exit);

  const auto two = find_runs(zs_of({{1, 2, 0, 0}, {0, 1, 1, 0}}));
  REQUIRE(two.size() == 1);
  CHECK(two[0].a == 1);
  CHECK(two[0].b == 2);

  const auto d2 = find_runs(z_vectors(sqrt2_sequence(10000)));
  REQUIRE(d2.size() == 1);
  CHECK(d2[0].b == static_cast<int>(z_vectors(sqrt2_sequence(10000)).size()));

  CHECK_THROWS_AS((void)find_runs(zs_of({{1, 2, 0, 0}, {2, 4, 0, 0}})), DegenerateInput);
}

TEST_CASE("every run is maximal with rank 2 inside and 3 across the boundary") {
  const auto zs = zs_of({{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0},
                         {0, 1, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 1}});
  for (const auto& run : find_runs(zs)) {
    std::vector<IntVector> inside;
    for (int i = run.a; i <= run.b; ++i) inside.push_back(zs[static_cast<std::size_t>(i - 1)].coords);
    CHECK(exact_rank(inside) == 2);
    if (run.right_exit) {
      inside.push_back(zs[static_cast<std::size_t>(run.b)].coords);
      CHECK(exact_rank(inside) == 3);
    }
  }
}

TEST_CASE("pattern quadruples and determinant checks") {
  // runs [1,2], [2,4] (z4 = z2 + z3), [4,5]; only [2,4] has both exits
  const auto zs = zs_of({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}});
  const auto runs = find_runs(zs);
  REQUIRE(runs.size() == 3);
  const auto q13 = pattern_quadruples(zs, runs, CaseTag::m1n3);
  REQUIRE(q13.size() == 1);
  CHECK(q13[0].nu == 2);
  CHECK(q13[0].k == 4);
  std::vector<int> idx;
  for (const auto& z : q13[0].rows) idx.push_back(z.nu);
  CHECK(idx == std::vector<int>{1, 2, 4, 5});
  CHECK(q13[0].independent());
  const auto q31 = pattern_quadruples(zs, runs, CaseTag::m3n1);
  REQUIRE(q31.size() == 1);
  idx.clear();
  for (const auto& z : q31[0].rows) idx.push_back(z.nu);
  CHECK(idx == std::vector<int>{1, 2, 3, 5});

  // a quadruple that is only rank 3: z5 lies in span(z1, z2, z3)
  const auto flat = zs_of({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 1, 1, 0}, {1, 0, 1, 0}});
  const auto fq = pattern_quadruples(flat, find_runs(flat), CaseTag::m1n3);
  REQUIRE_FALSE(fq.empty());
  CHECK(fq[0].rank == 3);
  CHECK_FALSE(fq[0].independent());

  const auto pair = zs_of({{1, 0, 0, 0}, {0, 1, 0, 0}});
  CHECK(pattern_quadruples(pair, find_runs(pair), CaseTag::m1n3).empty());
}

TEST_CASE("determinant check on identity rows") {
  ApproxSequence seq;
  seq.m = 1;
  seq.n = 3;
  for (int i = 0; i < 4; ++i) {
    BestApproxRecord r;
    r.nu = i + 1;
    r.x = {1};
    r.y = {0, 0, 0};
    r.M = 1 << i;
    r.zeta = DyadicInterval(Dyadic(mpz_class(1), -i));
    seq.records.push_back(r);
  }
  PatternQuadruple q;
  q.nu = 2;
  q.k = 3;
  q.rows = zs_of({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  q.rank = 4;
  const DetCheck d = det_bound_check(q, seq, CaseTag::m1n3);
  CHECK(abs(d.det) == 1);
  CHECK(d.independent);
  q.rows[3].coords = {1, 1, 0, 0};
  q.rank = 3;
  const DetCheck z = det_bound_check(q, seq, CaseTag::m1n3);
  CHECK(z.det == 0);
  CHECK_FALSE(z.ok);
  CHECK_FALSE(z.independent);
}

TEST_CASE("lemma ratio on sqrt2 stays in a factor-2 band") {
  const ApproxSequence seq = sqrt2_sequence(100000);
  const auto runs = find_runs(z_vectors(seq));
  const LemmaRatio lr = lemma_ratio(runs[0], seq);
  CHECK(lr.products.size() == seq.records.size() - 1);
  CHECK(lr.ratio <= 2);
  CHECK(lr.within(kDefaultLemmaThreshold));
  CoplanarRun pair = runs[0];
  pair.b = pair.a + 1;
  CHECK(lemma_ratio(pair, seq).ratio == 1);
}

TEST_CASE("tail rank") {
  const auto d2 = z_vectors(sqrt2_sequence(1000));
  for (const auto& t : tail_rank(d2, default_cutoffs(d2.size()))) CHECK(t.rank == 2);
  const auto zs = zs_of({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  const auto tr = tail_rank(zs, {1, 2, 3, 4});
  CHECK(tr[0].rank == 4);
  CHECK(tr[3].rank == 1);
  for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i].rank <= tr[i - 1].rank);
  CHECK(default_cutoffs(20) == std::vector<int>{1, 2, 4, 8});
}
