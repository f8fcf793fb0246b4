#include <cmath>

#include "doctest.h"
#include "dioph/bestapprox.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"
#include "dioph/polynomial.hpp"

using namespace dioph;

namespace {

/// Synthetic m = n = 1 sequence with the given heights and exact dyadic errors.
ApproxSequence synthetic(const std::vector<std::int64_t>& M, const std::vector<Dyadic>& z) {
  ApproxSequence seq;
  seq.config_hash = "0000000000000000";
  seq.m = 1;
  seq.n = 1;
  seq.T = M.back();
  seq.precision_cap_bits = 4096;
  for (std::size_t i = 0; i < M.size(); ++i) {
    BestApproxRecord r;
    r.nu = static_cast<int>(i) + 1;
    r.x = {M[i]};
    r.y = {0};
    r.M = M[i];
    r.zeta = DyadicInterval(z[i]);
    r.bits = 64;
    seq.records.push_back(r);
  }
  return seq;
}

}  // namespace

TEST_CASE("local ratio arithmetic") {
  // M = 16, zeta = 2^-8, M_next = 256: b = 8/4 = 2, a = 8/8 = 1
  const ApproxSequence seq = synthetic({1, 16, 256, 4096}, {Dyadic(mpz_class(1), -1), Dyadic(mpz_class(1), -8),
                                                            Dyadic(mpz_class(1), -10), Dyadic(mpz_class(1), -13)});
  const auto ratios = local_ratios(seq);
  REQUIRE(ratios.size() == 2);
  CHECK(ratios[0].nu == 2);
  CHECK(ratios[0].b.lo <= 2.0);
  CHECK(ratios[0].b.hi >= 2.0);
  CHECK(ratios[0].a.lo <= 1.0);
  CHECK(ratios[0].a.hi >= 1.0);
  CHECK(ratios[0].b.width() < 1e-12);
  CHECK(ratios[0].a_width_log2 < -60);
}

TEST_CASE("zeta = M_next^(-1/3) gives a = 1/3") {
  // M_next = 8^k and zeta = 2^-k exactly
  std::vector<std::int64_t> M;
  std::vector<Dyadic> z;
  for (int k = 0; k <= 6; ++k) {
    M.push_back(std::int64_t{1} << (3 * k));
    z.push_back(Dyadic(mpz_class(1), -(k + 1)));
  }
  const auto est = estimate_exponents(synthetic(M, z), 1);
  for (const auto& r : est.ratios) CHECK(std::fabs(r.a.mid() - 1.0 / 3) < 1e-12);
  CHECK(std::fabs(est.alpha_hat - 1.0 / 3) < 1e-12);
}

TEST_CASE("sqrt2 exponents tend to 1") {
  const ThetaMatrix t(1, 1, {CertifiedReal::algebraic(make_poly({-2, 0, 1}), 1, 2)});
  const ApproxSequence seq = compute_sequence(t, 100000);
  const ExponentEstimate est = estimate_exponents(seq, 6);
  CHECK(est.alpha_hat >= 0.9);
  CHECK(est.alpha_hat <= 1.1);
  CHECK(est.beta_hat >= est.alpha_hat);
  // zeta_nu ~ 1 / (2 sqrt2 M_nu), so b_nu ~ log(2 sqrt2 M_nu) / log M_nu: it
  // decreases to 1 only logarithmically and the tail maximum is its first term
  const auto ratios = local_ratios(seq);
  for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i].b.mid() < ratios[i - 1].b.mid());
  CHECK(ratios.back().b.mid() <= 1.1);
  // record 6 is 99/70 with zeta = |70 sqrt2 - 99| = 1 / (70 sqrt2 + 99)
  CHECK(est.beta_nu == 6);
  CHECK(std::fabs(est.beta_hat - std::log(70 * std::sqrt(2.0) + 99) / std::log(70.0)) < 1e-12);
  CHECK(std::fabs(ratios.back().a.mid() - 1) < std::fabs(ratios.front().a.mid() - 1));
  CHECK(ratios_csv(ratios).rfind("nu,", 0) == 0);
}

TEST_CASE("too few records") {
  const ApproxSequence two = synthetic({1, 2}, {Dyadic(mpz_class(1), -1), Dyadic(mpz_class(1), -2)});
  CHECK_THROWS_AS((void)estimate_exponents(two), InsufficientData);
}
