#include <cmath>

#include "doctest.h"
#include "dioph/config.hpp"
#include "dioph/corpus.hpp"
#include "dioph/errors.hpp"
#include "dioph/exponents.hpp"

using namespace dioph;

TEST_CASE("algebraic vectors") {
  const IntPoly quartic = make_poly({-1, -1, 0, 0, 1});
  const CorpusInstance q = make_algebraic_vector("q", CaseTag::m1n3, quartic, 1, 2);
  const double xi = 1.2207440846057596;
  for (int k = 1; k <= 3; ++k) {
    CHECK(std::fabs(refine(q.theta.entry(k - 1, 0), 64).midpoint() - std::pow(xi, k)) < 1e-14);
  }
  const CorpusInstance r = make_algebraic_vector("r", CaseTag::m3n1, quartic, 1, 2);
  CHECK(r.theta.m() == 3);
  CHECK(std::fabs(refine(r.theta.entry(0, 2), 64).midpoint() - std::pow(xi, 3)) < 1e-14);

  const CorpusInstance p = make_algebraic_vector("p", CaseTag::m2n2, make_poly({-1, -1, 0, 0, 0, 1}), 1, 2);
  const double eta = 1.1673039782614187;
  CHECK(std::fabs(refine(p.theta.entry(1, 1), 64).midpoint() - std::pow(eta, 4)) < 1e-14);
  CHECK(degree(p.theta.entry(1, 1).as_algebraic().poly) == 5);

  CHECK_THROWS_AS((void)make_algebraic_vector("s", CaseTag::m1n3, make_poly({-2, 0, 1}), 1, 2), DegreeTooLow);
  CHECK_THROWS_AS((void)make_algebraic_vector("s", CaseTag::m2n2, quartic, 1, 2), DegreeTooLow);
}

TEST_CASE("splitmix64 reference values") {
  // first outputs of the generator seeded with 0
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("liouville instances") {
  CHECK_THROWS_AS((void)make_liouville("e", CaseTag::m1n3, {}, 60, 1), InvalidArgument);
  CHECK_THROWS_AS((void)make_liouville("e", CaseTag::m1n3, {2, 2}, 60, 1), InvalidArgument);
  const CorpusInstance l = make_liouville("l", CaseTag::m1n3, {1, 4, 16, 64}, 80, 4);
  CHECK(l.liouville);
  CHECK(l.theta.precision_limited());
  for (const auto& e : l.theta.entries()) {
    const std::string& d = e.as_decimal().digits;
    for (std::size_t i = 2; i < d.size(); ++i) {
      const bool gap = i - 1 == 1 || i - 1 == 4 || i - 1 == 16 || i - 1 == 64;
      CHECK((d[i] != '0') == gap);
    }
  }
  CHECK(l.theta.entry(0, 0).describe() != l.theta.entry(1, 0).describe());
}

TEST_CASE("builtin corpus and manifest") {
  const auto corpus = builtin_corpus();
  CHECK(corpus.size() == 8);
  CHECK(find_instance(corpus, "quartic-1").T == 1000000);
  CHECK_THROWS_AS((void)find_instance(corpus, "nope"), InvalidArgument);
  const std::string manifest = manifest_json(corpus);
  for (const auto& inst : corpus) CHECK(manifest.find("\"" + inst.name + "\"") != std::string::npos);
}

TEST_CASE("config round trip and errors") {
  const auto corpus = builtin_corpus();
  for (const auto& inst : corpus) {
    const RunConfig cfg = to_run_config(inst);
    const RunConfig back = parse_config(to_config_text(cfg));
    CHECK(back.theta().config_hash() == inst.theta.config_hash());
    CHECK(back.max_height == inst.T);
    CHECK(back.tail_start == inst.tail_start);
  }
  const std::string good = "m = 1\nn = 1\nentry.1.1 = rational 1/3\n";
  CHECK_NOTHROW((void)parse_config(good));
  try {
    (void)parse_config("m = 1\nn = 1\nbogus = 3\nentry.1.1 = rational 1/3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }
  try {
    (void)parse_config("m = 1\nn = 1\nentry.2.1 = rational 1/3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }
  try {
    (void)parse_config("# header\nm = 1\nn = 1\nentry.1.1 = algebraic coeffs=-2,0,1 lo=2 hi=3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS((void)parse_config("m = 1\nn = 1\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("m = 1\nm = 1\n"), ConfigError);
}

TEST_CASE("liouville corpus instance separates the exponents") {
  const CorpusInstance l = find_instance(builtin_corpus(), "liouville-1");
  const ApproxSequence seq = compute_sequence(l.theta, l.T);
  const ExponentEstimate est = estimate_exponents(seq, l.tail_start);
  CHECK(est.beta_hat >= 2);
  CHECK(est.alpha_hat <= 1);
  CHECK(est.beta_hat - est.alpha_hat >= 0.5);
}
