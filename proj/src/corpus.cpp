#include "dioph/corpus.hpp"

#include "dioph/errors.hpp"
#include "json.hpp"

namespace dioph {

namespace {

Dyadic power(const Dyadic& d, int k) {
  Dyadic r(1);
  for (int i = 0; i < k; ++i) r = r * d;
  return r;
}

std::pair<int, int> shape(CaseTag c) {
  switch (c) {
    case CaseTag::m1n3:
      return {1, 3};
    case CaseTag::m3n1:
      return {3, 1};
    case CaseTag::m2n2:
      return {2, 2};
    case CaseTag::other:
      break;
  }
  throw InvalidArgument("corpus instances exist for m1n3, m3n1 and m2n2 only");
}

}  // namespace

CertifiedReal algebraic_power(const IntPoly& f, const mpq_class& lo, const mpq_class& hi, int k) {
  const CertifiedReal xi = CertifiedReal::algebraic(f, lo, hi);
  if (k == 1) return xi;
  IntPoly g = squarefree_part(charpoly_of_power(f, k));
  for (int bits = 16;; bits *= 2) {
    if (bits > 1 << 16) throw DegenerateInput("cannot isolate a power of the root");
    DyadicInterval r = refine(xi, bits);
    if (r.lower().sign() * r.upper().sign() <= 0) continue;  // still straddles 0
    Dyadic a = power(r.lower(), k);
    Dyadic b = power(r.upper(), k);
    if (b < a) std::swap(a, b);
    const mpq_class qa = a.to_rational();
    const mpq_class qb = b.to_rational();
    if (sign_at(g, qa) != 0 && sign_at(g, qb) != 0 && count_real_roots(g, qa, qb) == 1) {
      return CertifiedReal::algebraic(g, qa, qb);
    }
  }
}

CorpusInstance make_algebraic_vector(const std::string& name, CaseTag c, const IntPoly& f,
                                     const mpq_class& lo, const mpq_class& hi) {
  const auto [m, n] = shape(c);
  const int d = degree(f);
  if (d < m * n + 1) {
    throw DegreeTooLow("degree " + std::to_string(d) + " < " + std::to_string(m * n + 1) +
                       ": 1, xi, ..., xi^" + std::to_string(m * n) + " would be dependent");
  }
  const IrreducibilityScreen screen = screen_irreducible(f);
  if (screen.has_rational_root) throw DegenerateInput("polynomial has a rational root");
  std::vector<CertifiedReal> entries;
  for (int k = 1; k <= m * n; ++k) entries.push_back(algebraic_power(f, lo, hi, k));
  for (int k = 1; k < m * n; ++k) {
    if (degree(entries[static_cast<std::size_t>(k)].as_algebraic().poly) != d) {
      throw DegenerateInput("xi^" + std::to_string(k + 1) + " has lower degree than xi");
    }
  }
  CorpusInstance inst{name, ThetaMatrix(m, n, std::move(entries))};
  inst.independence = "powers 1.." + std::to_string(m * n) + " of a root of the polynomial with "
                      "ascending coefficients " + to_string(f) + " (degree " + std::to_string(d) + "); ";
  if (screen.certifying_prime) {
    inst.independence += "irreducible modulo " + std::to_string(*screen.certifying_prime);
  } else {
    inst.independence += "no rational root; irreducibility asserted by the caller";
  }
  return inst;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CorpusInstance make_liouville(const std::string& name, CaseTag c, const std::vector<int>& schedule,
                              int digits, std::uint64_t seed) {
  const auto [m, n] = shape(c);
  if (schedule.empty()) throw InvalidArgument("empty gap schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k] < 1 || (k > 0 && schedule[k] <= schedule[k - 1])) {
      throw InvalidArgument("gap schedule must be positive and strictly increasing");
    }
  }
  if (digits < schedule.front()) throw InvalidArgument("digit budget below the first gap");
  bool ratio_two = true;
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    if (schedule[k] < 2 * schedule[k - 1]) ratio_two = false;
  }
  std::vector<CertifiedReal> entries;
  for (int q = 0; q < m * n; ++q) {
    std::string frac(static_cast<std::size_t>(digits), '0');
    for (std::size_t k = 0; k < schedule.size(); ++k) {
      if (schedule[k] > digits) break;
      const std::uint64_t state =
          seed * 1000003ULL + static_cast<std::uint64_t>(q) * 1009ULL + static_cast<std::uint64_t>(k);
      frac[static_cast<std::size_t>(schedule[k] - 1)] = static_cast<char>('1' + splitmix64(state) % 9);
    }
    entries.push_back(CertifiedReal::decimal("0." + frac));
  }
  CorpusInstance inst{name, ThetaMatrix(m, n, std::move(entries))};
  inst.liouville = true;
  inst.independence = "finite decimal sums with distinct pseudo-random digits; rational, so "
                      "independence holds only below the digit budget";
  if (!ratio_two) inst.independence += "; gap ratio below 2";
  return inst;
}

std::vector<CorpusInstance> builtin_corpus() {
  std::vector<CorpusInstance> out;
  auto sqrt_of = [](long k, long lo, long hi) {
    return CertifiedReal::algebraic(make_poly({-k, 0, 1}), lo, hi);
  };
  {
    CorpusInstance inst{"sqrt2", ThetaMatrix(1, 1, {sqrt_of(2, 1, 2)})};
    inst.T = 100000;
    inst.oracle_T = 2000;
    inst.expected_alpha = Range{0.9, 1.1};
    // b_nu ~ log(c M_nu) / log M_nu approaches 1 only logarithmically
    inst.expected_beta = Range{1.0, 1.35};
    inst.tail_start = 6;
    inst.independence = "sqrt(2) is irrational";
    out.push_back(std::move(inst));
  }
  {
    CorpusInstance inst{"golden",
                        ThetaMatrix(1, 1, {CertifiedReal::algebraic(make_poly({-1, -1, 1}), 1, 2)})};
    inst.T = 100000;
    inst.oracle_T = 2000;
    inst.expected_alpha = Range{0.9, 1.1};
    // b_nu ~ log(c M_nu) / log M_nu approaches 1 only logarithmically
    inst.expected_beta = Range{1.0, 1.35};
    inst.independence = "the golden ratio is irrational";
    out.push_back(std::move(inst));
  }
  const IntPoly quartic = make_poly({-1, -1, 0, 0, 1});
  const IntPoly quintic = make_poly({-1, -1, 0, 0, 0, 1});
  {
    CorpusInstance inst = make_algebraic_vector("quartic-1", CaseTag::m1n3, quartic, 1, 2);
    inst.T = 1000000;
    inst.oracle_T = 2000;
    inst.expected_alpha = Range{0.28, 0.45};
    inst.expected_beta = Range{0.28, 0.55};
    out.push_back(std::move(inst));
  }
  {
    CorpusInstance inst = make_algebraic_vector("quartic-1-row", CaseTag::m3n1, quartic, 1, 2);
    inst.T = 400;
    inst.oracle_T = 200;
    out.push_back(std::move(inst));
  }
  {
    CorpusInstance inst = make_algebraic_vector("quintic-1", CaseTag::m2n2, quintic, 1, 2);
    inst.T = 10000;
    inst.oracle_T = 500;
    out.push_back(std::move(inst));
  }
  {
    auto shifted = [](long c1, long c0) {
      return CertifiedReal::algebraic(make_poly({c0, c1, 1}), 0, 1);
    };
    // sqrt2 - 1, sqrt3 - 1, sqrt5 - 2 as roots of x^2+2x-1, x^2+2x-2, x^2+4x-1
    CorpusInstance inst{"sqrt-triple",
                        ThetaMatrix(1, 3, {shifted(2, -1), shifted(2, -2), shifted(4, -1)})};
    inst.T = 100000;
    inst.oracle_T = 2000;
    inst.independence = "1, sqrt2, sqrt3, sqrt5 are linearly independent over Q";
    out.push_back(std::move(inst));
  }
  {
    CorpusInstance inst{"sqrt-quad", ThetaMatrix(2, 2, {sqrt_of(2, 1, 2), sqrt_of(3, 1, 2),
                                                        sqrt_of(5, 2, 3), sqrt_of(7, 2, 3)})};
    inst.T = 10000;
    inst.oracle_T = 500;
    inst.independence = "1, sqrt2, sqrt3, sqrt5, sqrt7 are linearly independent over Q";
    out.push_back(std::move(inst));
  }
  {
    CorpusInstance inst =
        make_liouville("liouville-1", CaseTag::m1n3, {1, 4, 16, 64, 256, 1024}, 2500, 4);
    inst.T = 100000;
    inst.oracle_T = 2000;
    inst.tail_start = 2;
    out.push_back(std::move(inst));
  }
  return out;
}

const CorpusInstance& find_instance(const std::vector<CorpusInstance>& corpus,
                                    const std::string& name) {
  for (const auto& inst : corpus) {
    if (inst.name == name) return inst;
  }
  throw InvalidArgument("no corpus instance named " + name);
}

RunConfig to_run_config(const CorpusInstance& inst) {
  RunConfig cfg;
  cfg.name = inst.name;
  cfg.m = inst.theta.m();
  cfg.n = inst.theta.n();
  cfg.max_height = inst.T;
  cfg.tail_start = inst.tail_start;
  cfg.entries = inst.theta.entries();
  return cfg;
}

std::string manifest_json(const std::vector<CorpusInstance>& corpus) {
  using nlohmann::json;
  json list = json::array();
  for (const auto& inst : corpus) {
    auto range = [](const std::optional<Range>& r) {
      return r ? json{r->first, r->second} : json(nullptr);
    };
    list.push_back({{"name", inst.name},
                    {"config", inst.name + ".cfg"},
                    {"case", to_string(inst.theta.case_tag())},
                    {"m", inst.theta.m()},
                    {"n", inst.theta.n()},
                    {"T", inst.T},
                    {"oracle_T", inst.oracle_T},
                    {"config_hash", inst.theta.config_hash()},
                    {"expected_alpha", range(inst.expected_alpha)},
                    {"expected_beta", range(inst.expected_beta)},
                    {"tail_start", inst.tail_start ? json(*inst.tail_start) : json(nullptr)},
                    {"precision_limited", inst.theta.precision_limited()},
                    {"independence", inst.independence}});
  }
  return json{{"instances", list}}.dump(2) + "\n";
}

}  // namespace dioph
