#include "dioph/structure.hpp"

#include <algorithm>
#include <limits>

#include "dioph/errors.hpp"
#include "json.hpp"

namespace dioph {

namespace {

IntMatrix to_matrix(const std::vector<IntVector>& vs) {
  IntMatrix a;
  for (const auto& v : vs) {
    std::vector<mpz_class> row;
    for (auto c : v) row.emplace_back(static_cast<long>(c));
    a.push_back(std::move(row));
  }
  return a;
}

// Fraction-free elimination in place; returns the rank. Rows are vectors.
int bareiss_rank(IntMatrix& a) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a[0].size();
  std::size_t r = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && sgn(a[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = a[i][j] * a[r][c] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

const BestApproxRecord& record(const ApproxSequence& seq, int nu) {
  return seq.records.at(static_cast<std::size_t>(nu - 1));
}

mpz_class det2_squared(const IntVector& u, const IntVector& v) {
  std::vector<mpz_class> minors;
  mpz_class g = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      mpz_class m = mpz_class(static_cast<long>(u[i])) * static_cast<long>(v[j]) -
                    mpz_class(static_cast<long>(u[j])) * static_cast<long>(v[i]);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.get_mpz_t());
      minors.push_back(m);
    }
  }
  if (sgn(g) == 0) return 0;
  mpz_class sum = 0;
  for (auto& m : minors) {
    mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), g.get_mpz_t());
    sum += m * m;
  }
  return sum;
}

std::vector<std::size_t> column_order(CaseTag c) {
  if (c == CaseTag::m1n3) return {1, 2, 3, 0};  // (y1, y2, y3, x)
  return {0, 1, 2, 3};                          // (x..., y...)
}

}  // namespace

std::vector<ZVector> z_vectors(const ApproxSequence& seq) {
  std::vector<ZVector> out;
  for (const auto& r : seq.records) {
    ZVector z;
    z.nu = r.nu;
    z.coords = r.x;
    z.coords.insert(z.coords.end(), r.y.begin(), r.y.end());
    out.push_back(std::move(z));
  }
  return out;
}

int exact_rank(const std::vector<IntVector>& vs) {
  IntMatrix a = to_matrix(vs);
  return bareiss_rank(a);
}

mpz_class exact_det(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  for (const auto& row : a) {
    if (row.size() != n) throw InvalidArgument("determinant of a non-square matrix");
  }
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a[k][k]) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && sgn(a[piv][k]) == 0) ++piv;
      if (piv == n) return 0;
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::vector<CoplanarRun> find_runs(const std::vector<ZVector>& zs) {
  std::vector<CoplanarRun> runs;
  if (zs.size() < 2) return runs;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    if (exact_rank({zs[i].coords, zs[i + 1].coords}) < 2) {
      throw DegenerateInput("z_" + std::to_string(zs[i].nu) + " and z_" +
                            std::to_string(zs[i + 1].nu) + " are dependent");
    }
  }
  std::size_t a = 0;
  while (a + 1 < zs.size()) {
    std::size_t b = a + 1;
    while (b + 1 < zs.size() &&
           exact_rank({zs[a].coords, zs[a + 1].coords, zs[b + 1].coords}) == 2) {
      ++b;
    }
    CoplanarRun run;
    run.a = zs[a].nu;
    run.b = zs[b].nu;
    run.basis1 = zs[a].coords;
    run.basis2 = zs[a + 1].coords;
    run.det2_squared = det2_squared(run.basis1, run.basis2);
    run.left_exit =
        a > 0 && exact_rank({zs[a].coords, zs[a + 1].coords, zs[a - 1].coords}) == 3;
    run.right_exit =
        b + 1 < zs.size() && exact_rank({zs[a].coords, zs[a + 1].coords, zs[b + 1].coords}) == 3;
    runs.push_back(std::move(run));
    if (b + 1 >= zs.size()) break;
    a = b;
  }
  return runs;
}

std::vector<PatternQuadruple> pattern_quadruples(const std::vector<ZVector>& zs,
                                                 const std::vector<CoplanarRun>& runs, CaseTag c) {
  std::vector<PatternQuadruple> out;
  if (c == CaseTag::other || zs.empty() || zs.front().coords.size() != 4) return out;
  auto at = [&zs](int nu) -> const ZVector& {
    return zs.at(static_cast<std::size_t>(nu - zs.front().nu));
  };
  for (const auto& run : runs) {
    if (!run.left_exit || !run.right_exit) continue;
    PatternQuadruple q;
    q.nu = run.a;
    q.k = run.b;
    if (c == CaseTag::m3n1) {
      q.rows = {at(run.a - 1), at(run.a), at(run.a + 1), at(run.b + 1)};
    } else {
      q.rows = {at(run.a - 1), at(run.a), at(run.b), at(run.b + 1)};
    }
    std::vector<IntVector> vs;
    for (const auto& z : q.rows) vs.push_back(z.coords);
    q.rank = exact_rank(vs);
    out.push_back(std::move(q));
  }
  return out;
}

DetCheck det_bound_check(const PatternQuadruple& q, const ApproxSequence& seq, CaseTag c) {
  DetCheck d;
  d.nu = q.nu;
  d.k = q.k;
  d.independent = q.independent();
  const auto order = column_order(c);
  IntMatrix a;
  for (const auto& z : q.rows) {
    std::vector<mpz_class> row;
    for (auto col : order) row.emplace_back(static_cast<long>(z.coords.at(col)));
    a.push_back(std::move(row));
  }
  d.det = exact_det(a);
  auto zeta = [&seq](int nu) { return record(seq, nu).zeta.upper(); };
  auto M = [&seq](int nu) { return Dyadic(static_cast<long>(record(seq, nu).M)); };
  const Dyadic c24(24);
  switch (c) {
    case CaseTag::m1n3:
      d.bound = c24 * zeta(q.nu - 1) * zeta(q.nu) * zeta(q.k) * M(q.k + 1);
      break;
    case CaseTag::m3n1:
      d.bound = c24 * zeta(q.nu - 1) * M(q.nu) * M(q.nu + 1) * M(q.k + 1);
      break;
    case CaseTag::m2n2:
      d.bound = c24 * zeta(q.nu - 1) * zeta(q.nu) * M(q.k) * M(q.k + 1);
      break;
    case CaseTag::other:
      throw InvalidArgument("determinant bounds exist only for d = 4 cases");
  }
  mpz_class abs_det = ::abs(d.det);
  d.ok = d.independent && abs_det >= 1 && Dyadic(abs_det, 0) <= d.bound;
  return d;
}

LemmaRatio lemma_ratio(const CoplanarRun& run, const ApproxSequence& seq) {
  LemmaRatio lr;
  lr.a = run.a;
  lr.b = run.b;
  Dyadic max_hi;
  Dyadic min_lo;
  for (int l = run.a; l < run.b; ++l) {
    const mpz_class next(static_cast<long>(record(seq, l + 1).M));
    DyadicInterval p = record(seq, l).zeta * next;
    if (lr.products.empty() || max_hi < p.upper()) max_hi = p.upper();
    if (lr.products.empty() || p.lower() < min_lo) min_lo = p.lower();
    lr.products.push_back(p);
  }
  if (lr.products.size() <= 1) {
    lr.ratio = 1;
  } else if (min_lo.is_zero()) {
    lr.ratio = std::numeric_limits<double>::infinity();
  } else {
    lr.ratio = mpq_class(max_hi.to_rational() / min_lo.to_rational()).get_d();
  }
  return lr;
}

std::vector<TailRank> tail_rank(const std::vector<ZVector>& zs, const std::vector<int>& cutoffs) {
  std::vector<TailRank> out;
  if (zs.empty()) return out;
  // rank of each suffix, grown from the end
  std::vector<int> suffix_rank(zs.size());
  std::vector<IntVector> basis;
  for (std::size_t i = zs.size(); i-- > 0;) {
    basis.push_back(zs[i].coords);
    if (exact_rank(basis) < static_cast<int>(basis.size())) basis.pop_back();
    suffix_rank[i] = static_cast<int>(basis.size());
  }
  const int first = zs.front().nu;
  for (int start : cutoffs) {
    const int idx = start - first;
    if (idx < 0 || idx >= static_cast<int>(zs.size())) continue;
    out.push_back({start, suffix_rank[static_cast<std::size_t>(idx)]});
  }
  return out;
}

std::vector<int> default_cutoffs(std::size_t count) {
  std::vector<int> out{1};
  for (std::size_t s = 2; s <= count / 2; s *= 2) out.push_back(static_cast<int>(s));
  return out;
}

StructureReport analyze(const ApproxSequence& seq, CaseTag c, double lemma_threshold,
                        std::optional<std::vector<int>> cutoffs) {
  StructureReport rep;
  rep.lemma_threshold = lemma_threshold;
  std::vector<ZVector> zs = z_vectors(seq);
  std::size_t from = 0;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    if (exact_rank({zs[i].coords, zs[i + 1].coords}) < 2) from = i + 1;
  }
  if (from > 0) rep.note = "dependent consecutive pair before record " + std::to_string(from + 1);
  rep.independent_from = zs.empty() ? 0 : static_cast<int>(from) + 1;
  std::vector<ZVector> tail(zs.begin() + static_cast<std::ptrdiff_t>(from), zs.end());
  rep.runs = find_runs(tail);
  rep.quadruples = pattern_quadruples(tail, rep.runs, c);
  for (const auto& q : rep.quadruples) rep.det_checks.push_back(det_bound_check(q, seq, c));
  for (const auto& run : rep.runs) rep.lemma_ratios.push_back(lemma_ratio(run, seq));
  rep.tail_ranks = tail_rank(zs, cutoffs ? *cutoffs : default_cutoffs(zs.size()));
  return rep;
}

std::string to_json(const StructureReport& rep, bool pretty) {
  using nlohmann::json;
  json runs = json::array();
  for (const auto& r : rep.runs) {
    runs.push_back({{"a", r.a},
                    {"b", r.b},
                    {"basis", {r.basis1, r.basis2}},
                    {"det2_squared", r.det2_squared.get_str()},
                    {"left_exit", r.left_exit},
                    {"right_exit", r.right_exit}});
  }
  json quads = json::array();
  for (std::size_t i = 0; i < rep.quadruples.size(); ++i) {
    const auto& q = rep.quadruples[i];
    const auto& d = rep.det_checks[i];
    json rows = json::array();
    for (const auto& z : q.rows) rows.push_back({{"nu", z.nu}, {"z", z.coords}});
    quads.push_back({{"nu", q.nu},
                     {"k", q.k},
                     {"rows", rows},
                     {"rank", q.rank},
                     {"det", d.det.get_str()},
                     {"bound", d.bound.to_double()},
                     {"ok", d.ok}});
  }
  json lemmas = json::array();
  for (const auto& l : rep.lemma_ratios) {
    json products = json::array();
    for (const auto& p : l.products) products.push_back(p.midpoint());
    lemmas.push_back({{"a", l.a},
                      {"b", l.b},
                      {"products", products},
                      {"ratio", l.ratio},
                      {"within_threshold", l.within(rep.lemma_threshold)}});
  }
  json tails = json::array();
  for (const auto& t : rep.tail_ranks) tails.push_back({{"start", t.start}, {"rank", t.rank}});
  json doc = {{"runs", runs},
              {"quadruples", quads},
              {"lemma_ratios", lemmas},
              {"lemma_threshold", rep.lemma_threshold},
              {"tail_ranks", tails},
              {"independent_from", rep.independent_from},
              {"note", rep.note}};
  return doc.dump(pretty ? 2 : -1) + "\n";
}

}  // namespace dioph
