#ifndef DIOPH_CORPUS_HPP
#define DIOPH_CORPUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dioph/config.hpp"
#include "dioph/forms.hpp"
#include "dioph/polynomial.hpp"

namespace dioph {

using Range = std::pair<double, double>;

struct CorpusInstance {
  CorpusInstance(std::string name_, ThetaMatrix theta_)
      : name(std::move(name_)), theta(std::move(theta_)) {}

  std::string name;
  ThetaMatrix theta;
  /// Height bound for corpus runs and for the oracle comparison.
  std::int64_t T = 0;
  std::int64_t oracle_T = 0;
  std::optional<Range> expected_alpha;
  std::optional<Range> expected_beta;
  std::optional<int> tail_start;
  /// Why {1, entries} is linearly independent over Z (or why it is only
  /// independent at desk scale).
  std::string independence;
  bool liouville = false;
};

/// Powers of xi, the root of f in [lo, hi]:
///   m1n3 -> (xi, xi^2, xi^3) as a column; m3n1 -> the same as a row;
///   m2n2 -> [[xi, xi^2], [xi^3, xi^4]].
/// Needs deg f >= m*n + 1 (DegreeTooLow) and no rational root
/// (DegenerateInput). Each power is an algebraic number whose minimal
/// polynomial is the squarefree part of the characteristic polynomial of
/// multiplication by xi^k.
[[nodiscard]] CorpusInstance make_algebraic_vector(const std::string& name, CaseTag c,
                                                   const IntPoly& f, const mpq_class& lo,
                                                   const mpq_class& hi);

/// Minimal polynomial and isolating interval of xi^k.
[[nodiscard]] CertifiedReal algebraic_power(const IntPoly& f, const mpq_class& lo,
                                            const mpq_class& hi, int k);

/// Entries sum_k a_k 10^(-c_k) with pseudo-random digits a_k in 1..9 (one
/// digit stream per entry), written as decimals with `digits` places.
/// The schedule c_k must be nonempty and strictly increasing; terms with
/// c_k > digits are dropped.
[[nodiscard]] CorpusInstance make_liouville(const std::string& name, CaseTag c,
                                            const std::vector<int>& schedule, int digits,
                                            std::uint64_t seed);

/// splitmix64 output for state z.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t z);

/// The shipped instances.
[[nodiscard]] std::vector<CorpusInstance> builtin_corpus();
[[nodiscard]] const CorpusInstance& find_instance(const std::vector<CorpusInstance>& corpus,
                                                  const std::string& name);

[[nodiscard]] RunConfig to_run_config(const CorpusInstance& inst);
[[nodiscard]] std::string manifest_json(const std::vector<CorpusInstance>& corpus);

}  // namespace dioph

#endif  // DIOPH_CORPUS_HPP
