#ifndef DIOPH_STRUCTURE_HPP
#define DIOPH_STRUCTURE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dioph/bestapprox.hpp"

namespace dioph {

/// z_nu = (x_1, ..., x_m, y_1, ..., y_n) in Z^d.
struct ZVector {
  int nu = 0;
  IntVector coords;
};

[[nodiscard]] std::vector<ZVector> z_vectors(const ApproxSequence& seq);

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Rank over Q by fraction-free elimination.
[[nodiscard]] int exact_rank(const std::vector<IntVector>& vs);
/// Determinant of a square integer matrix (Bareiss).
[[nodiscard]] mpz_class exact_det(IntMatrix a);

/// Maximal block [a, b] of consecutive z-vectors spanning a plane.
struct CoplanarRun {
  int a = 0;  // record indices (1-based)
  int b = 0;
  IntVector basis1;  // z_a
  IntVector basis2;  // z_{a+1}
  /// Squared covolume of the two-dimensional lattice (plane) ∩ Z^d.
  mpz_class det2_squared;
  bool left_exit = false;   // z_{a-1} exists and lies outside the plane
  bool right_exit = false;  // z_{b+1} exists and lies outside the plane
};

/// Greedy decomposition into maximal runs; a new run starts at the last index
/// of the previous one. Throws DegenerateInput when two consecutive vectors
/// are dependent.
[[nodiscard]] std::vector<CoplanarRun> find_runs(const std::vector<ZVector>& zs);

struct PatternQuadruple {
  int nu = 0;  // first index of the run
  int k = 0;   // last index of the run
  std::vector<ZVector> rows;
  int rank = 0;
  [[nodiscard]] bool independent() const { return rank == 4; }
};

/// For each run [nu, k] with both exits:
///   m1n3, m2n2: (z_{nu-1}, z_nu, z_k, z_{k+1})
///   m3n1:       (z_{nu-1}, z_nu, z_{nu+1}, z_{k+1})
/// Only defined for d = 4.
[[nodiscard]] std::vector<PatternQuadruple> pattern_quadruples(const std::vector<ZVector>& zs,
                                                               const std::vector<CoplanarRun>& runs,
                                                               CaseTag c);

struct DetCheck {
  int nu = 0;
  int k = 0;
  mpz_class det;
  Dyadic bound;  // upper bound of 24 * (case product), from zeta upper endpoints
  bool independent = false;
  bool ok = false;  // independent and 1 <= |det| <= bound
};

/// Exact determinant with columns in the case's order, against
///   m1n3: 24 zeta_{nu-1} zeta_nu zeta_k M_{k+1}
///   m3n1: 24 zeta_{nu-1} M_nu M_{nu+1} M_{k+1}
///   m2n2: 24 zeta_{nu-1} zeta_nu M_k M_{k+1}
[[nodiscard]] DetCheck det_bound_check(const PatternQuadruple& q, const ApproxSequence& seq, CaseTag c);

struct LemmaRatio {
  int a = 0;
  int b = 0;
  std::vector<DyadicInterval> products;  // zeta_l * M_{l+1}, a <= l < b
  double ratio = 1;                      // max / min, from outward bounds
  bool within(double threshold) const { return ratio <= threshold; }
};

inline constexpr double kDefaultLemmaThreshold = 64.0;

[[nodiscard]] LemmaRatio lemma_ratio(const CoplanarRun& run, const ApproxSequence& seq);

struct TailRank {
  int start = 0;
  int rank = 0;
};

/// Rank of span{z_nu : nu >= start} for each cutoff.
[[nodiscard]] std::vector<TailRank> tail_rank(const std::vector<ZVector>& zs,
                                              const std::vector<int>& cutoffs);
/// Powers of two 1, 2, 4, ... up to half the number of vectors.
[[nodiscard]] std::vector<int> default_cutoffs(std::size_t count);

struct StructureReport {
  std::vector<CoplanarRun> runs;
  std::vector<PatternQuadruple> quadruples;
  std::vector<DetCheck> det_checks;
  std::vector<LemmaRatio> lemma_ratios;
  std::vector<TailRank> tail_ranks;
  double lemma_threshold = kDefaultLemmaThreshold;
  /// First index whose pair (z_nu, z_{nu+1}) is independent from there on.
  int independent_from = 0;
  std::string note;
};

/// Full analysis; the run decomposition starts after the last dependent pair.
[[nodiscard]] StructureReport analyze(const ApproxSequence& seq, CaseTag c,
                                      double lemma_threshold = kDefaultLemmaThreshold,
                                      std::optional<std::vector<int>> cutoffs = std::nullopt);

[[nodiscard]] std::string to_json(const StructureReport& report, bool pretty = true);

}  // namespace dioph

#endif  // DIOPH_STRUCTURE_HPP
