#ifndef DIOPH_BESTAPPROX_HPP
#define DIOPH_BESTAPPROX_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dioph/dyadic.hpp"
#include "dioph/forms.hpp"

namespace dioph {

/// One best approximation x_nu with its nearest-integer offsets y and the
/// certified error zeta_nu, computed at `bits` of precision.
struct BestApproxRecord {
  int nu = 0;
  IntVector x;
  IntVector y;
  std::int64_t M = 0;
  DyadicInterval zeta;
  int bits = 0;
};

struct SequenceFlags {
  /// Two distinct canonical points of one height had exactly equal zeta; the
  /// lexicographically smaller one was kept.
  bool degenerate_tie = false;
  /// Some ||L_j(x)|| of a record (or of the terminating point) is exactly 0.
  bool exact_integer_hit = false;
  /// Point with zeta(x) = 0 that ended the sequence; it is not a record.
  std::optional<IntVector> terminated_at;
  /// Some entry of theta is a decimal with finite declared precision.
  bool precision_limited = false;
};

struct ApproxSequence {
  std::string config_hash;
  int m = 0;
  int n = 0;
  std::int64_t T = 0;
  int precision_cap_bits = 0;
  std::vector<BestApproxRecord> records;
  SequenceFlags flags;
};

/// Best approximations of theta with height <= T, by a shell sweep over the
/// canonical points M(x) = t. Output is independent of `workers`.
/// Throws PrecisionExhausted (carrying the height) when a comparison cannot be
/// certified under the policy's cap.
[[nodiscard]] ApproxSequence compute_sequence(const ThetaMatrix& theta, std::int64_t T,
                                              const PrecisionPolicy& policy = {},
                                              int workers = 1);

/// Independent reference: a plain lexicographic scan of the canonical box at a
/// single fixed precision, keeping the minimum of every height.
[[nodiscard]] ApproxSequence oracle_sequence(const ThetaMatrix& theta, std::int64_t T,
                                             int bits = 8192);

struct VerifyReport {
  bool ok = true;
  std::string failure;
  std::optional<IntVector> counterexample;
  std::int64_t points_checked = 0;
};

/// Exhaustive re-check of a sequence: structural invariants, recomputed
/// offsets and errors, and emptiness (no canonical x of height below
/// M_{nu+1} is certified better than zeta_nu).
[[nodiscard]] VerifyReport verify_sequence(const ThetaMatrix& theta, const ApproxSequence& seq);

/// True when both sequences have the same records (index, x, y, M) and
/// intersecting zeta intervals. `why` receives the first difference.
[[nodiscard]] bool same_records(const ApproxSequence& a, const ApproxSequence& b,
                                std::string* why = nullptr);

/// Canonical sign: first nonzero coordinate positive.
[[nodiscard]] bool is_canonical(const IntVector& x);

// Persistence (sequence_io.cpp). JSON serialization is canonical: reading a
// document and writing it again reproduces the same bytes.
[[nodiscard]] std::string to_json(const ApproxSequence& seq);
[[nodiscard]] ApproxSequence sequence_from_json(const std::string& text);
[[nodiscard]] std::string to_csv(const ApproxSequence& seq);

}  // namespace dioph

#endif  // DIOPH_BESTAPPROX_HPP
