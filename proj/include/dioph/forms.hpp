#ifndef DIOPH_FORMS_HPP
#define DIOPH_FORMS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dioph/dyadic.hpp"
#include "dioph/realnum.hpp"

namespace dioph {

using IntVector = std::vector<std::int64_t>;

enum class CaseTag { m1n3, m3n1, m2n2, other };

[[nodiscard]] std::string to_string(CaseTag c);
[[nodiscard]] CaseTag case_from_string(std::string_view s);  // throws InvalidArgument
[[nodiscard]] CaseTag case_of(int m, int n);

/// The n x m matrix of coefficients theta_j^i: row j is the linear form
/// L_j(x) = sum_i theta_j^i x_i.
class ThetaMatrix {
 public:
  /// entries in row-major order: entries[j * m + i] = theta_{j+1}^{i+1}.
  ThetaMatrix(int m, int n, std::vector<CertifiedReal> entries);

  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int d() const { return m_ + n_; }
  [[nodiscard]] CaseTag case_tag() const { return case_of(m_, n_); }
  [[nodiscard]] const CertifiedReal& entry(int j, int i) const {
    return entries_[static_cast<std::size_t>(j * m_ + i)];
  }
  [[nodiscard]] const std::vector<CertifiedReal>& entries() const { return entries_; }

  /// Largest precision every entry supports.
  [[nodiscard]] int max_bits() const;
  /// True when some entry is a decimal constant.
  [[nodiscard]] bool precision_limited() const;
  /// True when every entry of row j is rational, so L_j is evaluated exactly.
  [[nodiscard]] bool row_exact(int j) const;

  /// 16 hex digits identifying (m, n, entries).
  [[nodiscard]] std::string config_hash() const;

 private:
  int m_;
  int n_;
  std::vector<CertifiedReal> entries_;
};

/// Sup-norm height max_i |x_i|.
[[nodiscard]] std::int64_t height(std::span<const std::int64_t> x);

/// Theta refined once at a fixed precision, with every entry on the common
/// grid 2^-(bits + 2). Evaluation is pure; a Workspace carries scratch space.
class FormEvaluator {
 public:
  FormEvaluator(const ThetaMatrix& theta, int bits);

  struct Workspace {
    mpz_class lo, hi, r_lo, r_hi, tmp, width, end, da, de;
  };

  /// Fixed-point interval [lo, hi] * 2^-scale.
  struct Fixed {
    mpz_class lo;
    mpz_class hi;
  };

  [[nodiscard]] int bits() const { return bits_; }
  [[nodiscard]] long scale() const { return scale_; }
  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] int n() const { return n_; }

  /// Enclosure of L_j(x) as a dyadic interval of width <= m * M(x) * 2^-bits.
  [[nodiscard]] DyadicInterval form(int j, std::span<const std::int64_t> x) const;

  /// zeta(x) on the fixed grid; exact when every row is exact and dyadic.
  void zeta_fixed(std::span<const std::int64_t> x, Fixed& out, Workspace& ws) const;
  [[nodiscard]] DyadicInterval zeta(std::span<const std::int64_t> x) const;

 private:
  void form_fixed(int j, std::span<const std::int64_t> x, Workspace& ws) const;

  int m_;
  int n_;
  int bits_;
  long scale_;
  std::vector<mpz_class> lo_;    // entry lower mantissas, row-major
  std::vector<mpz_class> hi_;    // entry upper mantissas
  std::vector<std::optional<std::vector<mpq_class>>> exact_rows_;
  mpz_class one_;                // 2^scale
  mpz_class half_;               // 2^(scale-1)
  mpz_class three_halves_;       // 3 * 2^(scale-1)
};

/// Intervals containing L_1(x), ..., L_n(x).
[[nodiscard]] std::vector<DyadicInterval> eval_forms(const ThetaMatrix& theta,
                                                     std::span<const std::int64_t> x, int bits);

struct PrecisionPolicy {
  int start_bits = 64;
  int cap_bits = 4096;
};

struct ErrorProfile {
  DyadicInterval zeta;
  std::vector<std::int64_t> offsets;
  int bits = 0;
  /// Exact value of zeta when every row is rational.
  std::optional<mpq_class> exact;
  /// Set when some ||L_j(x)|| is exactly zero (theta violates independence).
  std::optional<int> exact_hit_form;

  [[nodiscard]] bool exact_integer_hit() const { return exact_hit_form.has_value(); }
};

/// Exact zeta(x) when every entry of theta is rational, otherwise nullopt.
[[nodiscard]] std::optional<mpq_class> exact_zeta(const ThetaMatrix& theta,
                                                 std::span<const std::int64_t> x);

/// Profile from one evaluator; nullopt when some nearest integer is ambiguous
/// at the evaluator's precision.
[[nodiscard]] std::optional<ErrorProfile> profile_at(const ThetaMatrix& theta,
                                                     const FormEvaluator& ev,
                                                     std::span<const std::int64_t> x);

/// Certified zeta(x) = max_j ||L_j(x)|| with nearest-integer offsets,
/// refining from policy.start_bits by doubling until every offset is
/// determined. Throws PrecisionExhausted at the cap.
[[nodiscard]] ErrorProfile zeta(const ThetaMatrix& theta, std::span<const std::int64_t> x,
                                const PrecisionPolicy& policy = {});

}  // namespace dioph

#endif  // DIOPH_FORMS_HPP
