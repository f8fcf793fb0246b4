#ifndef DIOPH_EXPONENTS_HPP
#define DIOPH_EXPONENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dioph/bestapprox.hpp"

namespace dioph {

/// Closed interval of doubles, rounded outward.
struct RealInterval {
  double lo = 0;
  double hi = 0;
  [[nodiscard]] double mid() const { return lo / 2 + hi / 2; }
  [[nodiscard]] double width() const { return hi - lo; }
};

/// Local exponents of record nu:
///   a_nu = -log zeta_nu / log M_{nu+1}   (uniform exponent side)
///   b_nu = -log zeta_nu / log M_nu       (individual exponent side)
/// Because psi(t) = zeta_nu on [M_nu, M_{nu+1}), the liminf of a_nu is alpha
/// and the limsup of b_nu is beta.
struct LocalRatio {
  int nu = 0;
  std::int64_t M = 0;
  std::int64_t M_next = 0;
  RealInterval log_M;
  RealInterval neg_log_zeta;
  RealInterval a;
  RealInterval b;
  /// log2 of the widths of a and b before rounding to double; they track the
  /// certification width of zeta plus the (much smaller) rounding of the
  /// logarithms, which are evaluated 64 bits beyond the record's precision.
  double a_width_log2 = 0;
  double b_width_log2 = 0;
};

/// Ratios for 1 <= nu <= last - 1, skipping records with M_nu = 1.
[[nodiscard]] std::vector<LocalRatio> local_ratios(const ApproxSequence& seq);

struct ExponentEstimate {
  double alpha_hat = 0;
  double beta_hat = 0;
  int tail_start = 0;
  int alpha_nu = 0;  // record attaining the tail minimum of a
  int beta_nu = 0;   // record attaining the tail maximum of b
  /// Largest width of a (resp. b) over the tail.
  double alpha_error = 0;
  double beta_error = 0;
  std::vector<LocalRatio> ratios;  // the tail ratios
};

/// First nu with M_nu >= T^(1/4).
[[nodiscard]] int default_tail_start(const ApproxSequence& seq);

/// alpha_hat = min of a_nu and beta_hat = max of b_nu over nu >= tail_start.
/// Throws InsufficientData with fewer than 3 tail ratios.
[[nodiscard]] ExponentEstimate estimate_exponents(const ApproxSequence& seq,
                                                  std::optional<int> tail_start = std::nullopt);

[[nodiscard]] std::string to_json(const ExponentEstimate& est, bool pretty = true);
/// nu, log M_nu, -log zeta_nu, a_nu, b_nu for log-log plots.
[[nodiscard]] std::string ratios_csv(const std::vector<LocalRatio>& ratios);

}  // namespace dioph

#endif  // DIOPH_EXPONENTS_HPP
