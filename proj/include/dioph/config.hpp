#ifndef DIOPH_CONFIG_HPP
#define DIOPH_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dioph/forms.hpp"
#include "dioph/realnum.hpp"

namespace dioph {

/// Run configuration, stored as flat `key = value` lines ('#' starts a
/// comment):
///   name = quartic-1
///   m = 1
///   n = 3
///   max_height = 1000000
///   precision_cap_bits = 4096
///   workers = 1
///   tail_start = 4                       (optional)
///   entry.<j>.<i> = rational 3/7 | algebraic coeffs=-1,-1,0,0,1 lo=6/5 hi=5/4
///                   | decimal 0.1415 [err=N]
/// with 1 <= j <= n (form) and 1 <= i <= m (variable).
struct RunConfig {
  std::string name;
  int m = 0;
  int n = 0;
  std::int64_t max_height = 0;  // 0 = not given
  int precision_cap_bits = 4096;
  int workers = 1;
  std::optional<int> tail_start;
  std::vector<CertifiedReal> entries;  // row-major, entries[(j-1)*m + (i-1)]

  [[nodiscard]] ThetaMatrix theta() const { return {m, n, entries}; }
};

/// Throws ConfigError carrying the offending line number.
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::string& path);
[[nodiscard]] std::string to_config_text(const RunConfig& cfg);

[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dioph

#endif  // DIOPH_CONFIG_HPP
