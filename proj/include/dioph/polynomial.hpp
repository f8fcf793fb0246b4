#ifndef DIOPH_POLYNOMIAL_HPP
#define DIOPH_POLYNOMIAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "dioph/dyadic.hpp"

namespace dioph {

// Coefficients in ascending powers: {c0, c1, ..., cd}.
using IntPoly = std::vector<mpz_class>;
using RatPoly = std::vector<mpq_class>;

[[nodiscard]] int degree(const IntPoly& f);
[[nodiscard]] IntPoly make_poly(std::initializer_list<long> coeffs);
[[nodiscard]] std::string to_string(const IntPoly& f);

[[nodiscard]] int sign_at(const IntPoly& f, const mpq_class& r);
[[nodiscard]] int sign_at(const IntPoly& f, const Dyadic& r);

[[nodiscard]] IntPoly derivative(const IntPoly& f);
/// Integer multiple of f with coprime coefficients and positive leading term.
[[nodiscard]] IntPoly primitive_part(const RatPoly& f);
[[nodiscard]] IntPoly primitive_part(const IntPoly& f);
/// Greatest common divisor over Q, returned primitive.
[[nodiscard]] IntPoly gcd(const IntPoly& a, const IntPoly& b);
[[nodiscard]] IntPoly squarefree_part(const IntPoly& f);

/// Number of distinct real roots of f in the closed interval [a, b] (Sturm).
[[nodiscard]] int count_real_roots(const IntPoly& f, const mpq_class& a, const mpq_class& b);

/// Characteristic polynomial of multiplication by xi^k on Q(xi), f(xi) = 0.
/// Equals a power of the minimal polynomial of xi^k when f is irreducible.
[[nodiscard]] IntPoly charpoly_of_power(const IntPoly& f, int k);

/// Screening used for corpus polynomials. Not a factorization routine.
struct IrreducibilityScreen {
  bool has_rational_root = false;
  /// A prime p not dividing the leading coefficient with f irreducible mod p;
  /// its presence certifies irreducibility over Q.
  std::optional<unsigned> certifying_prime;
};
[[nodiscard]] IrreducibilityScreen screen_irreducible(const IntPoly& f);

}  // namespace dioph

#endif  // DIOPH_POLYNOMIAL_HPP
