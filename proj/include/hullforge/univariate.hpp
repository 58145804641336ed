#pragma once

#include <string>
#include <vector>

#include "hullforge/laurent.hpp"

namespace hullforge {

// Dense univariate polynomial with complex coefficients, lowest degree first.
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<Complex> coefficients);

  /// Coefficients of P(z, .) for a symbol depending on z only (nonnegative exponents).
  static Poly1 from_symbol_in_z(const LaurentPoly2& p);

  const std::vector<Complex>& coefficients() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  Complex leading() const { return c_.back(); }

  Complex operator()(Complex x) const;
  Poly1 derivative() const;

  /// All complex roots with multiplicity (companion eigenvalues polished by Newton).
  std::vector<Complex> roots() const;

  LaurentPoly2 to_symbol_in_z() const;

 private:
  std::vector<Complex> c_;
};

// r(z) = numerator(z) / denominator(z).
struct Rational {
  Poly1 numerator;
  Poly1 denominator;

  Complex operator()(Complex z) const { return numerator(z) / denominator(z); }
  std::string to_string() const;
};

}  // namespace hullforge
