#pragma once

#include <complex>
#include <compare>
#include <map>
#include <string>
#include <string_view>

namespace hullforge {

using Complex = std::complex<double>;

/// Coefficients with modulus below this are dropped on construction.
inline constexpr double kCanonicalThreshold = 1e-12;
/// Slack allowed when testing membership in the closed bidisc.
inline constexpr double kDomainEps = 1e-9;
/// Largest exponent magnitude accepted anywhere in a polynomial.
inline constexpr int kMaxExponent = 1'000'000;

enum class Var { z, w };

struct Exponent {
  int z = 0;
  int w = 0;
  auto operator<=>(const Exponent&) const = default;
};

struct BidiscPoint {
  Complex z;
  Complex w;
};

bool in_closed_bidisc(const BidiscPoint& pt, double eps = kDomainEps);

/// Single term c * z^j * w^k; used as the unit in factorizations.
struct Monomial {
  Complex coefficient{1.0, 0.0};
  Exponent exponent;
};

/// Finitely supported complex coefficients on Z^2, i.e. a Laurent polynomial
/// in (z, w). Values are immutable; every arithmetic operation returns a new
/// canonical polynomial with tiny coefficients removed.
class LaurentPoly2 {
 public:
  using TermMap = std::map<Exponent, Complex>;

  LaurentPoly2() = default;
  LaurentPoly2(Complex constant);  // NOLINT(google-explicit-constructor)
  LaurentPoly2(double constant) : LaurentPoly2(Complex(constant, 0.0)) {}  // NOLINT
  LaurentPoly2(const Monomial& m);  // NOLINT

  static LaurentPoly2 from_terms(TermMap terms);
  static LaurentPoly2 monomial(Complex c, int j, int k);
  static LaurentPoly2 z() { return monomial(1.0, 1, 0); }
  static LaurentPoly2 w() { return monomial(1.0, 0, 1); }

  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  Complex coefficient(int j, int k) const;

  // Exponent bounding box; all zero for the zero polynomial.
  int min_z() const;
  int max_z() const;
  int min_w() const;
  int max_w() const;
  bool has_negative_exponents() const;

  // Multiplies by the monomial that moves the smallest exponents to 0.
  LaurentPoly2 shifted_to_polynomial() const;

  LaurentPoly2 pow(int n) const;

  friend LaurentPoly2 operator+(const LaurentPoly2& a, const LaurentPoly2& b);
  friend LaurentPoly2 operator-(const LaurentPoly2& a, const LaurentPoly2& b);
  friend LaurentPoly2 operator*(const LaurentPoly2& a, const LaurentPoly2& b);
  friend LaurentPoly2 operator-(const LaurentPoly2& a);
  friend bool operator==(const LaurentPoly2& a, const LaurentPoly2& b) = default;

 private:
  TermMap terms_;
};

/// Parses the expression grammar (variables z and w, complex literals such as
/// 2, 1.5i, i, (3-2i), operators + - * ^ and parentheses). Exponents are
/// integers and may be negative when the base is a monomial.
LaurentPoly2 parse(std::string_view expr);

/// Canonical text: terms sorted by (j, k), coefficients printed as (re+imi)
/// with 17 significant digits. parse(to_string(P)) == P.
std::string to_string(const LaurentPoly2& p);
std::string to_string(const Monomial& m);

Complex eval(const LaurentPoly2& p, Complex z, Complex w);
inline Complex eval(const LaurentPoly2& p, const BidiscPoint& pt) { return eval(p, pt.z, pt.w); }

LaurentPoly2 derive(const LaurentPoly2& p, Var var);

/// Conjugates coefficients and negates exponents, so that on the unit torus
/// eval(reflect(P)) == conj(eval(P)).
LaurentPoly2 reflect(const LaurentPoly2& p);

/// Jacobian determinant dP/dz * dQ/dw - dP/dw * dQ/dz.
LaurentPoly2 det2(const LaurentPoly2& p, const LaurentPoly2& q);

}  // namespace hullforge
