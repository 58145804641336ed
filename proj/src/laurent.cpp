#include "hullforge/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hullforge/error.hpp"

namespace hullforge {
namespace {

void require_finite(Complex c, const char* what) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw DomainError(std::string("non-finite ") + what);
  }
}

int checked_exponent(long long e) {
  if (e > kMaxExponent || e < -kMaxExponent) {
    throw DomainError("exponent " + std::to_string(e) + " exceeds +/-" + std::to_string(kMaxExponent));
  }
  return static_cast<int>(e);
}

void canonicalize(LaurentPoly2::TermMap& terms) {
  std::erase_if(terms, [](const auto& kv) { return std::abs(kv.second) < kCanonicalThreshold; });
}

// Integer power by squaring; negative powers invert first.
Complex ipow(Complex x, int n) {
  if (n < 0) {
    x = 1.0 / x;
    n = -n;
  }
  Complex result(1.0, 0.0);
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_coefficient(Complex c) {
  std::string s = "(" + format_double(c.real());
  s += std::signbit(c.imag()) && c.imag() != 0.0 ? "-" : "+";
  s += format_double(std::abs(c.imag())) + "i)";
  return s;
}

}  // namespace

bool in_closed_bidisc(const BidiscPoint& pt, double eps) {
  return std::abs(pt.z) <= 1.0 + eps && std::abs(pt.w) <= 1.0 + eps;
}

LaurentPoly2::LaurentPoly2(Complex constant) {
  require_finite(constant, "coefficient");
  if (std::abs(constant) >= kCanonicalThreshold) terms_.emplace(Exponent{0, 0}, constant);
}

LaurentPoly2::LaurentPoly2(const Monomial& m)
    : LaurentPoly2(monomial(m.coefficient, m.exponent.z, m.exponent.w)) {}

LaurentPoly2 LaurentPoly2::from_terms(TermMap terms) {
  for (const auto& [e, c] : terms) {
    require_finite(c, "coefficient");
    checked_exponent(e.z);
    checked_exponent(e.w);
  }
  canonicalize(terms);
  LaurentPoly2 p;
  p.terms_ = std::move(terms);
  return p;
}

LaurentPoly2 LaurentPoly2::monomial(Complex c, int j, int k) {
  return from_terms({{Exponent{j, k}, c}});
}

Complex LaurentPoly2::coefficient(int j, int k) const {
  auto it = terms_.find(Exponent{j, k});
  return it == terms_.end() ? Complex{} : it->second;
}

int LaurentPoly2::min_z() const {
  int m = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_) m = std::min(m, e.z);
  return terms_.empty() ? 0 : m;
}

int LaurentPoly2::max_z() const {
  int m = std::numeric_limits<int>::min();
  for (const auto& [e, c] : terms_) m = std::max(m, e.z);
  return terms_.empty() ? 0 : m;
}

int LaurentPoly2::min_w() const {
  int m = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_) m = std::min(m, e.w);
  return terms_.empty() ? 0 : m;
}

int LaurentPoly2::max_w() const {
  int m = std::numeric_limits<int>::min();
  for (const auto& [e, c] : terms_) m = std::max(m, e.w);
  return terms_.empty() ? 0 : m;
}

bool LaurentPoly2::has_negative_exponents() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& kv) { return kv.first.z < 0 || kv.first.w < 0; });
}

LaurentPoly2 LaurentPoly2::shifted_to_polynomial() const {
  if (is_zero()) return *this;
  return *this * monomial(1.0, -min_z(), -min_w());
}

LaurentPoly2 LaurentPoly2::pow(int n) const {
  if (n < 0) {
    if (!is_monomial()) {
      throw DomainError("negative power of a non-monomial is not a Laurent polynomial");
    }
    const auto& [e, c] = *terms_.begin();
    return monomial(ipow(c, n), checked_exponent(1LL * e.z * n), checked_exponent(1LL * e.w * n));
  }
  if (is_monomial()) {
    const auto& [e, c] = *terms_.begin();
    return monomial(ipow(c, n), checked_exponent(1LL * e.z * n), checked_exponent(1LL * e.w * n));
  }
  if (n > 4096) throw DomainError("power " + std::to_string(n) + " of a non-monomial is too large");
  LaurentPoly2 result(1.0);
  LaurentPoly2 base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

LaurentPoly2 operator+(const LaurentPoly2& a, const LaurentPoly2& b) {
  LaurentPoly2::TermMap t = a.terms_;
  for (const auto& [e, c] : b.terms_) t[e] += c;
  canonicalize(t);
  LaurentPoly2 r;
  r.terms_ = std::move(t);
  return r;
}

LaurentPoly2 operator-(const LaurentPoly2& a) {
  LaurentPoly2 r = a;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

LaurentPoly2 operator-(const LaurentPoly2& a, const LaurentPoly2& b) { return a + (-b); }

LaurentPoly2 operator*(const LaurentPoly2& a, const LaurentPoly2& b) {
  LaurentPoly2::TermMap t;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e{checked_exponent(1LL * ea.z + eb.z), checked_exponent(1LL * ea.w + eb.w)};
      t[e] += ca * cb;
    }
  }
  canonicalize(t);
  LaurentPoly2 r;
  r.terms_ = std::move(t);
  return r;
}

std::string to_string(const LaurentPoly2& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += format_coefficient(c);
    if (e.z != 0) out += "*z^" + std::to_string(e.z);
    if (e.w != 0) out += "*w^" + std::to_string(e.w);
  }
  return out;
}

std::string to_string(const Monomial& m) { return to_string(LaurentPoly2(m)); }

Complex eval(const LaurentPoly2& p, Complex z, Complex w) {
  require_finite(z, "evaluation input z");
  require_finite(w, "evaluation input w");
  Complex sum{};
  for (const auto& [e, c] : p.terms()) {
    if ((e.z < 0 && z == Complex{}) || (e.w < 0 && w == Complex{})) {
      throw PoleError("negative exponent evaluated on a coordinate axis");
    }
    sum += c * ipow(z, e.z) * ipow(w, e.w);
  }
  return sum;
}

LaurentPoly2 derive(const LaurentPoly2& p, Var var) {
  LaurentPoly2::TermMap t;
  for (const auto& [e, c] : p.terms()) {
    const int k = var == Var::z ? e.z : e.w;
    if (k == 0) continue;
    Exponent shifted = e;
    (var == Var::z ? shifted.z : shifted.w) -= 1;
    t[shifted] += static_cast<double>(k) * c;
  }
  return LaurentPoly2::from_terms(std::move(t));
}

LaurentPoly2 reflect(const LaurentPoly2& p) {
  LaurentPoly2::TermMap t;
  for (const auto& [e, c] : p.terms()) t[Exponent{-e.z, -e.w}] = std::conj(c);
  return LaurentPoly2::from_terms(std::move(t));
}

LaurentPoly2 det2(const LaurentPoly2& p, const LaurentPoly2& q) {
  return derive(p, Var::z) * derive(q, Var::w) - derive(p, Var::w) * derive(q, Var::z);
}

}  // namespace hullforge
