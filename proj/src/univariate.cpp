#include "hullforge/univariate.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "hullforge/error.hpp"

namespace hullforge {

Poly1::Poly1(std::vector<Complex> coefficients) : c_(std::move(coefficients)) {
  while (!c_.empty() && std::abs(c_.back()) < kCanonicalThreshold) c_.pop_back();
}

Poly1 Poly1::from_symbol_in_z(const LaurentPoly2& p) {
  std::vector<Complex> c;
  for (const auto& [e, coef] : p.terms()) {
    if (e.w != 0 || e.z < 0) {
      throw DomainError("symbol is not a polynomial in z alone: " + to_string(p));
    }
    if (static_cast<std::size_t>(e.z) >= c.size()) c.resize(e.z + 1);
    c[e.z] += coef;
  }
  return Poly1(std::move(c));
}

Complex Poly1::operator()(Complex x) const {
  Complex acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly1 Poly1::derivative() const {
  if (c_.size() <= 1) return Poly1{};
  std::vector<Complex> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Poly1(std::move(d));
}

std::vector<Complex> Poly1::roots() const {
  const int n = degree();
  if (n < 1) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c_[i] / c_[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error("companion eigenvalue iteration did not converge");

  const Poly1 dp = derivative();
  std::vector<Complex> out(n);
  for (int i = 0; i < n; ++i) {
    Complex x = solver.eigenvalues()[i];
    for (int it = 0; it < 4; ++it) {
      const Complex d = dp(x);
      if (std::abs(d) == 0.0) break;
      const Complex step = (*this)(x) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      // Newton near a multiple root can wander; accept only shrinking residuals.
      const Complex candidate = x - step;
      if (std::abs((*this)(candidate)) > std::abs((*this)(x))) break;
      x = candidate;
    }
    out[i] = x;
  }
  return out;
}

LaurentPoly2 Poly1::to_symbol_in_z() const {
  LaurentPoly2::TermMap t;
  for (std::size_t k = 0; k < c_.size(); ++k) t[Exponent{static_cast<int>(k), 0}] = c_[k];
  return LaurentPoly2::from_terms(std::move(t));
}

std::string Rational::to_string() const {
  return "(" + hullforge::to_string(numerator.to_symbol_in_z()) + ")/(" +
         hullforge::to_string(denominator.to_symbol_in_z()) + ")";
}

}  // namespace hullforge
