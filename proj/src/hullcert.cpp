#include "hullforge/hullcert.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "hullforge/error.hpp"
#include "hullforge/sampling.hpp"

namespace hullforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Exponent3> monomials_up_to(int degree) {
  std::vector<Exponent3> out;
  for (int total = 0; total <= degree; ++total) {
    for (int a = total; a >= 0; --a) {
      for (int b = total - a; b >= 0; --b) out.push_back({a, b, total - a - b});
    }
  }
  return out;
}

void fill_row(const SpacePoint& x, const std::vector<Exponent3>& basis, int degree, Complex* row,
              std::ptrdiff_t stride) {
  std::vector<Complex> zp(degree + 1), wp(degree + 1), ep(degree + 1);
  zp[0] = wp[0] = ep[0] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    zp[k] = zp[k - 1] * x.z;
    wp[k] = wp[k - 1] * x.w;
    ep[k] = ep[k - 1] * x.eta;
  }
  for (std::size_t c = 0; c < basis.size(); ++c) {
    row[c * stride] = zp[basis[c][0]] * wp[basis[c][1]] * ep[basis[c][2]];
  }
}

}  // namespace

Complex eval(const Polynomial3& poly, const SpacePoint& x) {
  Complex sum{};
  for (const auto& [e, c] : poly) {
    sum += c * std::pow(x.z, e[0]) * std::pow(x.w, e[1]) * std::pow(x.eta, e[2]);
  }
  return sum;
}

double certificate_ratio(const SeparationCertificate& cert, std::span<const SpacePoint> sample) {
  double sup = 0.0;
  for (const auto& x : sample) sup = std::max(sup, std::abs(eval(cert.coefficients, x)));
  return std::abs(eval(cert.coefficients, cert.point)) / sup;
}

std::vector<SpacePoint> validation_sample(const GraphSpec& target, int training_n, int factor) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(factor)) * training_n));
  std::vector<SpacePoint> out;
  out.reserve(static_cast<std::size_t>(side) * side);
  for (int a = 0; a < side; ++a) {
    const Complex z = unit_circle(kTwoPi * (a + 0.5) / side);
    for (int b = 0; b < side; ++b) out.push_back(lift(target, z, unit_circle(kTwoPi * (b + 0.5) / side)));
  }
  return out;
}

SeparationOutcome separate(const SpacePoint& q, const GraphSpec& target, int degree,
                           const SeparationOptions& options) {
  if (degree < 0 || degree > kMaxSeparationDegree) {
    throw DegreeGuardError("separation degree must lie in [0, " + std::to_string(kMaxSeparationDegree) + "]");
  }
  if (static_cast<long long>(options.training_n) * options.training_n < 10000) {
    throw std::invalid_argument("training sample must have at least 10^4 points");
  }

  const auto basis = monomials_up_to(degree);
  const auto training = graph_sample(target, options.training_n);
  const auto validation = validation_sample(target, options.training_n, options.validation_factor);
  const Eigen::Index rows = static_cast<Eigen::Index>(training.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(basis.size());

  Eigen::MatrixXcd A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) fill_row(training[i], basis, degree, &A(i, 0), A.outerStride());
  // Column scaling by the sup of each monomial on the sample conditions the program.
  Eigen::VectorXd scale = A.cwiseAbs().colwise().maxCoeff().transpose();
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (scale(c) == 0.0) scale(c) = 1.0;
  }
  A = A * scale.cwiseInverse().asDiagonal();
  Eigen::VectorXcd aq(cols);
  fill_row(q, basis, degree, aq.data(), 1);
  aq = aq.cwiseQuotient(scale.cast<Complex>());

  auto to_polynomial = [&](const Eigen::VectorXcd& c) {
    Polynomial3 poly;
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (c(k) != Complex{}) poly[basis[k]] = c(k) / scale(k);
    }
    return poly;
  };
  auto validated = [&](const Eigen::VectorXcd& c) {
    SeparationCertificate cert{q, degree, to_polynomial(c), 0.0, validation.size(), options.margin};
    cert.achieved_ratio = certificate_ratio(cert, validation);
    return cert;
  };

  SeparationOutcome out;
  Eigen::VectorXd weight = Eigen::VectorXd::Constant(rows, 1.0 / static_cast<double>(rows));
  Eigen::VectorXcd best_c;
  double best_upper = std::numeric_limits<double>::infinity();  // smallest max |P| seen
  double best_lower = 0.0;
  int stall = 0;

  for (int it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    // Weighted Gram matrix over rows that still carry weight.
    const double cutoff = 1e-14 * weight.maxCoeff();
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (weight(i) > cutoff) active.push_back(i);
    }
    Eigen::MatrixXcd B(static_cast<Eigen::Index>(active.size()), cols);
    for (std::size_t k = 0; k < active.size(); ++k) B.row(k) = std::sqrt(weight(active[k])) * A.row(active[k]);
    Eigen::MatrixXcd G = B.adjoint() * B;
    const double ridge = 1e-15 * std::max(G.diagonal().real().sum(), 1e-300) / static_cast<double>(cols);
    G.diagonal().array() += ridge;

    // min c^H G c subject to aq^T c = 1  =>  c = G^{-1} conj(aq) / (aq^T G^{-1} conj(aq)).
    const Eigen::VectorXcd y = G.ldlt().solve(aq.conjugate());
    const Complex denom = aq.transpose() * y;
    if (!std::isfinite(denom.real()) || std::abs(denom) == 0.0) break;
    const Eigen::VectorXcd c = y / denom;
    const double lower = 1.0 / std::sqrt(std::abs(denom));  // sqrt of the weighted least-squares value

    const Eigen::VectorXd residual = (A * c).cwiseAbs();
    const double upper = residual.maxCoeff();
    best_lower = std::max(best_lower, lower);
    if (upper < best_upper * (1.0 - options.tolerance)) {
      stall = 0;
    } else {
      ++stall;
    }
    if (upper < best_upper) {
      best_upper = upper;
      best_c = c;
    }
    out.trace.push_back({it, 1.0 / upper, 1.0 / best_lower});
    out.ratio_upper_bound = 1.0 / best_lower;

    if (options.stop_on_certificate && 1.0 / best_upper >= 1.0 + options.margin) {
      auto cert = validated(best_c);
      if (cert.achieved_ratio >= 1.0 + options.margin) {
        out.best_ratio = cert.achieved_ratio;
        out.certificate = std::move(cert);
        out.converged = true;
        return out;
      }
    }
    if (options.stop_on_bound && 1.0 / best_lower < 1.0 + options.margin) {
      out.converged = true;
      break;
    }
    if (best_upper <= best_lower * (1.0 + options.tolerance) || stall >= 25) {
      out.converged = true;
      break;
    }

    // Lawson update: shift weight toward the points where |P| is largest.
    weight = weight.cwiseProduct(residual);
    const double total = weight.sum();
    if (!(total > 0.0)) break;
    weight /= total;
  }

  if (best_c.size() == 0) return out;
  auto cert = validated(best_c);
  out.best_ratio = cert.achieved_ratio;
  if (cert.achieved_ratio >= 1.0 + options.margin) out.certificate = std::move(cert);
  return out;
}

MembershipCertificate certify_membership(const SpacePoint& q, const LaurentPoly2& p, const VarietyChart& chart) {
  MembershipCertificate m;
  m.point = q;
  const double outside = std::max({0.0, std::abs(q.z) - 1.0, std::abs(q.w) - 1.0});
  m.variety_residual = std::abs(q.w * q.w - chart.r(q.z)) + outside;
  m.height_residual = std::abs(q.eta - eval(p, q.z, q.w));
  for (const auto& loop : chart.boundary_loops) {
    for (const auto& b : loop) {
      const SpacePoint lifted{b.z, b.w, eval(p, b.z, b.w)};
      const Complex zt = b.z / std::abs(b.z), wt = b.w / std::abs(b.w);
      const SpacePoint on_t{zt, wt, eval(p, zt, wt).real()};
      m.boundary_in_T_residual = std::max(m.boundary_in_T_residual, distance(lifted, on_t));
    }
  }
  if (chart.boundary_loops.empty()) m.boundary_in_T_residual = std::numeric_limits<double>::infinity();
  m.certified = m.variety_residual <= kMembershipTolerance && m.height_residual <= kMembershipTolerance &&
                m.boundary_in_T_residual <= kMembershipTolerance;
  return m;
}

MembershipCertificate certify_membership(const SpacePoint& q, const LaurentPoly2& p, const Rational& r) {
  return certify_membership(q, p, trace_variety(r));
}

}  // namespace hullforge
