#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hullforge/geometry.hpp"
#include "hullforge/univariate.hpp"
#include "hullforge/variety.hpp"

namespace hullforge {

/// Exponents (a, b, c) of the monomial z^a w^b eta^c.
using Exponent3 = std::array<int, 3>;
using Polynomial3 = std::map<Exponent3, Complex>;

inline constexpr int kMaxSeparationDegree = 12;

struct SeparationOptions {
  int training_n = 100;         // training grid is training_n^2 torus points
  int validation_factor = 4;    // validation sample has this many times more points
  double margin = 0.05;
  int max_iterations = 400;
  double tolerance = 1e-9;      // relative duality gap / stagnation threshold
  bool stop_on_certificate = true;
  bool stop_on_bound = true;    // give up once the dual bound rules out the margin
};

/// Polynomial P with |P(point)| > (1 + margin) * max |P| on the validation sample.
struct SeparationCertificate {
  SpacePoint point;
  int degree = 0;
  Polynomial3 coefficients;
  double achieved_ratio = 0.0;
  std::size_t sample_count = 0;
  double margin = 0.0;
};

struct IterationRecord {
  int iteration = 0;
  double training_ratio = 0.0;     // |P(q)| / max over the training sample
  double ratio_upper_bound = 0.0;  // dual bound on the best training ratio
};

struct SeparationOutcome {
  std::optional<SeparationCertificate> certificate;
  double best_ratio = 0.0;         // validated ratio of the best iterate
  double ratio_upper_bound = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<IterationRecord> trace;
};

Complex eval(const Polynomial3& poly, const SpacePoint& x);

/// |P(point)| / max |P| over `sample`, recomputed from the stored coefficients.
double certificate_ratio(const SeparationCertificate& cert, std::span<const SpacePoint> sample);

/// Torus grid of side 2 * training_n (4x the training size) shifted by half a
/// cell, so it shares no points with the training grid.
std::vector<SpacePoint> validation_sample(const GraphSpec& target, int training_n, int factor = 4);

/// Searches for a polynomial of total degree <= `degree` in (z, w, eta) that
/// separates q from the target graph: minimize max_i |P(x_i)| over the
/// training sample subject to P(q) = 1 (Lawson's reweighted least squares),
/// then validate the ratio on a denser independent sample. A certificate is
/// returned only when the validated ratio is at least 1 + margin; otherwise
/// the outcome carries the best validated ratio, which is evidence of hull
/// membership but not a proof.
SeparationOutcome separate(const SpacePoint& q, const GraphSpec& target, int degree,
                           const SeparationOptions& options = {});

/// Residuals witnessing that q lies on the annulus G_p({w^2 = r(z)}) whose
/// boundary sits in the torus graph.
struct MembershipCertificate {
  SpacePoint point;
  double variety_residual = 0.0;        // |w^2 - r(z)| plus any excursion outside the bidisc
  double height_residual = 0.0;         // |eta - p(z, w)|
  double boundary_in_T_residual = 0.0;  // distance of the lifted boundary loops to T
  bool certified = false;
};

inline constexpr double kMembershipTolerance = 1e-8;

MembershipCertificate certify_membership(const SpacePoint& q, const LaurentPoly2& p, const VarietyChart& chart);
MembershipCertificate certify_membership(const SpacePoint& q, const LaurentPoly2& p, const Rational& r);

}  // namespace hullforge
