#pragma once

#include <vector>

#include "hullforge/laurent.hpp"
#include "hullforge/univariate.hpp"

namespace hullforge {

struct ChartSample {
  BidiscPoint pt;
  int sheet = 0;  // 0: principal square root of r(z), 1: its negative
};

/// Traced data of the double cover {w^2 = r(z)} over the closed unit z-disc.
struct VarietyChart {
  Rational r;
  int resolution = 0;
  std::vector<Complex> branch_points;
  std::vector<std::vector<BidiscPoint>> boundary_loops;
  std::vector<ChartSample> interior_mesh;
  int euler_char = 0;
  int genus = 0;
  int boundary_count = 0;
  int component_count = 0;
  bool boundary_on_torus = false;
};

/// Traces the cover: branch points are the zeros of r in the open disc, the
/// boundary is followed by continuing one square root of r around |z| = 1, and
/// the topology comes from Riemann-Hurwitz (chi = 2 - #branch points) together
/// with the traced boundary count. `resolution` sets the angular mesh and the
/// largest continuation step (2*pi / resolution).
///
/// Throws VarietyError if r has a pole in the closed disc, a zero on or within
/// 1e-8 of the unit circle, or a repeated zero inside the disc.
VarietyChart trace_variety(const Rational& r, int resolution = 64);

/// Winding number of r(z) about 0 along |z| = radius.
int winding_number(const Rational& r, double radius, int steps = 4096);

struct ContainmentResult {
  bool contained = false;               // max |r| <= 1 + 1e-9 on the sampled closed disc
  double max_modulus = 0.0;
  bool unimodular_on_boundary = false;  // |r| == 1 on the sampled unit circle (to 1e-9)
  double boundary_deviation = 0.0;      // max ||r| - 1| on the unit circle
};

ContainmentResult containment_check(const Rational& r, int n);

/// max |p| over every interior and boundary sample of the chart.
double residual_on_variety(const LaurentPoly2& p, const VarietyChart& chart);

}  // namespace hullforge
