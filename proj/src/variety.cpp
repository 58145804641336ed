#include "hullforge/variety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hullforge/error.hpp"
#include "hullforge/sampling.hpp"

namespace hullforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundaryBand = 1e-8;
constexpr double kLoopClosure = 1e-6;
constexpr double kMinStep = 1e-4;

// Follows one square root of r along z = e^{i theta}, theta in [0, 2*pi*turns],
// choosing at each step the root nearest the previous value.
std::vector<BidiscPoint> continue_root(const Rational& r, Complex w0, int turns, int resolution,
                                       const std::vector<Complex>& critical) {
  std::vector<BidiscPoint> path;
  double theta = 0.0;
  Complex w = w0;
  path.push_back({Complex(1.0, 0.0), w});
  const double max_step = kTwoPi / resolution;
  const double end = kTwoPi * turns;
  while (theta < end) {
    const Complex z = unit_circle(theta);
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : critical) d = std::min(d, std::abs(z - c));
    const double step = std::clamp(0.25 * d, kMinStep, max_step);
    theta = std::min(theta + step, end);
    const Complex zn = unit_circle(theta);
    const Complex root = std::sqrt(r(zn));
    w = std::abs(root - w) <= std::abs(-root - w) ? root : -root;
    path.push_back({zn, w});
  }
  return path;
}

}  // namespace

int winding_number(const Rational& r, double radius, int steps) {
  double total = 0.0;
  Complex prev = r(Complex(radius, 0.0));
  for (int i = 1; i <= steps; ++i) {
    const Complex cur = r(std::polar(radius, kTwoPi * i / steps));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

VarietyChart trace_variety(const Rational& r, int resolution) {
  if (resolution < 8) throw std::invalid_argument("resolution must be at least 8");
  if (r.numerator.is_zero()) throw VarietyError("r vanishes identically");
  if (r.denominator.is_zero()) throw VarietyError("r has a zero denominator");

  VarietyChart chart;
  chart.r = r;
  chart.resolution = resolution;

  const auto poles = r.denominator.roots();
  for (const auto& pole : poles) {
    if (std::abs(pole) <= 1.0 + kBoundaryBand) throw VarietyError("r has a pole in the closed unit disc");
  }
  const auto zeros = r.numerator.roots();
  for (const auto& zero : zeros) {
    const double m = std::abs(zero);
    if (std::abs(m - 1.0) <= kBoundaryBand) throw VarietyError("branch point on the unit circle");
    if (m < 1.0) chart.branch_points.push_back(zero);
  }
  for (std::size_t a = 0; a < chart.branch_points.size(); ++a) {
    for (std::size_t b = a + 1; b < chart.branch_points.size(); ++b) {
      if (std::abs(chart.branch_points[a] - chart.branch_points[b]) < 1e-6) {
        throw VarietyError("repeated branch point inside the disc");
      }
    }
  }
  std::sort(chart.branch_points.begin(), chart.branch_points.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  // Boundary: one turn returns to the starting root (two loops) or to its
  // negative (one loop covering two turns).
  std::vector<Complex> critical = zeros;
  critical.insert(critical.end(), poles.begin(), poles.end());
  const Complex w0 = std::sqrt(r(Complex(1.0, 0.0)));
  auto loop = continue_root(r, w0, 1, resolution, critical);
  const Complex w_end = loop.back().w;
  if (std::abs(w_end - w0) <= kLoopClosure) {
    loop.pop_back();
    std::vector<BidiscPoint> other;
    other.reserve(loop.size());
    for (const auto& pt : loop) other.push_back({pt.z, -pt.w});
    chart.boundary_loops.push_back(std::move(loop));
    chart.boundary_loops.push_back(std::move(other));
  } else if (std::abs(w_end + w0) <= kLoopClosure) {
    loop = continue_root(r, w0, 2, resolution, critical);
    if (std::abs(loop.back().w - w0) > kLoopClosure) throw VarietyError("boundary continuation did not close");
    loop.pop_back();
    chart.boundary_loops.push_back(std::move(loop));
  } else {
    throw VarietyError("boundary continuation lost the sheet");
  }

  chart.boundary_on_torus = true;
  for (const auto& l : chart.boundary_loops) {
    for (const auto& pt : l) {
      if (std::abs(std::abs(pt.w) - 1.0) > kBoundaryBand) chart.boundary_on_torus = false;
    }
  }

  // Polar mesh over the closed disc, both sheets, restricted to the bidisc.
  const int radial = std::max(4, resolution / 4);
  auto add_fiber = [&](Complex z) {
    const Complex w = std::sqrt(r(z));
    for (int sheet = 0; sheet < 2; ++sheet) {
      const Complex ws = sheet == 0 ? w : -w;
      if (std::abs(ws) <= 1.0 + kDomainEps) chart.interior_mesh.push_back({{z, ws}, sheet});
    }
  };
  add_fiber(Complex(0.0, 0.0));
  for (int a = 1; a <= radial; ++a) {
    const double rho = static_cast<double>(a) / radial;
    for (int b = 0; b < resolution; ++b) add_fiber(std::polar(rho, kTwoPi * b / resolution));
  }
  for (const auto& bp : chart.branch_points) chart.interior_mesh.push_back({{bp, Complex{}}, 0});

  const int branch_count = static_cast<int>(chart.branch_points.size());
  chart.boundary_count = static_cast<int>(chart.boundary_loops.size());
  if (chart.boundary_count != (branch_count % 2 == 1 ? 1 : 2)) {
    throw VarietyError("traced boundary count contradicts the branch point parity");
  }
  chart.component_count = branch_count == 0 ? 2 : 1;
  chart.euler_char = 2 - branch_count;
  chart.genus = (2 * chart.component_count - chart.boundary_count - chart.euler_char) / 2;
  return chart;
}

ContainmentResult containment_check(const Rational& r, int n) {
  if (n < 1) throw std::invalid_argument("containment_check needs at least one sample");
  ContainmentResult res;
  for (int i = 1; i <= n; ++i) res.max_modulus = std::max(res.max_modulus, std::abs(r(halton_disc_point(i))));
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(r(unit_circle(kTwoPi * i / n)));
    res.max_modulus = std::max(res.max_modulus, m);
    res.boundary_deviation = std::max(res.boundary_deviation, std::abs(m - 1.0));
  }
  res.contained = res.max_modulus <= 1.0 + kDomainEps;
  res.unimodular_on_boundary = res.boundary_deviation <= kDomainEps;
  return res;
}

double residual_on_variety(const LaurentPoly2& p, const VarietyChart& chart) {
  double worst = 0.0;
  for (const auto& s : chart.interior_mesh) worst = std::max(worst, std::abs(eval(p, s.pt)));
  for (const auto& l : chart.boundary_loops) {
    for (const auto& pt : l) worst = std::max(worst, std::abs(eval(p, pt)));
  }
  return worst;
}

}  // namespace hullforge
