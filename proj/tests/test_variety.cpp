#include <gtest/gtest.h>

#include <random>

#include "hullforge/error.hpp"
#include "hullforge/jimbo.hpp"
#include "hullforge/variety.hpp"
#include "oracles.hpp"

using namespace hullforge;

namespace {

const char* kP = "1 - 4*z^2 + 4*w^2 - z^2*w^2";

Rational annulus_r() { return {Poly1({-1.0, 0.0, 4.0}), Poly1({4.0, 0.0, -1.0})}; }
Rational rational(std::vector<Complex> num, std::vector<Complex> den = {1.0}) {
  return {Poly1(std::move(num)), Poly1(std::move(den))};
}

// Vertical distance from a torus point to the curve {w^2 = r(z), |z| = 1}; an
// upper bound for the true distance.
double distance_to_boundary_curve(Complex z, Complex w) {
  const Complex root = std::sqrt(oracle::r(z));
  return std::min(std::abs(w - root), std::abs(w + root));
}

}  // namespace

TEST(Trace, AnnulusTopology) {
  const auto chart = trace_variety(annulus_r());
  ASSERT_EQ(chart.branch_points.size(), 2u);
  EXPECT_LE(std::abs(chart.branch_points[0] - Complex(-0.5)), 1e-8);
  EXPECT_LE(std::abs(chart.branch_points[1] - Complex(0.5)), 1e-8);
  EXPECT_EQ(chart.boundary_count, 2);
  EXPECT_EQ(chart.genus, 0);
  EXPECT_EQ(chart.euler_char, 0);
  EXPECT_EQ(chart.component_count, 1);
  EXPECT_TRUE(chart.boundary_on_torus);
  // Riemann-Hurwitz by hand: two sheets over a disc (chi = 1 each) minus two simple branch points.
  EXPECT_EQ(chart.euler_char, 2 * 1 - 2);
  EXPECT_EQ(chart.euler_char, 2 - 2 * chart.genus - chart.boundary_count);
}

TEST(Trace, SampleInvariants) {
  const auto chart = trace_variety(annulus_r());
  ASSERT_FALSE(chart.interior_mesh.empty());
  for (const auto& s : chart.interior_mesh) {
    EXPECT_LE(std::abs(s.pt.w * s.pt.w - oracle::r(s.pt.z)), 1e-10);
    EXPECT_LE(std::abs(s.pt.z), 1.0);
    EXPECT_LE(std::abs(s.pt.w), 1.0 + 1e-9);
  }
  for (const auto& loop : chart.boundary_loops) {
    ASSERT_GE(loop.size(), 64u);
    for (const auto& b : loop) {
      EXPECT_LE(std::abs(std::abs(b.z) - 1.0), 1e-8);
      EXPECT_LE(std::abs(std::abs(b.w) - 1.0), 1e-8);
    }
  }
}

TEST(Trace, StableUnderRefinement) {
  for (auto r : {annulus_r(), rational({0.0, 1.0}), rational({0.25})}) {
    const auto coarse = trace_variety(r, 64), fine = trace_variety(r, 256);
    EXPECT_EQ(coarse.euler_char, fine.euler_char);
    EXPECT_EQ(coarse.genus, fine.genus);
    EXPECT_EQ(coarse.boundary_count, fine.boundary_count);
    EXPECT_GT(fine.interior_mesh.size(), coarse.interior_mesh.size());
  }
}

TEST(Trace, SingleBranchPointGivesDisc) {
  const auto chart = trace_variety(rational({0.0, 1.0}));
  ASSERT_EQ(chart.branch_points.size(), 1u);
  EXPECT_LE(std::abs(chart.branch_points[0]), 1e-12);
  EXPECT_EQ(chart.boundary_count, 1);
  EXPECT_EQ(chart.euler_char, 2 * 1 - 1);
  EXPECT_EQ(chart.genus, 0);
}

TEST(Trace, UnbranchedCoverIsTwoDiscs) {
  const auto chart = trace_variety(rational({0.25}));
  EXPECT_TRUE(chart.branch_points.empty());
  EXPECT_EQ(chart.boundary_count, 2);
  EXPECT_EQ(chart.euler_char, 2);
  EXPECT_EQ(chart.component_count, 2);
  EXPECT_EQ(chart.genus, 0);
  // |w| = 1/2 on the boundary: the loops do not lie on the torus.
  EXPECT_FALSE(chart.boundary_on_torus);
}

TEST(Trace, IllPosedInputs) {
  EXPECT_THROW(trace_variety(rational({-1.0, 1.0})), VarietyError);           // zero at z = 1
  EXPECT_THROW(trace_variety(rational({1.0}, {-0.5, 1.0})), VarietyError);    // pole at z = 0.5
  EXPECT_THROW(trace_variety(rational({0.0, 0.0, 1.0})), VarietyError);       // double zero at 0
  EXPECT_THROW(trace_variety(rational({0.0})), VarietyError);                 // w^2 = 0
  EXPECT_THROW(trace_variety(rational({-(1.0 + 5e-9), 1.0})), VarietyError);  // within 1e-8 of the circle
}

TEST(Monodromy, EvenWindingClosesEachSheet) {
  const auto r = annulus_r();
  const int wn = winding_number(r, 1.0 - 1e-3);
  EXPECT_EQ(wn % 2, 0);
  // Independent count: accumulate arg increments of the hand-written r.
  double total = 0.0;
  const int steps = 20000;
  for (int k = 0; k < steps; ++k) {
    const double a = oracle::kTwoPi * k / steps, b = oracle::kTwoPi * (k + 1) / steps;
    total += std::arg(oracle::r((1.0 - 1e-3) * oracle::torus(b)) / oracle::r((1.0 - 1e-3) * oracle::torus(a)));
  }
  EXPECT_EQ(wn, static_cast<int>(std::lround(total / oracle::kTwoPi)));
  EXPECT_EQ(wn, 2);
  EXPECT_EQ(trace_variety(r).boundary_loops.size(), 2u);
  EXPECT_EQ(winding_number(rational({0.0, 1.0}), 1.0 - 1e-3), 1);
}

TEST(Boundary, MatchesTorusZeroSetOfSymbol) {
  const auto chart = trace_variety(annulus_r());
  const auto curve = trace_torus_zero_set(parse(kP), 512, 3);
  EXPECT_EQ(static_cast<int>(chart.boundary_loops.size()), curve.component_count);
  double forward = 0.0, backward = 0.0;
  for (const auto& loop : chart.boundary_loops) {
    for (const auto& b : loop) forward = std::max(forward, distance_to_boundary_curve(b.z, b.w));
  }
  for (const auto& s : curve.samples) {
    backward = std::max(backward, distance_to_boundary_curve(oracle::torus(s.s), oracle::torus(s.t)));
  }
  EXPECT_LE(forward, 1e-6);
  EXPECT_LE(backward, 1e-6);
  // Every traced boundary point is a torus zero of p.
  for (const auto& loop : chart.boundary_loops) {
    for (const auto& b : loop) EXPECT_LE(std::abs(oracle::p(b.z, b.w)), 1e-8);
  }
}

TEST(Containment, AnnulusInsideBidisc) {
  const auto res = containment_check(annulus_r(), 4096);
  EXPECT_TRUE(res.contained);
  EXPECT_TRUE(res.unimodular_on_boundary);
  EXPECT_LE(res.boundary_deviation, 1e-12);
  // |4u - 1|^2 - |4 - u|^2 = 15 (|u|^2 - 1), so |r| <= 1 exactly when |z| <= 1.
  std::mt19937_64 rng(4);
  for (int k = 0; k < 1000; ++k) {
    const Complex u = oracle::disc_point(rng, 1.5);
    const double lhs = std::norm(4.0 * u - 1.0) - std::norm(4.0 - u);
    EXPECT_NEAR(lhs, 15.0 * (std::norm(u) - 1.0), 1e-11);
  }
}

TEST(Containment, OtherSymbols) {
  EXPECT_FALSE(containment_check(rational({0.0, 2.0}), 1024).contained);
  const auto zero = containment_check(rational({0.0}), 1024);
  EXPECT_TRUE(zero.contained);
  EXPECT_FALSE(zero.unimodular_on_boundary);
}

TEST(Residual, SymbolVanishesOnAnnulus) {
  const auto chart = trace_variety(annulus_r());
  EXPECT_LE(residual_on_variety(parse(kP), chart), 1e-10);
  EXPECT_NEAR(residual_on_variety(parse("1"), chart), 1.0, 1e-15);
  // (0, i/2) lies on the cover since r(0) = -1/4, and p(0, i/2) = 1 + 4 (-1/4) = 0.
  EXPECT_NEAR(std::abs(oracle::r(0.0) - Complex(-0.25)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(eval(parse(kP), 0.0, Complex(0.0, 0.5))), 0.0, 1e-16);
}

TEST(Residual, MeshContainsBranchPoints) {
  const auto chart = trace_variety(annulus_r());
  int hits = 0;
  for (const auto& s : chart.interior_mesh) {
    if (std::abs(std::abs(s.pt.z) - 0.5) < 1e-12 && std::abs(s.pt.w) < 1e-12) ++hits;
  }
  EXPECT_GE(hits, 2);
}
