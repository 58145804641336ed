#include <gtest/gtest.h>

#include <random>

#include "hullforge/error.hpp"
#include "hullforge/geometry.hpp"
#include "hullforge/variety.hpp"
#include "oracles.hpp"

using namespace hullforge;

namespace {

const char* kP = "1 - 4*z^2 + 4*w^2 - z^2*w^2";

GraphSpec T() { return {Height::re_p, parse(kP)}; }
GraphSpec T1() { return {Height::conj_p, parse(kP)}; }
GraphSpec flat() { return {Height::zero, {}}; }

// ds^dt coefficient of the pulled-back form for the chart (s, t) -> (e^{is}, e^{it}, conj p),
// with all three coordinate derivatives taken by central differences of the hand-written p.
double t1_isotropy_oracle(double s, double t) {
  const double h = 1e-5;
  auto chart = [](double a, double b) {
    return std::array<oracle::C, 3>{oracle::torus(a), oracle::torus(b),
                                    std::conj(oracle::p(oracle::torus(a), oracle::torus(b)))};
  };
  const auto sp = chart(s + h, t), sm = chart(s - h, t), tp = chart(s, t + h), tm = chart(s, t - h);
  double coeff = 0.0;
  for (int j = 0; j < 3; ++j) {
    const oracle::C ds = (sp[j] - sm[j]) / (2.0 * h), dt = (tp[j] - tm[j]) / (2.0 * h);
    // i (dz ^ dzbar)(d_s, d_t) = i (ds conj(dt) - dt conj(ds)) = -2 Im(ds conj(dt)).
    coeff += (oracle::I * (ds * std::conj(dt) - dt * std::conj(ds))).real();
  }
  return coeff;
}

}  // namespace

TEST(Graph, SampleValues) {
  const auto t = graph_sample(T(), 8);
  ASSERT_EQ(t.size(), 64u);
  EXPECT_LE(distance(t[0], {1.0, 1.0, 0.0}), 1e-15);
  EXPECT_LE(distance(graph_sample(T1(), 8)[0], {1.0, 1.0, 0.0}), 1e-15);
  for (const auto& x : graph_sample(flat(), 8)) EXPECT_EQ(x.eta, Complex(0.0));
  // Re p is real; conj p is the conjugate of the hand-written value.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(0.0, oracle::kTwoPi);
  for (int k = 0; k < 200; ++k) {
    const Complex z = oracle::torus(a(rng)), w = oracle::torus(a(rng));
    EXPECT_LE(std::abs(lift(T(), z, w).eta - oracle::p(z, w).real()), 1e-13);
    EXPECT_LE(std::abs(lift(T1(), z, w).eta - std::conj(oracle::p(z, w))), 1e-13);
  }
  EXPECT_THROW(graph_sample(T(), 0), std::invalid_argument);
}

TEST(Shear, Examples) {
  const auto p = parse(kP);
  const auto out = shear_F({0.0, 0.0, 6.0}, p);
  EXPECT_LE(std::abs(out.eta - Complex(3.5)), 1e-15);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> a(0.0, oracle::kTwoPi);
  for (int k = 0; k < 100; ++k) {
    const Complex z = oracle::torus(a(rng)), w = oracle::torus(a(rng));
    const auto image = shear_F(lift(T1(), z, w), p);
    EXPECT_LE(std::abs(image.eta - oracle::p(z, w).real()), 1e-13);
    EXPECT_EQ(image.z, z);
    EXPECT_EQ(image.w, w);
  }
}

TEST(Shear, InverseRoundTrip) {
  const auto p = parse(kP);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const SpacePoint x{oracle::disc_point(rng), oracle::disc_point(rng), oracle::disc_point(rng, 3.0)};
    const auto back = shear_F_inverse(shear_F(x, p), p);
    EXPECT_LE(distance(back, x), 1e-14);
    EXPECT_LE(distance(shear_F(shear_F_inverse(x, p), p), x), 1e-14);
  }
}

TEST(Shear, FixesAnnulusGraph) {
  const auto p = parse(kP);
  const auto chart = trace_variety({Poly1({-1.0, 0.0, 4.0}), Poly1({4.0, 0.0, -1.0})});
  std::size_t checked = 0;
  for (std::size_t i = 0; i < chart.interior_mesh.size(); i += 7) {
    const auto& pt = chart.interior_mesh[i].pt;
    const SpacePoint x{pt.z, pt.w, eval(p, pt.z, pt.w)};
    EXPECT_LE(distance(shear_F(x, p), x), 1e-12);
    ++checked;
  }
  EXPECT_GE(checked, 200u);
}

TEST(Isotropy, RealHeightIsIsotropic) {
  for (int n : {64, 128, 256}) EXPECT_LE(isotropy_defect(T(), n), 1e-12) << n;
  EXPECT_EQ(isotropy_defect(flat(), 64), 0.0);
}

TEST(Isotropy, ConjugateHeightIsNot) {
  // Oracle run: maximum of the finite-difference coefficient over the 128 x 128 grid.
  double oracle_max = 0.0;
  for (int a = 0; a < 128; ++a) {
    for (int b = 0; b < 128; ++b) {
      oracle_max = std::max(oracle_max, std::abs(t1_isotropy_oracle(oracle::kTwoPi * a / 128, oracle::kTwoPi * b / 128)));
    }
  }
  const double defect = isotropy_defect(T1(), 128);
  EXPECT_GE(oracle_max, 0.1);
  EXPECT_GE(defect, 0.1);
  EXPECT_NEAR(defect, oracle_max, 1e-5 * oracle_max);
}

TEST(Isotropy, AnalyticMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a(0.0, oracle::kTwoPi);
  for (int k = 0; k < 200; ++k) {
    const double s = a(rng), t = a(rng);
    const double analytic = isotropy_coefficient(T1(), s, t);
    EXPECT_NEAR(analytic, t1_isotropy_oracle(s, t), 1e-6 * std::max(1.0, std::abs(analytic)));
    EXPECT_NEAR(analytic, isotropy_coefficient_fd(T1(), s, t), 1e-6 * std::max(1.0, std::abs(analytic)));
    EXPECT_LE(std::abs(isotropy_coefficient(T(), s, t)), 1e-12);
  }
}

TEST(Distance, Examples) {
  EXPECT_GE(distance_to_graph({0.0, Complex(0.0, 0.5), 0.0}, T(), 128), 0.9);
  // Brute force over a dense grid bounds the refined distance from above, and
  // closely from below since the grid spacing is tiny.
  const int dense = 2048;
  double brute = 1e300;
  for (int a = 0; a < dense; ++a) {
    for (int b = 0; b < dense; ++b) {
      const oracle::C z = oracle::torus(oracle::kTwoPi * a / dense), w = oracle::torus(oracle::kTwoPi * b / dense);
      brute = std::min(brute, std::sqrt(std::norm(z - 1.0) + std::norm(w - 1.0) + std::norm(oracle::p(z, w).real() - 5.0)));
    }
  }
  const double d = distance_to_graph({1.0, 1.0, 5.0}, T(), 128);
  EXPECT_LE(d, brute + 1e-12);
  EXPECT_GE(d, brute - 1e-4);
  EXPECT_LT(d, 5.0);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> a(0.0, oracle::kTwoPi);
  for (int k = 0; k < 20; ++k) {
    const auto q = lift(T(), oracle::torus(a(rng)), oracle::torus(a(rng)));
    EXPECT_LE(distance_to_graph(q, T(), 64), 1e-8);
  }
  EXPECT_THROW(distance_to_graph({0.0, 0.0, 0.0}, T(), 32), std::invalid_argument);
}

TEST(Distance, ShearImageOfT1LiesOnT) {
  const auto p = parse(kP);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> a(0.0, oracle::kTwoPi);
  for (int k = 0; k < 40; ++k) {
    const auto x = lift(T1(), oracle::torus(a(rng)), oracle::torus(a(rng)));
    EXPECT_LE(distance_to_graph(shear_F(x, p), T(), 64), 1e-10);
  }
}

TEST(Heights, Names) {
  for (Height h : {Height::re_p, Height::conj_p, Height::p, Height::zero, Height::custom}) {
    EXPECT_EQ(height_from_string(to_string(h)), h);
  }
  EXPECT_THROW(height_from_string("imaginary"), ConfigError);
}
