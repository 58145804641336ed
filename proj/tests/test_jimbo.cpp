#include <gtest/gtest.h>

#include <random>

#include "hullforge/error.hpp"
#include "hullforge/jimbo.hpp"
#include "oracles.hpp"

using namespace hullforge;

namespace {

const char* kP = "1 - 4*z^2 + 4*w^2 - z^2*w^2";

std::vector<LaurentPoly2> default_factors() { return {parse("z - i*w"), parse("z + i*w"), parse(kP)}; }

const Monomial kUnit{-16.0, {-3, -3}};

}  // namespace

TEST(JimboData, ReflectionAndDeterminant) {
  const auto data = build_jimbo_data(parse(kP));
  EXPECT_EQ(data.h, parse("z^-2*w^-2*(z^2*w^2 - 4*w^2 + 4*z^2 - 1)"));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const Complex z = oracle::disc_point(rng), w = oracle::disc_point(rng);
    if (std::abs(z) < 0.05 || std::abs(w) < 0.05) continue;
    const Complex expect = oracle::delta_factored(z, w);
    EXPECT_LE(std::abs(eval(data.delta, z, w) - expect), 1e-10 * std::abs(expect) + 1e-12);
  }
}

TEST(JimboData, ReflectionIdentityExact) {
  // (zw)^2 h + p vanishes coefficientwise.
  const auto p = parse(kP);
  const auto h = build_jimbo_data(p).h;
  EXPECT_TRUE((parse("z^2*w^2") * h + p).is_zero());
}

TEST(JimboData, LinearSymbol) {
  // Hand computation: p_z = p_w = 1, h = 1/z + 1/w, so Delta = 1*(-w^-2) - 1*(-z^-2).
  const auto data = build_jimbo_data(parse("z + w"));
  EXPECT_EQ(data.h, parse("z^-1 + w^-1"));
  EXPECT_EQ(data.delta, parse("z^-2 - w^-2"));
  const std::vector<LaurentPoly2> f{parse("w - z"), parse("w + z")};
  EXPECT_TRUE(verify_factorization(data.delta, Monomial{1.0, {-2, -2}}, f));
}

TEST(JimboData, DegenerateSymbols) {
  EXPECT_THROW(build_jimbo_data(parse("1")), DegenerateSymbolError);
  EXPECT_THROW(build_jimbo_data(parse("(2+i)*z^3*w")), DegenerateSymbolError);
  EXPECT_THROW(build_jimbo_data(parse("z*w + 5")), DegenerateSymbolError);
  EXPECT_THROW(build_jimbo_data(parse("z^-1")), DomainError);
}

TEST(Factorization, Verdicts) {
  const auto delta = build_jimbo_data(parse(kP)).delta;
  auto f = default_factors();
  EXPECT_TRUE(verify_factorization(delta, kUnit, f));
  EXPECT_FALSE(verify_factorization(delta, Monomial{16.0, {-3, -3}}, f));
  std::swap(f[0], f[2]);
  EXPECT_TRUE(verify_factorization(delta, kUnit, f));
  f.pop_back();
  EXPECT_FALSE(verify_factorization(delta, kUnit, f));
  EXPECT_THROW(verify_factorization(delta, kUnit, std::vector<LaurentPoly2>{}), FactorizationError);
}

TEST(Factorization, InferredUnit) {
  const auto delta = build_jimbo_data(parse(kP)).delta;
  const auto f = default_factors();
  const auto unit = infer_unit(delta, f);
  ASSERT_TRUE(unit.has_value());
  EXPECT_EQ(unit->coefficient, Complex(-16.0));
  EXPECT_EQ(unit->exponent, (Exponent{-3, -3}));
  EXPECT_FALSE(infer_unit(delta, std::vector<LaurentPoly2>{parse("z - i*w"), parse(kP)}).has_value());
}

TEST(TorusCurve, LinearFactorSingleComponent) {
  const auto curve = trace_torus_zero_set(parse("z - i*w"), 256, 1);
  EXPECT_EQ(curve.component_count, 1);
  EXPECT_EQ(curve.samples.size(), 256u);
  EXPECT_TRUE(curve.failed_nodes.empty());
  for (const auto& s : curve.samples) {
    // z - i w = 0 means w = -i z, i.e. t = s - pi/2.
    EXPECT_LE(oracle::angle_gap(s.t, s.s - std::numbers::pi / 2), 1e-9);
    EXPECT_LE(std::abs(oracle::torus(s.s) - oracle::I * oracle::torus(s.t)), 1e-8);
  }
}

TEST(TorusCurve, SymbolHasTwoComponents) {
  const auto curve = trace_torus_zero_set(parse(kP), 512, 3);
  EXPECT_EQ(curve.component_count, 2);
  EXPECT_FALSE(curve.empty());
  for (const auto& s : curve.samples) EXPECT_LE(std::abs(oracle::p(oracle::torus(s.s), oracle::torus(s.t))), 1e-8);
}

TEST(TorusCurve, NoTorusZeros) {
  EXPECT_TRUE(trace_torus_zero_set(parse("z*w"), 128).empty());
  EXPECT_TRUE(trace_torus_zero_set(parse("w - 3"), 128).empty());
  EXPECT_THROW(trace_torus_zero_set(parse("z - w"), 32), std::invalid_argument);
}

TEST(TorusCurve, FiberRootsOnTheCircle) {
  const auto roots = torus_fiber_roots(parse(kP), 0.0);
  ASSERT_EQ(roots.size(), 2u);  // p(1, w) = -3 + 3 w^2 has w = +-1
  std::vector<double> sorted = roots;
  std::sort(sorted.begin(), sorted.end(), [](double a, double b) { return std::cos(a) < std::cos(b); });
  EXPECT_LE(oracle::angle_gap(sorted[0], std::numbers::pi), 1e-10);
  EXPECT_LE(oracle::angle_gap(sorted[1], 0.0), 1e-10);
}

TEST(Candidate, Templates) {
  const auto q1 = parse("z - i*w"), q2 = parse("z + i*w"), q3 = parse(kP);
  const auto c1 = hull_candidate_for(trace_torus_zero_set(q1, 128), q1);
  EXPECT_EQ(c1.kind, CandidateKind::analytic_disc_graph);
  EXPECT_EQ(c1.power, 1);
  EXPECT_LE(std::abs(c1.c - Complex(0.0, -1.0)), 1e-14);  // w = z / i
  const auto c2 = hull_candidate_for(trace_torus_zero_set(q2, 128), q2);
  EXPECT_LE(std::abs(c2.c - Complex(0.0, 1.0)), 1e-14);

  const auto c3 = hull_candidate_for(trace_torus_zero_set(q3, 128), q3);
  ASSERT_EQ(c3.kind, CandidateKind::double_cover_variety);
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const Complex z = oracle::disc_point(rng);
    EXPECT_LE(oracle::rel(c3.r(z), oracle::r(z)), 1e-13);
  }
  EXPECT_LE(c3.boundary_residual, 1e-8);

  const auto zw = parse("z*w");
  EXPECT_EQ(hull_candidate_for(trace_torus_zero_set(zw, 128), zw).kind, CandidateKind::empty);
}

TEST(Candidate, UnsupportedShape) {
  const auto q = parse("w^3 - z");
  EXPECT_THROW(hull_candidate_for(trace_torus_zero_set(q, 128), q), UnsupportedFactorError);
}

TEST(VCondition, Verdicts) {
  const auto p = parse(kP);
  const auto h = reflect(p);
  const auto q1 = parse("z - i*w"), q2 = parse("z + i*w"), q3 = p;
  const auto c1 = hull_candidate_for(trace_torus_zero_set(q1, 128), q1);
  const auto c2 = hull_candidate_for(trace_torus_zero_set(q2, 128), q2);
  const auto c3 = hull_candidate_for(trace_torus_zero_set(q3, 128), q3);
  EXPECT_TRUE(check_v_condition(c3, p, h));
  EXPECT_FALSE(check_v_condition(c1, p, h));
  EXPECT_FALSE(check_v_condition(c2, p, h));

  // Direct evaluation on the discs at l = 0.5: conj(p) = -0.9375 while h = -15.
  for (Complex w : {Complex(0.0, 0.5), Complex(0.0, -0.5)}) {
    EXPECT_NEAR(std::abs(std::conj(oracle::p(0.5, w)) - Complex(-0.9375)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(oracle::h(0.5, w) - Complex(-15.0)), 0.0, 1e-12);
  }
  EXPECT_GE(v_condition_residual(c1, p, h, 500), 14.0);
}

TEST(Assemble, DefaultSymbol) {
  const auto report = assemble_hull(parse(kP), default_factors(), {.grid_n = 512});
  EXPECT_EQ(report.J, std::vector<int>{3});
  ASSERT_EQ(report.per_factor.size(), 3u);
  for (int j = 0; j < 3; ++j) {
    const auto& rec = report.per_factor[j];
    EXPECT_TRUE(rec.nonempty);
    EXPECT_TRUE(rec.strict);
    EXPECT_EQ(rec.in_J, rec.nonempty && rec.strict && rec.v_condition);
  }
  EXPECT_FALSE(report.per_factor[0].v_condition);
  EXPECT_FALSE(report.per_factor[1].v_condition);
  EXPECT_TRUE(report.per_factor[2].v_condition);
  ASSERT_TRUE(report.per_factor[2].constant_value.has_value());
  EXPECT_LE(std::abs(*report.per_factor[2].constant_value), 1e-10);
  EXPECT_EQ(report.unit.coefficient, Complex(-16.0));
  EXPECT_EQ(report.pieces.size(), 2u);
  // The derived disc orientation is recorded.
  bool noted = false;
  for (const auto& n : report.notes) noted = noted || n.find("Q_1") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Assemble, VerdictsStableUnderGridRefinement) {
  const auto coarse = assemble_hull(parse(kP), default_factors(), {.grid_n = 256});
  const auto fine = assemble_hull(parse(kP), default_factors(), {.grid_n = 1024});
  ASSERT_EQ(coarse.per_factor.size(), fine.per_factor.size());
  for (std::size_t j = 0; j < coarse.per_factor.size(); ++j) {
    EXPECT_EQ(coarse.per_factor[j].in_J, fine.per_factor[j].in_J);
    EXPECT_EQ(coarse.per_factor[j].v_condition, fine.per_factor[j].v_condition);
    EXPECT_EQ(coarse.per_factor[j].curve.component_count, fine.per_factor[j].curve.component_count);
  }
}

TEST(Assemble, SymbolVanishesOnAnnulusCandidate) {
  const auto p = parse(kP);
  const auto c3 = hull_candidate_for(trace_torus_zero_set(p, 256), p);
  const auto samples = candidate_interior_samples(c3, 2000);
  ASSERT_GE(samples.size(), 1000u);
  for (const auto& pt : samples) {
    EXPECT_LE(std::abs(oracle::p(pt.z, pt.w)), 1e-10);
    EXPECT_TRUE(in_closed_bidisc(pt));
  }
}

TEST(Assemble, EmptyJForLinearSymbol) {
  // Delta(z + 2w) = 2 z^-2 w^-2 (w - z)(w + z); on the discs w = +-z, conj(p) = h only on |z| = 1.
  const auto report = assemble_hull(parse("z + 2*w"), {parse("w - z"), parse("w + z")}, {.grid_n = 256});
  EXPECT_TRUE(report.J.empty());
  EXPECT_EQ(report.pieces.size(), 1u);
  for (const auto& rec : report.per_factor) {
    EXPECT_TRUE(rec.nonempty);
    EXPECT_FALSE(rec.v_condition);
  }
}

TEST(Assemble, EmptyCurveFactorIsVacuous) {
  // A constant factor has no torus zeros; it is never in J.
  const auto p = parse(kP);
  const auto report = assemble_hull(p, {parse("2"), parse("z - i*w"), parse("z + i*w"), p}, {.grid_n = 256});
  EXPECT_EQ(report.J, std::vector<int>{4});
  EXPECT_FALSE(report.per_factor[0].nonempty);
  EXPECT_FALSE(report.per_factor[0].in_J);
  EXPECT_EQ(report.per_factor[0].candidate.kind, CandidateKind::empty);
}

TEST(Assemble, IncompleteFactorList) {
  EXPECT_THROW(assemble_hull(parse(kP), {parse("z - i*w"), parse("z + i*w")}), FactorizationError);
  EXPECT_THROW(assemble_hull(parse("1"), {parse("z")}), DegenerateSymbolError);
}
