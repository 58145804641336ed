#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hullforge/laurent.hpp"
#include "hullforge/univariate.hpp"

namespace hullforge {

/// The reflected symbol h and the Jacobian determinant of (p, h).
struct JimboData {
  LaurentPoly2 h;
  LaurentPoly2 delta;
};

/// Builds h = reflect(p) and delta = det2(p, h). Throws DegenerateSymbolError
/// when delta vanishes at every probe point of the bidisc off the axes.
JimboData build_jimbo_data(const LaurentPoly2& p);

/// True iff unit * prod(factors) equals delta after canonicalization.
bool verify_factorization(const LaurentPoly2& delta, const Monomial& unit,
                          std::span<const LaurentPoly2> factors);

/// Monomial u with delta == u * prod(factors), if one exists.
std::optional<Monomial> infer_unit(const LaurentPoly2& delta, std::span<const LaurentPoly2> factors);

struct CurveSample {
  double s = 0.0;  // arg z
  double t = 0.0;  // arg w
  int component = 0;
};

/// Sampled zero set of a symbol on the unit torus. Samples are grouped by
/// component and ordered along each component.
struct TorusCurve {
  int factor_index = 0;
  int grid_n = 0;
  std::vector<CurveSample> samples;
  int component_count = 0;
  double closure_tolerance = 1e-8;
  std::vector<int> failed_nodes;  // grid indices where root finding failed

  bool empty() const noexcept { return samples.empty(); }
};

/// Angles t in [0, 2pi) with q(e^{is}, e^{it}) = 0, i.e. unimodular roots of
/// q(e^{is}, .) within `modulus_tolerance` of the unit circle.
std::vector<double> torus_fiber_roots(const LaurentPoly2& q, double s, double modulus_tolerance = 1e-8);

TorusCurve trace_torus_zero_set(const LaurentPoly2& q, int grid_n, int factor_index = 0);

enum class CandidateKind { empty, analytic_disc_graph, double_cover_variety, torus_filling };

std::string to_string(CandidateKind kind);

/// Description of the polynomial hull of a torus curve, built from one of two
/// templates: the graph disc {(l, c l^m) : |l| <= 1} of a linear factor, or the
/// double cover {w^2 = r(z)} of the closed bidisc for an even quadratic factor.
struct HullCandidate {
  CandidateKind kind = CandidateKind::empty;
  Complex c{};   // disc graph: w = c * z^power
  int power = 0;
  Rational r;    // double cover: w^2 = r(z)
  double boundary_residual = 0.0;  // max defining-equation residual over the curve samples

  std::string describe() const;
};

HullCandidate hull_candidate_for(const TorusCurve& curve, const LaurentPoly2& q);

/// Low-discrepancy points of the candidate off the torus and off the axes.
std::vector<BidiscPoint> candidate_interior_samples(const HullCandidate& candidate, int n);

/// Largest |conj(p) - h| over the interior samples of the candidate.
double v_condition_residual(const HullCandidate& candidate, const LaurentPoly2& p, const LaurentPoly2& h,
                            int n_samples);

bool check_v_condition(const HullCandidate& candidate, const LaurentPoly2& p, const LaurentPoly2& h,
                       int n_samples = 500, double tolerance = 1e-8);

struct FactorRecord {
  LaurentPoly2 factor;
  TorusCurve curve;
  HullCandidate candidate;
  bool nonempty = false;
  bool strict = false;
  bool v_condition = false;
  bool in_J = false;
  double v_residual = 0.0;
  std::optional<Complex> constant_value;
};

struct HullPiece {
  std::string kind;
  int factor_index = 0;  // 0 for the torus graph itself
  std::string definition;
};

struct HullReport {
  LaurentPoly2 p;
  LaurentPoly2 h;
  LaurentPoly2 delta;
  std::vector<LaurentPoly2> factors;
  Monomial unit;
  std::vector<FactorRecord> per_factor;
  std::vector<int> J;  // 1-based factor indices
  std::vector<HullPiece> pieces;
  std::string hull_description;
  std::vector<std::string> notes;
};

struct HullOptions {
  int grid_n = 512;
  int v_samples = 500;
  double v_tolerance = 1e-8;
  double constant_tolerance = 1e-8;
};

/// Applies the hull criterion factor by factor: a factor enters J when its
/// torus curve is nonempty, strictly smaller than its hull, and the hull minus
/// (T^2 u L) lies in {conj(p) = h}. Throws FactorizationError when the factors
/// do not multiply to delta up to a monomial unit.
HullReport assemble_hull(const LaurentPoly2& p, const std::vector<LaurentPoly2>& factors,
                         const HullOptions& options = {});

}  // namespace hullforge
