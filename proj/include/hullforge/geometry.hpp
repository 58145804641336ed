#pragma once

#include <span>
#include <string>
#include <vector>

#include "hullforge/laurent.hpp"

namespace hullforge {

/// Which function of (z, w) supplies the third coordinate of a graph.
enum class Height {
  re_p,    // Re p: the isotropic torus T
  conj_p,  // conj(p): the torus T1
  p,       // p itself
  zero,    // the flat torus T^2 x {0}
  custom,  // an arbitrary holomorphic symbol
};

std::string to_string(Height h);
Height height_from_string(const std::string& name);

/// Graph {(z, w, f(z, w))} of a height function. `symbol` is p for the
/// p-derived heights and the custom symbol otherwise; it is unused for zero.
struct GraphSpec {
  Height height = Height::re_p;
  LaurentPoly2 symbol;

  std::string tag() const { return to_string(height); }
};

struct SpacePoint {
  Complex z;
  Complex w;
  Complex eta;
};

Complex height_value(const GraphSpec& spec, Complex z, Complex w);

/// Value and parameter derivatives of the height along the torus chart
/// (s, t) -> (e^{is}, e^{it}).
struct HeightJet {
  Complex value;
  Complex d_s;
  Complex d_t;
};

HeightJet height_jet(const GraphSpec& spec, double s, double t);

/// Height derivative for an angular perturbation of z (dz = i z dsigma) and
/// of w (dw = i w dtau), at an arbitrary unimodular point.
HeightJet height_jet_at(const GraphSpec& spec, Complex z, Complex w);

SpacePoint lift(const GraphSpec& spec, Complex z, Complex w);

/// n*n torus samples (s, t) = 2*pi*(a, b)/n lifted by the height.
std::vector<SpacePoint> graph_sample(const GraphSpec& spec, int n);

/// Lift of an arbitrary base sample set (e.g. a variety chart).
std::vector<SpacePoint> graph_lift(const GraphSpec& spec, std::span<const BidiscPoint> base);

/// (z, w, eta) -> (z, w, (eta + p(z, w)) / 2) and its inverse eta -> 2 eta - p.
SpacePoint shear_F(const SpacePoint& pt, const LaurentPoly2& p);
SpacePoint shear_F_inverse(const SpacePoint& pt, const LaurentPoly2& p);

/// Coefficient of ds^dt in the pullback of  i * sum_j dz_j ^ conj(dz_j)  to the
/// chart (s, t) -> (e^{is}, e^{it}, height). With this convention the
/// coefficient equals  -2 * sum_j Im(d_s z_j * conj(d_t z_j)).
double isotropy_coefficient(const GraphSpec& spec, double s, double t);

/// Same coefficient with the chart derivatives taken by central differences.
double isotropy_coefficient_fd(const GraphSpec& spec, double s, double t, double step = 1e-5);

/// max |isotropy_coefficient| over the n*n grid.
double isotropy_defect(const GraphSpec& spec, int n);

/// Euclidean distance from q to the graph over T^2: grid search on an n*n grid
/// followed by damped Gauss-Newton refinement in (s, t).
double distance_to_graph(const SpacePoint& q, const GraphSpec& spec, int n);

double distance(const SpacePoint& a, const SpacePoint& b);

}  // namespace hullforge
