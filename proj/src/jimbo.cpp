#include "hullforge/jimbo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "hullforge/error.hpp"
#include "hullforge/sampling.hpp"

namespace hullforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Hull samples closer than this to an axis are treated as lying on L.
constexpr double kAxisClearance = 1e-3;

LaurentPoly2 product(std::span<const LaurentPoly2> factors) {
  LaurentPoly2 acc(1.0);
  for (const auto& f : factors) acc = acc * f;
  return acc;
}

// Coefficient of w^k in q as a polynomial in z. q must have nonnegative exponents.
Poly1 w_coefficient(const LaurentPoly2& q, int k) {
  std::vector<Complex> c;
  for (const auto& [e, coef] : q.terms()) {
    if (e.w != k) continue;
    if (static_cast<std::size_t>(e.z) >= c.size()) c.resize(e.z + 1);
    c[e.z] += coef;
  }
  return Poly1(std::move(c));
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

std::string complex_text(Complex c) { return to_string(LaurentPoly2(c)); }

}  // namespace

JimboData build_jimbo_data(const LaurentPoly2& p) {
  if (p.has_negative_exponents()) throw DomainError("symbol must have nonnegative exponents");
  JimboData data{reflect(p), {}};
  data.delta = det2(p, data.h);

  // Probe the determinant off the axes; the seed is fixed so the verdict is reproducible.
  std::mt19937_64 rng(0x4a494d42ULL);
  std::uniform_real_distribution<double> radius(0.05, 0.95);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  double largest = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Complex z = std::polar(radius(rng), angle(rng));
    const Complex w = std::polar(radius(rng), angle(rng));
    largest = std::max(largest, std::abs(eval(data.delta, z, w)));
  }
  if (largest <= kCanonicalThreshold) {
    throw DegenerateSymbolError("Jacobian determinant of (p, h) vanishes identically for p = " + to_string(p));
  }
  return data;
}

bool verify_factorization(const LaurentPoly2& delta, const Monomial& unit,
                          std::span<const LaurentPoly2> factors) {
  if (factors.empty()) throw FactorizationError("factor list is empty");
  return (LaurentPoly2(unit) * product(factors) - delta).is_zero();
}

std::optional<Monomial> infer_unit(const LaurentPoly2& delta, std::span<const LaurentPoly2> factors) {
  if (factors.empty()) return std::nullopt;
  const LaurentPoly2 prod = product(factors);
  if (prod.is_zero() || delta.is_zero()) return std::nullopt;
  // Lexicographic order on Z^2 is a group order, so leading terms multiply.
  const auto& [ed, cd] = *delta.terms().rbegin();
  const auto& [ep, cp] = *prod.terms().rbegin();
  Monomial unit{cd / cp, Exponent{ed.z - ep.z, ed.w - ep.w}};
  if (!verify_factorization(delta, unit, factors)) return std::nullopt;
  return unit;
}

std::vector<double> torus_fiber_roots(const LaurentPoly2& q, double s, double modulus_tolerance) {
  const LaurentPoly2 shifted = q.shifted_to_polynomial();
  const Complex z = unit_circle(s);
  std::vector<Complex> coeffs(shifted.max_w() + 1);
  for (const auto& [e, c] : shifted.terms()) coeffs[e.w] += c * std::pow(z, e.z);
  const Poly1 fiber(std::move(coeffs));
  std::vector<double> out;
  for (const Complex& root : fiber.roots()) {
    if (std::abs(std::abs(root) - 1.0) <= modulus_tolerance) out.push_back(wrap_angle(std::arg(root)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TorusCurve trace_torus_zero_set(const LaurentPoly2& q, int grid_n, int factor_index) {
  if (grid_n < 64) throw std::invalid_argument("grid_n must be at least 64");
  TorusCurve curve;
  curve.factor_index = factor_index;
  curve.grid_n = grid_n;

  // Roots per grid node, flattened with offsets.
  std::vector<std::vector<double>> node_roots(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    const double s = kTwoPi * i / grid_n;
    try {
      std::vector<double> roots = torus_fiber_roots(q, s);
      std::erase_if(roots, [&](double t) {
        return std::abs(eval(q, unit_circle(s), unit_circle(t))) > curve.closure_tolerance;
      });
      node_roots[i] = std::move(roots);
    } catch (const Error&) {
      curve.failed_nodes.push_back(i);
    }
  }

  std::vector<std::size_t> offset(grid_n + 1, 0);
  for (int i = 0; i < grid_n; ++i) offset[i + 1] = offset[i] + node_roots[i].size();
  const std::size_t total = offset[grid_n];
  if (total == 0) return curve;

  // Link each root to its mutual nearest neighbour on the next fiber.
  const double link_tolerance = std::max(0.5, 8.0 * kTwoPi / grid_n);
  UnionFind uf(total);
  std::vector<std::ptrdiff_t> next(total, -1);
  auto nearest = [&](double t, const std::vector<double>& candidates) {
    std::ptrdiff_t best = -1;
    double best_d = link_tolerance;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const double d = angle_distance(t, candidates[k]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::ptrdiff_t>(k);
      }
    }
    return best;
  };
  for (int i = 0; i < grid_n; ++i) {
    const int j = (i + 1) % grid_n;
    for (std::size_t a = 0; a < node_roots[i].size(); ++a) {
      const auto b = nearest(node_roots[i][a], node_roots[j]);
      if (b < 0) continue;
      if (nearest(node_roots[j][b], node_roots[i]) != static_cast<std::ptrdiff_t>(a)) continue;
      next[offset[i] + a] = static_cast<std::ptrdiff_t>(offset[j] + b);
      uf.unite(offset[i] + a, offset[j] + b);
    }
  }

  auto node_of = [&](std::size_t flat) {
    return static_cast<int>(std::upper_bound(offset.begin(), offset.end(), flat) - offset.begin()) - 1;
  };

  std::map<std::size_t, int> component_of_rep;
  std::vector<bool> emitted(total, false);
  for (std::size_t start = 0; start < total; ++start) {
    if (emitted[start]) continue;
    auto [it, inserted] = component_of_rep.try_emplace(uf.find(start), curve.component_count);
    if (inserted) ++curve.component_count;
    const int comp = it->second;
    // Walk forward along the links from the first unvisited member.
    std::size_t cur = start;
    while (!emitted[cur]) {
      emitted[cur] = true;
      const int i = node_of(cur);
      curve.samples.push_back({kTwoPi * i / grid_n, node_roots[i][cur - offset[i]], comp});
      if (next[cur] < 0) break;
      cur = static_cast<std::size_t>(next[cur]);
    }
  }
  std::stable_sort(curve.samples.begin(), curve.samples.end(),
                   [](const CurveSample& a, const CurveSample& b) { return a.component < b.component; });
  return curve;
}

std::string to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::empty: return "empty";
    case CandidateKind::analytic_disc_graph: return "analytic_disc_graph";
    case CandidateKind::double_cover_variety: return "double_cover_variety";
    case CandidateKind::torus_filling: return "torus_filling";
  }
  return "unknown";
}

std::string HullCandidate::describe() const {
  switch (kind) {
    case CandidateKind::empty: return "empty set";
    case CandidateKind::torus_filling: return "closed bidisc";
    case CandidateKind::analytic_disc_graph:
      return "{(l, c*l^" + std::to_string(power) + ") : |l| <= 1}, c = " + complex_text(c);
    case CandidateKind::double_cover_variety:
      return "{(z,w) in closed bidisc : w^2 = " + r.to_string() + "}";
  }
  return {};
}

HullCandidate hull_candidate_for(const TorusCurve& curve, const LaurentPoly2& q) {
  HullCandidate cand;
  if (q.is_zero()) {
    cand.kind = CandidateKind::torus_filling;
    return cand;
  }
  if (curve.empty()) return cand;

  const LaurentPoly2 shifted = q.shifted_to_polynomial();
  const int degree_w = shifted.max_w();
  if (degree_w == 1) {
    const Poly1 a0 = w_coefficient(shifted, 0);
    const Poly1 a1 = w_coefficient(shifted, 1);
    const int m = a0.degree() - a1.degree();
    if (a0.is_zero() || m < 0) {
      throw UnsupportedFactorError("linear factor is not of the form w = c*z^m: " + to_string(q));
    }
    const Complex c = -a0.leading() / a1.leading();
    const LaurentPoly2 rest =
        a0.to_symbol_in_z() + LaurentPoly2::monomial(c, m, 0) * a1.to_symbol_in_z();
    double scale = 0.0;
    for (const auto& [e, coef] : shifted.terms()) scale = std::max(scale, std::abs(coef));
    for (const auto& [e, coef] : rest.terms()) {
      if (std::abs(coef) > 1e-10 * scale) {
        throw UnsupportedFactorError("linear factor is not of the form w = c*z^m: " + to_string(q));
      }
    }
    cand.kind = CandidateKind::analytic_disc_graph;
    cand.c = c;
    cand.power = m;
    for (const auto& smp : curve.samples) {
      const Complex z = unit_circle(smp.s);
      cand.boundary_residual = std::max(cand.boundary_residual, std::abs(unit_circle(smp.t) - c * std::pow(z, m)));
    }
    return cand;
  }
  if (degree_w == 2 && w_coefficient(shifted, 1).is_zero()) {
    Poly1 a0 = w_coefficient(shifted, 0);
    std::vector<Complex> neg = a0.coefficients();
    for (auto& x : neg) x = -x;
    cand.kind = CandidateKind::double_cover_variety;
    cand.r = Rational{Poly1(std::move(neg)), w_coefficient(shifted, 2)};
    for (const auto& smp : curve.samples) {
      const Complex w = unit_circle(smp.t);
      cand.boundary_residual = std::max(cand.boundary_residual, std::abs(w * w - cand.r(unit_circle(smp.s))));
    }
    return cand;
  }
  throw UnsupportedFactorError("factor is neither linear in w nor of the form w^2 = r(z): " + to_string(q));
}

std::vector<BidiscPoint> candidate_interior_samples(const HullCandidate& candidate, int n) {
  std::vector<BidiscPoint> out;
  if (candidate.kind != CandidateKind::analytic_disc_graph &&
      candidate.kind != CandidateKind::double_cover_variety) {
    return out;
  }
  out.reserve(n);
  const std::uint64_t max_draws = 64ULL * static_cast<std::uint64_t>(n) + 1024;
  for (std::uint64_t idx = 1; out.size() < static_cast<std::size_t>(n) && idx < max_draws; ++idx) {
    const Complex z = halton_disc_point(idx);
    if (std::abs(z) < kAxisClearance) continue;
    Complex w;
    if (candidate.kind == CandidateKind::analytic_disc_graph) {
      w = candidate.c * std::pow(z, candidate.power);
    } else {
      w = std::sqrt(candidate.r(z));
      if (idx % 2 == 0) w = -w;
    }
    if (std::abs(w) < kAxisClearance || std::abs(w) > 1.0 + kDomainEps) continue;
    // Both coordinates on the unit circle would put the point on T^2.
    if (std::abs(std::abs(z) - 1.0) < kDomainEps && std::abs(std::abs(w) - 1.0) < kDomainEps) continue;
    out.push_back({z, w});
  }
  return out;
}

double v_condition_residual(const HullCandidate& candidate, const LaurentPoly2& p, const LaurentPoly2& h,
                            int n_samples) {
  if (candidate.kind == CandidateKind::empty) throw std::invalid_argument("V-condition of an empty candidate");
  double worst = 0.0;
  for (const auto& pt : candidate_interior_samples(candidate, n_samples)) {
    worst = std::max(worst, std::abs(std::conj(eval(p, pt)) - eval(h, pt)));
  }
  return worst;
}

bool check_v_condition(const HullCandidate& candidate, const LaurentPoly2& p, const LaurentPoly2& h,
                       int n_samples, double tolerance) {
  return v_condition_residual(candidate, p, h, n_samples) <= tolerance;
}

HullReport assemble_hull(const LaurentPoly2& p, const std::vector<LaurentPoly2>& factors,
                         const HullOptions& options) {
  HullReport report;
  report.p = p;
  const JimboData data = build_jimbo_data(p);
  report.h = data.h;
  report.delta = data.delta;
  report.factors = factors;

  const auto unit = infer_unit(data.delta, factors);
  if (!unit) {
    throw FactorizationError("factors do not multiply to the Jacobian determinant up to a monomial unit");
  }
  report.unit = *unit;

  for (std::size_t j = 0; j < factors.size(); ++j) {
    const int index = static_cast<int>(j) + 1;
    FactorRecord rec;
    rec.factor = factors[j];
    rec.curve = trace_torus_zero_set(factors[j], options.grid_n, index);
    rec.candidate = hull_candidate_for(rec.curve, factors[j]);
    rec.nonempty = !rec.curve.empty();
    rec.strict = rec.nonempty && (rec.candidate.kind == CandidateKind::analytic_disc_graph ||
                                  rec.candidate.kind == CandidateKind::double_cover_variety);
    if (rec.candidate.kind == CandidateKind::empty) {
      rec.v_condition = true;  // empty hull: inclusion holds vacuously
    } else {
      rec.v_residual = v_condition_residual(rec.candidate, p, data.h, options.v_samples);
      rec.v_condition = rec.v_residual <= options.v_tolerance;
    }
    rec.in_J = rec.nonempty && rec.strict && rec.v_condition;

    if (rec.in_J) {
      std::vector<Complex> values;
      for (const auto& pt : candidate_interior_samples(rec.candidate, options.v_samples)) {
        values.push_back(eval(p, pt));
      }
      for (const auto& smp : rec.curve.samples) values.push_back(eval(p, unit_circle(smp.s), unit_circle(smp.t)));
      const Complex mean = std::accumulate(values.begin(), values.end(), Complex{}) /
                           static_cast<double>(values.size());
      double spread = 0.0;
      for (const auto& v : values) spread = std::max(spread, std::abs(v - mean));
      if (spread <= options.constant_tolerance) {
        rec.constant_value = std::abs(mean) < kCanonicalThreshold ? Complex{} : mean;
      } else {
        report.notes.push_back("p is not constant on the hull of Q_" + std::to_string(index) +
                               " (spread " + std::to_string(spread) + ")");
      }
      report.J.push_back(index);
    }
    if (rec.candidate.kind == CandidateKind::analytic_disc_graph) {
      report.notes.push_back("Q_" + std::to_string(index) + " is the graph w = c*z^" +
                             std::to_string(rec.candidate.power) + " with c = " + complex_text(rec.candidate.c) +
                             ", derived from the factor " + to_string(factors[j]));
    }
    report.per_factor.push_back(std::move(rec));
  }

  report.pieces.push_back({"torus_graph", 0, "{(z, w, conj(p(z,w))) : |z| = |w| = 1}"});
  report.hull_description = "G_conj(p)(T^2)";
  for (int j : report.J) {
    const auto& rec = report.per_factor[j - 1];
    report.pieces.push_back({to_string(rec.candidate.kind), j, rec.candidate.describe()});
    report.hull_description += " U G_conj(p)(hull(Q_" + std::to_string(j) + ")), hull(Q_" + std::to_string(j) +
                               ") = " + rec.candidate.describe();
    if (rec.constant_value) report.hull_description += ", p = " + complex_text(*rec.constant_value) + " there";
  }
  return report;
}

}  // namespace hullforge
