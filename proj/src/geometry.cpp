#include "hullforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hullforge/error.hpp"
#include "hullforge/sampling.hpp"

namespace hullforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

// Squared distance from q to the chart point at (s, t).
double residual_norm2(const SpacePoint& q, const GraphSpec& spec, double s, double t) {
  const Complex z = unit_circle(s);
  const Complex w = unit_circle(t);
  return std::norm(z - q.z) + std::norm(w - q.w) + std::norm(height_value(spec, z, w) - q.eta);
}

}  // namespace

std::string to_string(Height h) {
  switch (h) {
    case Height::re_p: return "re_p";
    case Height::conj_p: return "conj_p";
    case Height::p: return "p";
    case Height::zero: return "zero";
    case Height::custom: return "custom";
  }
  return "unknown";
}

Height height_from_string(const std::string& name) {
  for (Height h : {Height::re_p, Height::conj_p, Height::p, Height::zero, Height::custom}) {
    if (to_string(h) == name) return h;
  }
  throw ConfigError("unknown height '" + name + "' (expected re_p, conj_p, p, zero or custom)");
}

Complex height_value(const GraphSpec& spec, Complex z, Complex w) {
  switch (spec.height) {
    case Height::zero: return {};
    case Height::re_p: return eval(spec.symbol, z, w).real();
    case Height::conj_p: return std::conj(eval(spec.symbol, z, w));
    case Height::p:
    case Height::custom: return eval(spec.symbol, z, w);
  }
  return {};
}

HeightJet height_jet_at(const GraphSpec& spec, Complex z, Complex w) {
  if (spec.height == Height::zero) return {};
  const Complex v = eval(spec.symbol, z, w);
  const Complex ds = eval(derive(spec.symbol, Var::z), z, w) * kI * z;
  const Complex dt = eval(derive(spec.symbol, Var::w), z, w) * kI * w;
  switch (spec.height) {
    case Height::re_p: return {v.real(), ds.real(), dt.real()};
    case Height::conj_p: return {std::conj(v), std::conj(ds), std::conj(dt)};
    default: return {v, ds, dt};
  }
}

HeightJet height_jet(const GraphSpec& spec, double s, double t) {
  return height_jet_at(spec, unit_circle(s), unit_circle(t));
}

SpacePoint lift(const GraphSpec& spec, Complex z, Complex w) { return {z, w, height_value(spec, z, w)}; }

std::vector<SpacePoint> graph_sample(const GraphSpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("graph_sample needs n >= 1");
  std::vector<SpacePoint> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    const Complex z = unit_circle(kTwoPi * a / n);
    for (int b = 0; b < n; ++b) out.push_back(lift(spec, z, unit_circle(kTwoPi * b / n)));
  }
  return out;
}

std::vector<SpacePoint> graph_lift(const GraphSpec& spec, std::span<const BidiscPoint> base) {
  std::vector<SpacePoint> out;
  out.reserve(base.size());
  for (const auto& pt : base) out.push_back(lift(spec, pt.z, pt.w));
  return out;
}

SpacePoint shear_F(const SpacePoint& pt, const LaurentPoly2& p) {
  return {pt.z, pt.w, 0.5 * (pt.eta + eval(p, pt.z, pt.w))};
}

SpacePoint shear_F_inverse(const SpacePoint& pt, const LaurentPoly2& p) {
  return {pt.z, pt.w, 2.0 * pt.eta - eval(p, pt.z, pt.w)};
}

double isotropy_coefficient(const GraphSpec& spec, double s, double t) {
  const Complex z = unit_circle(s);
  const Complex w = unit_circle(t);
  const HeightJet jet = height_jet_at(spec, z, w);
  const Complex ds[3] = {kI * z, 0.0, jet.d_s};
  const Complex dt[3] = {0.0, kI * w, jet.d_t};
  double sum = 0.0;
  for (int j = 0; j < 3; ++j) sum += (ds[j] * std::conj(dt[j])).imag();
  return -2.0 * sum;
}

double isotropy_coefficient_fd(const GraphSpec& spec, double s, double t, double step) {
  auto chart = [&](double a, double b) {
    const Complex z = unit_circle(a);
    const Complex w = unit_circle(b);
    return SpacePoint{z, w, height_value(spec, z, w)};
  };
  const SpacePoint sp = chart(s + step, t), sm = chart(s - step, t);
  const SpacePoint tp = chart(s, t + step), tm = chart(s, t - step);
  const double h2 = 2.0 * step;
  const Complex ds[3] = {(sp.z - sm.z) / h2, (sp.w - sm.w) / h2, (sp.eta - sm.eta) / h2};
  const Complex dt[3] = {(tp.z - tm.z) / h2, (tp.w - tm.w) / h2, (tp.eta - tm.eta) / h2};
  double sum = 0.0;
  for (int j = 0; j < 3; ++j) sum += (ds[j] * std::conj(dt[j])).imag();
  return -2.0 * sum;
}

double isotropy_defect(const GraphSpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("isotropy_defect needs n >= 1");
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      worst = std::max(worst, std::abs(isotropy_coefficient(spec, kTwoPi * a / n, kTwoPi * b / n)));
    }
  }
  return worst;
}

double distance(const SpacePoint& a, const SpacePoint& b) {
  return std::sqrt(std::norm(a.z - b.z) + std::norm(a.w - b.w) + std::norm(a.eta - b.eta));
}

double distance_to_graph(const SpacePoint& q, const GraphSpec& spec, int n) {
  if (n < 64) throw std::invalid_argument("distance_to_graph needs n >= 64");
  struct Seed {
    double d2, s, t;
  };
  std::vector<Seed> seeds;
  seeds.reserve(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double s = kTwoPi * a / n, t = kTwoPi * b / n;
      seeds.push_back({residual_norm2(q, spec, s, t), s, t});
    }
  }
  const std::size_t keep = std::min<std::size_t>(4, seeds.size());
  std::partial_sort(seeds.begin(), seeds.begin() + keep, seeds.end(),
                    [](const Seed& x, const Seed& y) { return x.d2 < y.d2; });

  double best = seeds.front().d2;
  for (std::size_t k = 0; k < keep; ++k) {
    double s = seeds[k].s, t = seeds[k].t, f = seeds[k].d2;
    double lambda = 1e-3;
    for (int it = 0; it < 200 && f > 0.0; ++it) {
      const Complex z = unit_circle(s), w = unit_circle(t);
      const HeightJet jet = height_jet_at(spec, z, w);
      const Complex r[3] = {z - q.z, w - q.w, jet.value - q.eta};
      const Complex js[3] = {kI * z, 0.0, jet.d_s};
      const Complex jt[3] = {0.0, kI * w, jet.d_t};
      double a11 = 0, a12 = 0, a22 = 0, g1 = 0, g2 = 0;
      for (int j = 0; j < 3; ++j) {
        a11 += std::norm(js[j]);
        a22 += std::norm(jt[j]);
        a12 += (std::conj(js[j]) * jt[j]).real();
        g1 += (std::conj(js[j]) * r[j]).real();
        g2 += (std::conj(jt[j]) * r[j]).real();
      }
      bool accepted = false;
      for (int tries = 0; tries < 30 && !accepted; ++tries) {
        const double b11 = a11 * (1.0 + lambda), b22 = a22 * (1.0 + lambda);
        const double det = b11 * b22 - a12 * a12;
        if (det <= 0.0) {
          lambda *= 4.0;
          continue;
        }
        const double ds = -(b22 * g1 - a12 * g2) / det;
        const double dt = -(b11 * g2 - a12 * g1) / det;
        const double fn = residual_norm2(q, spec, s + ds, t + dt);
        if (fn < f) {
          s += ds;
          t += dt;
          const bool tiny = std::abs(ds) + std::abs(dt) < 1e-15;
          f = fn;
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
          if (tiny) it = 200;
        } else {
          lambda *= 4.0;
        }
      }
      if (!accepted) break;
    }
    best = std::min(best, f);
  }
  return std::sqrt(best);
}

}  // namespace hullforge
