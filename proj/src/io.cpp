#include "hullforge/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "hullforge/error.hpp"
#include "hullforge/sampling.hpp"

namespace hullforge {
namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(std::string_view field, std::string_view whole) {
  while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
  while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError("malformed point '" + std::string(whole) + "' (expected re,im;re,im;re,im)");
  }
  return v;
}

}  // namespace

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json point_json(const SpacePoint& p) {
  return Json::array({complex_json(p.z), complex_json(p.w), complex_json(p.eta)});
}

Json to_json(const HullReport& report) {
  Json j;
  j["p"] = to_string(report.p);
  j["h"] = to_string(report.h);
  j["delta"] = to_string(report.delta);
  j["unit"] = to_string(report.unit);
  j["factors"] = Json::array();
  for (const auto& f : report.factors) j["factors"].push_back(to_string(f));
  j["per_factor"] = Json::array();
  for (const auto& rec : report.per_factor) {
    Json r;
    r["factor_index"] = rec.curve.factor_index;
    r["factor"] = to_string(rec.factor);
    r["curve_samples"] = rec.curve.samples.size();
    r["curve_components"] = rec.curve.component_count;
    r["failed_nodes"] = rec.curve.failed_nodes.size();
    r["candidate"] = to_string(rec.candidate.kind);
    r["candidate_description"] = rec.candidate.describe();
    r["candidate_boundary_residual"] = rec.candidate.boundary_residual;
    r["nonempty"] = rec.nonempty;
    r["strict"] = rec.strict;
    r["v_condition"] = rec.v_condition;
    r["v_residual"] = rec.v_residual;
    r["in_J"] = rec.in_J;
    r["constant_value"] = rec.constant_value ? complex_json(*rec.constant_value) : Json(nullptr);
    j["per_factor"].push_back(std::move(r));
  }
  j["J"] = report.J;
  j["hull"] = report.hull_description;
  j["pieces"] = Json::array();
  for (const auto& piece : report.pieces) {
    j["pieces"].push_back({{"kind", piece.kind}, {"factor_index", piece.factor_index}, {"definition", piece.definition}});
  }
  j["notes"] = report.notes;
  return j;
}

Json topology_json(const VarietyChart& chart) {
  Json j;
  j["r"] = chart.r.to_string();
  j["branch_points"] = Json::array();
  for (const auto& b : chart.branch_points) j["branch_points"].push_back(complex_json(b));
  j["boundary_count"] = chart.boundary_count;
  j["genus"] = chart.genus;
  j["euler_char"] = chart.euler_char;
  j["component_count"] = chart.component_count;
  j["boundary_on_torus"] = chart.boundary_on_torus;
  j["resolution"] = chart.resolution;
  j["interior_samples"] = chart.interior_mesh.size();
  return j;
}

Json to_json(const SeparationCertificate& cert) {
  Json j;
  j["point"] = point_json(cert.point);
  j["degree"] = cert.degree;
  j["coefficients"] = Json::array();
  for (const auto& [e, c] : cert.coefficients) {
    j["coefficients"].push_back({{"exponent", e}, {"value", complex_json(c)}});
  }
  j["ratio"] = cert.achieved_ratio;
  j["margin"] = cert.margin;
  j["samples"] = cert.sample_count;
  return j;
}

Json to_json(const SeparationOutcome& outcome) {
  Json j;
  j["separated"] = outcome.certificate.has_value();
  j["best_ratio"] = outcome.best_ratio;
  j["ratio_upper_bound"] = outcome.ratio_upper_bound;
  j["converged"] = outcome.converged;
  j["iterations"] = outcome.iterations;
  j["certificate"] = outcome.certificate ? to_json(*outcome.certificate) : Json(nullptr);
  j["evidence_only"] = !outcome.certificate.has_value();
  return j;
}

Json to_json(const MembershipCertificate& cert) {
  return {{"point", point_json(cert.point)},
          {"variety_residual", cert.variety_residual},
          {"height_residual", cert.height_residual},
          {"boundary_in_T_residual", cert.boundary_in_T_residual},
          {"certified", cert.certified}};
}

Json to_json(const ClassResult& result) {
  return {{"winding", {result.m, result.n}},
          {"K", result.K},
          {"restarts", result.restarts},
          {"best_defect", result.best.defect},
          {"per_coordinate_defect", result.best.per_coordinate_defect},
          {"samples", result.best.samples},
          {"converged", result.best.converged},
          {"heuristic_search", true}};
}

Json isotropy_json(const GraphSpec& spec, double defect_max, int grid_n) {
  return {{"graph", spec.tag()},
          {"isotropy_defect_max", defect_max},
          {"grid_n", grid_n},
          {"convention", "coefficient of ds^dt in the pullback of i*sum dz_j^conj(dz_j) under "
                         "(s,t) -> (e^{is}, e^{it}, height); equals -2*sum Im(d_s z_j * conj(d_t z_j))"}};
}

void write_curve_csv(std::ostream& out, const std::vector<TorusCurve>& curves) {
  out << "factor_index,component,s,t\n";
  for (const auto& c : curves) {
    for (const auto& s : c.samples) {
      out << c.factor_index << ',' << s.component << ',' << num(s.s) << ',' << num(s.t) << '\n';
    }
  }
}

void write_chart_csv(std::ostream& out, const VarietyChart& chart) {
  out << "kind,sheet,re_z,im_z,re_w,im_w\n";
  auto row = [&](const char* kind, int sheet, const BidiscPoint& pt) {
    out << kind << ',' << sheet << ',' << num(pt.z.real()) << ',' << num(pt.z.imag()) << ','
        << num(pt.w.real()) << ',' << num(pt.w.imag()) << '\n';
  };
  for (const auto& s : chart.interior_mesh) row("interior", s.sheet, s.pt);
  for (std::size_t l = 0; l < chart.boundary_loops.size(); ++l) {
    for (const auto& pt : chart.boundary_loops[l]) row("boundary", static_cast<int>(l), pt);
  }
  for (const auto& b : chart.branch_points) row("branch", 0, {b, Complex{}});
}

void write_loop_csv(std::ostream& out, const std::vector<ClassResult>& classes, const GraphSpec& height,
                    int samples) {
  out << "m,n,theta,arg_z,arg_w,re_x,im_x\n";
  for (const auto& c : classes) {
    const auto& loop = c.best.loop;
    for (int l = 0; l < samples; ++l) {
      const double theta = 2.0 * std::numbers::pi * l / samples;
      const double az = loop.m * theta + trig_value(loop.sigma, loop.K, theta);
      const double aw = loop.n * theta + trig_value(loop.tau, loop.K, theta);
      const Complex x = height_value(height, unit_circle(az), unit_circle(aw));
      out << c.m << ',' << c.n << ',' << num(theta) << ',' << num(az) << ',' << num(aw) << ',' << num(x.real())
          << ',' << num(x.imag()) << '\n';
    }
  }
}

SpacePoint parse_space_point(std::string_view text) {
  Complex coords[3];
  std::string_view rest = text;
  for (int k = 0; k < 3; ++k) {
    const auto semi = rest.find(';');
    if ((k < 2) != (semi != std::string_view::npos)) {
      throw ConfigError("malformed point '" + std::string(text) + "' (expected re,im;re,im;re,im)");
    }
    std::string_view field = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    const auto comma = field.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError("malformed point '" + std::string(text) + "' (expected re,im;re,im;re,im)");
    }
    coords[k] = {parse_double(field.substr(0, comma), text), parse_double(field.substr(comma + 1), text)};
  }
  return {coords[0], coords[1], coords[2]};
}

std::string git_blob_hash(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob.append(content);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw Error("SHA-1 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

}  // namespace hullforge
