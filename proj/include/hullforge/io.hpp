#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hullforge/discsearch.hpp"
#include "hullforge/hullcert.hpp"
#include "hullforge/jimbo.hpp"
#include "hullforge/variety.hpp"

namespace hullforge {

using Json = nlohmann::json;

Json complex_json(Complex c);  // [re, im]
Json point_json(const SpacePoint& p);

Json to_json(const HullReport& report);
Json topology_json(const VarietyChart& chart);
Json to_json(const SeparationCertificate& cert);
Json to_json(const SeparationOutcome& outcome);
Json to_json(const MembershipCertificate& cert);
Json to_json(const ClassResult& result);
Json isotropy_json(const GraphSpec& spec, double defect_max, int grid_n);

/// Columns: factor_index, component, s, t.
void write_curve_csv(std::ostream& out, const std::vector<TorusCurve>& curves);
/// Columns: kind, sheet, re_z, im_z, re_w, im_w.
void write_chart_csv(std::ostream& out, const VarietyChart& chart);
/// Columns: m, n, theta, arg_z, arg_w, re_x, im_x for the best loop of each class.
void write_loop_csv(std::ostream& out, const std::vector<ClassResult>& classes, const GraphSpec& height,
                    int samples = 256);

/// Parses "re,im;re,im;re,im" into (z, w, eta).
SpacePoint parse_space_point(std::string_view text);

/// Git blob object id (SHA-1 of "blob <len>\0" + content), lowercase hex.
std::string git_blob_hash(std::string_view content);

}  // namespace hullforge
