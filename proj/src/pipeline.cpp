#include "hullforge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

#include "hullforge/error.hpp"
#include "hullforge/parallel.hpp"
#include "hullforge/sampling.hpp"

namespace hullforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double tol(const std::map<std::string, double>& t, const char* key) { return t.at(key); }

Json check(bool ok, Json value) { return {{"value", std::move(value)}, {"passed", ok}}; }

bool all_passed(const Json& checks) {
  for (const auto& [key, c] : checks.items()) {
    if (c.is_object() && c.contains("passed") && !c["passed"].get<bool>()) return false;
  }
  return true;
}

// Stage implementations share this state.
struct Context {
  Context(const RunConfig& c, std::map<std::string, double> t) : cfg(c), tolerances(std::move(t)) {}

  const RunConfig& cfg;
  std::map<std::string, double> tolerances;
  bool reference = false;  // symbol is the default one, so its expected outcomes apply
  LaurentPoly2 p;
  JimboData jimbo;
  std::vector<LaurentPoly2> factors;
  std::optional<HullReport> hull;
  std::optional<VarietyChart> chart;
  std::vector<ClassResult> classes;
};

Json stage_laurent(Context& ctx) {
  const auto& t = ctx.tolerances;
  const LaurentPoly2 h = reflect(ctx.p);
  auto rng = derived_rng(ctx.cfg.seed, {1});
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Complex z = unit_circle(angle(rng)), w = unit_circle(angle(rng));
    worst = std::max(worst, std::abs(eval(h, z, w) - std::conj(eval(ctx.p, z, w))));
  }
  Json checks;
  checks["reflection_max_deviation"] = check(worst <= tol(t, "reflection"), worst);
  checks["involution"] = check(reflect(h) == ctx.p, reflect(h) == ctx.p);
  if (ctx.reference) {
    const LaurentPoly2 z = LaurentPoly2::z(), w = LaurentPoly2::w();
    const Complex i{0.0, 1.0};
    const LaurentPoly2 expected = LaurentPoly2::monomial(-16.0, -3, -3) * (z - i * w) * (z + i * w) * ctx.p;
    const LaurentPoly2 diff = det2(ctx.p, h) - expected;
    checks["determinant_factorization_exact"] = check(diff.is_zero(), to_string(diff));
  }
  return checks;
}

Json stage_jimbo(Context& ctx) {
  const auto& t = ctx.tolerances;
  ctx.jimbo = build_jimbo_data(ctx.p);
  ctx.factors = factor_list(ctx.cfg, ctx.p, ctx.jimbo.delta);
  HullOptions opts;
  opts.grid_n = ctx.cfg.grid_n;
  opts.v_tolerance = tol(t, "v_condition");
  ctx.hull = assemble_hull(ctx.p, ctx.factors, opts);
  const auto& report = *ctx.hull;

  Json checks;
  checks["hull_report"] = to_json(report);
  for (const auto& rec : report.per_factor) {
    if (rec.in_J && rec.constant_value) {
      const double c = std::abs(*rec.constant_value);
      checks["constant_value_" + std::to_string(rec.curve.factor_index)] =
          check(!ctx.reference || c <= tol(t, "constant_value"), c);
    }
  }
  if (ctx.reference) {
    checks["J"] = check(report.J == std::vector<int>{3}, report.J);
    bool excluded_by_v = report.per_factor.size() == 3;
    for (std::size_t j = 0; j < 2 && excluded_by_v; ++j) {
      const auto& rec = report.per_factor[j];
      excluded_by_v = rec.nonempty && rec.strict && !rec.v_condition && !rec.in_J;
    }
    checks["factors_1_2_fail_v_condition"] = check(excluded_by_v, excluded_by_v);
  }
  return checks;
}

Json stage_variety(Context& ctx) {
  const auto& t = ctx.tolerances;
  Json checks;
  const FactorRecord* annulus = nullptr;
  for (const auto& rec : ctx.hull->per_factor) {
    if (rec.in_J && rec.candidate.kind == CandidateKind::double_cover_variety) annulus = &rec;
  }
  if (!annulus) {
    checks["double_cover_in_J"] = check(!ctx.reference, false);
    return checks;
  }
  const int res = ctx.cfg.chart_resolution;
  ctx.chart = trace_variety(annulus->candidate.r, res);
  const auto& chart = *ctx.chart;
  const VarietyChart fine = trace_variety(annulus->candidate.r, 4 * res);
  checks["topology"] = topology_json(chart);
  const bool stable = fine.euler_char == chart.euler_char && fine.genus == chart.genus &&
                      fine.boundary_count == chart.boundary_count;
  checks["refinement_stable"] = check(stable, stable);
  const double residual = residual_on_variety(ctx.p, chart);
  checks["p_on_variety_max"] = check(residual <= tol(t, "variety_residual"), residual);
  const auto contain = containment_check(annulus->candidate.r, 4096);
  checks["contained_in_bidisc"] = check(contain.contained, contain.max_modulus);
  if (ctx.reference) {
    double branch_err = chart.branch_points.size() == 2 ? 0.0 : 1.0;
    if (chart.branch_points.size() == 2) {
      branch_err = std::min(std::abs(chart.branch_points[0] + 0.5) + std::abs(chart.branch_points[1] - 0.5),
                            std::abs(chart.branch_points[0] - 0.5) + std::abs(chart.branch_points[1] + 0.5));
    }
    checks["branch_points_pm_half"] = check(branch_err <= tol(t, "branch_points"), branch_err);
    const bool annulus_topology = chart.boundary_count == 2 && chart.genus == 0 && chart.euler_char == 0;
    checks["genus0_two_boundaries"] = check(annulus_topology, annulus_topology);
  }
  return checks;
}

Json stage_geometry(Context& ctx) {
  const auto& t = ctx.tolerances;
  const GraphSpec T{Height::re_p, ctx.p}, T1{Height::conj_p, ctx.p};
  Json checks;
  const double iso_t = isotropy_defect(T, 256);
  checks["isotropy_T"] = check(iso_t <= tol(t, "isotropy_T"), iso_t);
  const double iso_t1 = isotropy_defect(T1, 128);
  checks["isotropy_T1"] = check(!ctx.reference || iso_t1 >= tol(t, "isotropy_T1_floor"), iso_t1);
  checks["isotropy_convention"] = isotropy_json(T, iso_t, 256)["convention"];

  // F(T1 point over (z, w)) against the T point over the same (z, w): an upper bound on the distance to T.
  double transport = 0.0;
  for (const auto& x : graph_sample(T1, 64)) transport = std::max(transport, distance(shear_F(x, ctx.p), lift(T, x.z, x.w)));
  checks["shear_maps_T1_to_T"] = check(transport <= tol(t, "transport"), transport);
  if (ctx.chart) {
    double moved = 0.0;
    for (const auto& q : annulus_points(ctx.p, *ctx.chart, 200)) moved = std::max(moved, distance(shear_F(q, ctx.p), q));
    checks["shear_fixes_annulus"] = check(moved <= tol(t, "fixed_points"), moved);
  }
  return checks;
}

Json stage_hullcert(Context& ctx) {
  const auto& t = ctx.tolerances;
  Json checks;
  if (!ctx.reference || !ctx.chart) {
    checks["skipped"] = "panel points are specific to the default symbol";
    return checks;
  }
  const GraphSpec T{Height::re_p, ctx.p};
  SeparationOptions opts;
  opts.margin = tol(t, "separation_margin");
  const SpacePoint inside{0.0, Complex(0.0, 0.5), 0.0};
  const auto member = certify_membership(inside, ctx.p, *ctx.chart);
  checks["membership_certificate"] = check(member.certified, to_json(member));
  const double dist = distance_to_graph(inside, T, 256);
  checks["inside_point_distance_to_T"] = check(dist >= tol(t, "distance_floor"), dist);
  const auto fail = separate(inside, T, ctx.cfg.degree, opts);
  checks["inside_point_not_separated"] =
      check(!fail.certificate && fail.best_ratio <= tol(t, "inside_ratio_max"), to_json(fail));

  std::vector<SpacePoint> panel{{0.0, Complex(0.0, 0.9), 0.0}};
  for (const auto& q : outside_panel(ctx.p, ctx.chart->r, ctx.cfg.panel_size, ctx.cfg.seed)) panel.push_back(q);
  std::vector<SeparationOutcome> outcomes(panel.size());
  parallel_for(panel.size(), ctx.cfg.threads, [&](std::size_t i) { outcomes[i] = separate(panel[i], T, ctx.cfg.degree, opts); });
  Json list = Json::array();
  bool all = true;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < panel.size(); ++i) {
    all = all && outcomes[i].certificate.has_value();
    worst = std::min(worst, outcomes[i].best_ratio);
    list.push_back({{"point", point_json(panel[i])}, {"separated", outcomes[i].certificate.has_value()},
                    {"ratio", outcomes[i].best_ratio}});
  }
  checks["outside_panel_separated"] = check(all, {{"points", list}, {"worst_ratio", worst}});
  checks["evidence_note"] =
      "non-separation is evidence of membership bounded by the degree and the sampling density; "
      "certificates are conclusive up to the validation margin";
  return checks;
}

Json stage_discsearch(Context& ctx) {
  const auto& t = ctx.tolerances;
  const RunConfig& cfg = ctx.cfg;
  SearchOptions opts;
  opts.seed = cfg.seed;
  opts.threads = cfg.threads;
  Json checks;

  const GraphSpec flat{Height::zero, {}};
  const auto control = minimize_defect(1, 0, flat, cfg.K, 1, opts);
  checks["control_disc_defect"] = check(control.defect <= tol(t, "disc_control"), control.defect);

  const GraphSpec T{Height::re_p, ctx.p};
  auto rng = derived_rng(cfg.seed, {2});
  std::uniform_real_distribution<double> coeff(-0.2, 0.2);
  BoundaryLoop probe = BoundaryLoop::constant(1, 1, cfg.K);
  for (auto* v : {&probe.sigma, &probe.tau}) {
    for (auto& x : *v) x = coeff(rng);
  }
  const double gc = gradient_check(probe, T);
  checks["gradient_check"] = check(gc <= tol(t, "gradient_check"), gc);

  ctx.classes = search_winding_classes(T, cfg.max_winding, cfg.K, cfg.restarts, opts);
  double floor = std::numeric_limits<double>::infinity();
  Json per_class = Json::array();
  for (const auto& c : ctx.classes) {
    floor = std::min(floor, c.best.defect);
    per_class.push_back(to_json(c));
  }
  checks["classes"] = per_class;
  checks["nonconstant_defect_floor"] = check(floor >= tol(t, "disc_floor_min"), floor);
  checks["heuristic_search"] = true;
  return checks;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  writer(out);
}

Json config_json(const RunConfig& cfg, const std::map<std::string, double>& tolerances) {
  Json j;
  j["command"] = to_string(cfg.command);
  j["symbol"] = cfg.symbol;
  j["symbol_hash"] = git_blob_hash(cfg.symbol);
  j["factors"] = cfg.factors;
  j["grid_n"] = cfg.grid_n;
  j["degree"] = cfg.degree;
  j["K"] = cfg.K;
  j["restarts"] = cfg.restarts;
  j["seed"] = cfg.seed;
  j["max_winding"] = cfg.max_winding;
  j["panel_size"] = cfg.panel_size;
  j["chart_resolution"] = cfg.chart_resolution;
  j["tolerances"] = tolerances;
  return j;
}

std::map<std::string, double> merged_tolerances(const RunConfig& cfg) {
  auto t = default_tolerances();
  for (const auto& [k, v] : cfg.tolerances) t[k] = v;
  return t;
}

std::pair<int, std::string> classify(const std::exception& e) {
  if (dynamic_cast<const DegenerateSymbolError*>(&e)) return {kExitDegenerateSymbol, "degenerate symbol"};
  if (dynamic_cast<const FactorizationError*>(&e)) return {kExitFactorization, "factorization"};
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e)) return {kExitConfig, "config"};
  return {kExitStageFailure, "error"};
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::verify: return "verify";
    case Command::jimbo: return "jimbo";
    case Command::trace_variety: return "trace-variety";
    case Command::certify: return "certify";
    case Command::disc_search: return "disc-search";
  }
  return "?";
}

Command command_from_string(const std::string& name) {
  for (Command c : {Command::verify, Command::jimbo, Command::trace_variety, Command::certify, Command::disc_search}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("command: unknown command '" + name + "'");
}

std::map<std::string, double> default_tolerances() {
  return {
      {"reflection", 1e-12},       {"v_condition", 1e-8},         {"constant_value", 1e-10},
      {"variety_residual", 1e-10}, {"branch_points", 1e-8},       {"isotropy_T", 1e-12},
      {"isotropy_T1_floor", 0.1},  {"transport", 1e-10},          {"fixed_points", 1e-12},
      {"membership", 1e-8},        {"distance_floor", 0.9},       {"inside_ratio_max", 1.001},
      {"separation_margin", 0.05}, {"disc_control", 1e-8},        {"gradient_check", 1e-5},
      {"disc_floor_min", 1e-6},
  };
}

void validate(const RunConfig& cfg) {
  if (cfg.grid_n < 64) throw ConfigError("grid_n: must be at least 64");
  if (cfg.degree < 0 || cfg.degree > kMaxSeparationDegree) throw ConfigError("degree: must lie in [0, 12]");
  if (cfg.K < 0 || cfg.K > 64) throw ConfigError("K: must lie in [0, 64]");
  if (cfg.restarts < 1) throw ConfigError("restarts: must be at least 1");
  if (cfg.threads < 0) throw ConfigError("threads: must be nonnegative");
  if (cfg.max_winding < 0 || cfg.max_winding > 8) throw ConfigError("max_winding: must lie in [0, 8]");
  if (cfg.panel_size < 0) throw ConfigError("panel_size: must be nonnegative");
  if (cfg.chart_resolution < 8) throw ConfigError("chart_resolution: must be at least 8");
  if (cfg.output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  const auto known = default_tolerances();
  for (const auto& [k, v] : cfg.tolerances) {
    if (!known.contains(k)) throw ConfigError("tolerances: unknown key '" + k + "'");
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("tolerances." + k + ": must be finite and nonnegative");
  }
}

std::vector<LaurentPoly2> factor_list(const RunConfig& cfg, const LaurentPoly2& p, const LaurentPoly2& delta) {
  std::vector<LaurentPoly2> out;
  if (!cfg.factors.empty()) {
    for (const auto& f : cfg.factors) out.push_back(parse(f));
  } else if (p == parse(kDefaultSymbol)) {
    out = {parse("z - i*w"), parse("z + i*w"), p};
  } else {
    out = {delta};
  }
  return out;
}

std::vector<SpacePoint> outside_panel(const LaurentPoly2& p, const Rational& r, int count, std::uint64_t seed) {
  auto rng = derived_rng(seed, {3});
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> radius(0.0, 0.8);
  const GraphSpec T{Height::re_p, p};
  std::vector<SpacePoint> out;
  for (int i = 0; i < count; ++i) {
    if (i % 2 == 0) {
      SpacePoint x = lift(T, unit_circle(angle(rng)), unit_circle(angle(rng)));
      x.eta += (i % 4 == 0) ? 0.5 : -0.5;
      out.push_back(x);
      continue;
    }
    for (;;) {
      const Complex z = std::polar(radius(rng), angle(rng));
      const Complex w = std::polar(0.9, angle(rng));
      if (std::abs(w * w - r(z)) >= 0.25) {
        out.push_back({z, w, 0.0});
        break;
      }
    }
  }
  return out;
}

std::vector<SpacePoint> annulus_points(const LaurentPoly2& p, const VarietyChart& chart, int count) {
  std::vector<SpacePoint> out;
  const auto& mesh = chart.interior_mesh;
  if (mesh.empty() || count <= 0) return out;
  for (int i = 0; i < count; ++i) {
    const auto& s = mesh[static_cast<std::size_t>(i) * mesh.size() / static_cast<std::size_t>(count)];
    out.push_back({s.pt.z, s.pt.w, eval(p, s.pt.z, s.pt.w)});
  }
  return out;
}

VerifyResult run_verify(const RunConfig& cfg) {
  validate(cfg);
  Context ctx{cfg, merged_tolerances(cfg)};
  ctx.p = parse(cfg.symbol);
  ctx.reference = ctx.p == parse(kDefaultSymbol);

  VerifyResult result;
  result.report["schema"] = kReportSchema;
  result.report["config"] = config_json(cfg, ctx.tolerances);
  result.report["heuristic"] = {{"hullcert_failures_are_evidence_only", true}, {"discsearch", {{"heuristic_search", true}}}};
  result.report["stages"] = Json::array();

  using StageFn = Json (*)(Context&);
  const std::pair<const char*, StageFn> stages[] = {
      {"laurent", stage_laurent},   {"jimbo", stage_jimbo},       {"variety", stage_variety},
      {"geometry", stage_geometry}, {"hullcert", stage_hullcert}, {"discsearch", stage_discsearch},
  };
  for (const auto& [name, fn] : stages) {
    StageResult stage{name, false, {}};
    try {
      stage.details = fn(ctx);
      stage.passed = all_passed(stage.details);
    } catch (const std::exception& e) {
      const auto [code, kind] = classify(e);
      stage.details = {{"error", e.what()}, {"kind", kind}};
      result.exit_code = code;
    }
    result.report["stages"].push_back({{"name", stage.name}, {"passed", stage.passed}, {"checks", stage.details}});
    result.stages.push_back(stage);
    if (!stage.passed) {
      if (result.exit_code == kExitPass) result.exit_code = kExitStageFailure;
      result.failed_stage = name;
      break;
    }
  }
  result.report["passed"] = result.exit_code == kExitPass;
  result.report["failed_stage"] = result.failed_stage.empty() ? Json(nullptr) : Json(result.failed_stage);
  if (ctx.hull) result.report["hull"] = ctx.hull->hull_description;
  result.hull = std::move(ctx.hull);
  result.chart = std::move(ctx.chart);
  result.classes = std::move(ctx.classes);
  return result;
}

namespace {

int command_verify(const RunConfig& cfg, std::ostream& log) {
  const VerifyResult result = run_verify(cfg);
  const auto& dir = cfg.output_dir;
  write_text(dir / "report.json", result.report.dump(2) + "\n");
  if (result.hull) {
    std::vector<TorusCurve> curves;
    for (const auto& rec : result.hull->per_factor) curves.push_back(rec.curve);
    write_file(dir / "curves.csv", [&](std::ostream& o) { write_curve_csv(o, curves); });
  }
  if (result.chart) write_file(dir / "chart.csv", [&](std::ostream& o) { write_chart_csv(o, *result.chart); });
  if (!result.classes.empty()) {
    const GraphSpec T{Height::re_p, parse(cfg.symbol)};
    write_file(dir / "loops.csv", [&](std::ostream& o) { write_loop_csv(o, result.classes, T); });
  }
  for (const auto& stage : result.stages) log << (stage.passed ? "[ok]   " : "[FAIL] ") << stage.name << '\n';
  if (!result.failed_stage.empty()) log << "first failing stage: " << result.failed_stage << '\n';
  if (result.report.contains("hull")) log << "hull: " << result.report["hull"].get<std::string>() << '\n';
  return result.exit_code;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    validate(cfg);
    std::filesystem::create_directories(cfg.output_dir);
    const auto& dir = cfg.output_dir;
    const auto tolerances = merged_tolerances(cfg);
    Json report;
    report["schema"] = kReportSchema;
    report["config"] = config_json(cfg, tolerances);
    const LaurentPoly2 p = parse(cfg.symbol);

    switch (cfg.command) {
      case Command::verify:
        return command_verify(cfg, log);
      case Command::jimbo: {
        const auto jd = build_jimbo_data(p);
        HullOptions opts;
        opts.grid_n = cfg.grid_n;
        opts.v_tolerance = tolerances.at("v_condition");
        const auto hull = assemble_hull(p, factor_list(cfg, p, jd.delta), opts);
        report["hull_report"] = to_json(hull);
        std::vector<TorusCurve> curves;
        for (const auto& rec : hull.per_factor) curves.push_back(rec.curve);
        write_file(dir / "curves.csv", [&](std::ostream& o) { write_curve_csv(o, curves); });
        log << "J = " << Json(hull.J).dump() << "\nhull: " << hull.hull_description << '\n';
        break;
      }
      case Command::trace_variety: {
        const auto curve = trace_torus_zero_set(p, cfg.grid_n);
        const auto cand = hull_candidate_for(curve, p);
        if (cand.kind != CandidateKind::double_cover_variety) {
          throw ConfigError("symbol: not of the form w^2 = r(z) with a nonempty torus zero set");
        }
        const auto chart = trace_variety(cand.r, cfg.chart_resolution);
        report["topology"] = topology_json(chart);
        report["p_on_variety_max"] = residual_on_variety(p, chart);
        write_file(dir / "chart.csv", [&](std::ostream& o) { write_chart_csv(o, chart); });
        log << report["topology"].dump(2) << '\n';
        break;
      }
      case Command::certify: {
        if (cfg.point.empty()) throw ConfigError("point: required for certify");
        const SpacePoint q = parse_space_point(cfg.point);
        const auto curve = trace_torus_zero_set(p, cfg.grid_n);
        const auto cand = hull_candidate_for(curve, p);
        if (cand.kind != CandidateKind::double_cover_variety) {
          throw ConfigError("symbol: membership certificates need a w^2 = r(z) symbol");
        }
        const auto chart = trace_variety(cand.r, cfg.chart_resolution);
        SeparationOptions opts;
        opts.margin = tolerances.at("separation_margin");
        report["membership"] = to_json(certify_membership(q, p, chart));
        report["separation"] = to_json(separate(q, GraphSpec{Height::re_p, p}, cfg.degree, opts));
        report["evidence_note"] = "a failed separation is evidence, not proof, of hull membership";
        log << "membership certified: " << report["membership"]["certified"].dump()
            << "\nseparated: " << report["separation"]["separated"].dump() << '\n';
        break;
      }
      case Command::disc_search: {
        const GraphSpec spec{height_from_string(cfg.height), p};
        SearchOptions opts;
        opts.seed = cfg.seed;
        opts.threads = cfg.threads;
        ClassResult result{cfg.winding.first, cfg.winding.second, cfg.K, cfg.restarts, {}};
        result.best = minimize_defect(result.m, result.n, spec, cfg.K, cfg.restarts, opts);
        report["height"] = spec.tag();
        report["result"] = to_json(result);
        write_file(dir / "loops.csv", [&](std::ostream& o) { write_loop_csv(o, {result}, spec); });
        log << "best defect: " << result.best.defect << '\n';
        break;
      }
    }
    write_text(dir / "report.json", report.dump(2) + "\n");
    return kExitPass;
  } catch (const std::exception& e) {
    const auto [code, kind] = classify(e);
    err << "hullforge: " << kind << ": " << e.what() << '\n';
    return code;
  }
}

}  // namespace hullforge
