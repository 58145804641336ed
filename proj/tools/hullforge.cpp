#include <CLI11.hpp>

#include <iostream>

#include "hullforge/error.hpp"
#include "hullforge/pipeline.hpp"

namespace {

std::pair<int, int> parse_winding(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_m = 0, used_n = 0;
    const int m = std::stoi(text.substr(0, comma), &used_m);
    const int n = std::stoi(text.substr(comma + 1), &used_n);
    if (used_m != comma || used_n != text.size() - comma - 1) throw std::invalid_argument(text);
    return {m, n};
  } catch (const std::exception&) {
    throw hullforge::ConfigError("winding: expected m,n but got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hullforge;
  RunConfig cfg;
  std::string output_dir = cfg.output_dir.string();
  std::string winding = "1,0";

  CLI::App app{"Verification pipeline for the graph torus over the symbol p(z, w)"};
  app.set_config("--config", "", "TOML/INI file with any of the long options");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--symbol", cfg.symbol, "polynomial symbol p(z, w)")->capture_default_str();
  app.add_option("--factors", cfg.factors, "factors of the Jacobian determinant, ';'-separated")->delimiter(';');
  app.add_option("--grid-n", cfg.grid_n, "torus grid for zero-set tracing")->capture_default_str();
  app.add_option("--degree", cfg.degree, "separation polynomial degree")->capture_default_str();
  app.add_option("--K", cfg.K, "Fourier cutoff of boundary loops")->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "disc-search restarts per class")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed of every random draw")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker cap (0: hardware concurrency)")->capture_default_str();
  app.add_option("--max-winding", cfg.max_winding, "disc-search classes |m|,|n| <= this")->capture_default_str();
  app.add_option("--panel-size", cfg.panel_size, "off-hull separation panel size")->capture_default_str();
  app.add_option("--chart-resolution", cfg.chart_resolution, "variety trace resolution")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerances, "override a stage threshold, e.g. --tolerance isotropy_T 1e-11");
  app.add_option("--out", output_dir, "output directory")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "run every stage and write report.json");
  auto* jimbo = app.add_subcommand("jimbo", "Jacobian determinant, factor curves and hull assembly");
  auto* trace = app.add_subcommand("trace-variety", "trace w^2 = r(z) and report its topology");
  auto* certify = app.add_subcommand("certify", "membership certificate and separation for one point");
  certify->add_option("--point", cfg.point, "re,im;re,im;re,im")->required();
  auto* disc = app.add_subcommand("disc-search", "minimize the holomorphicity defect in one winding class");
  disc->add_option("--winding", winding, "m,n")->capture_default_str();
  disc->add_option("--height", cfg.height, "re_p | conj_p | p | zero | custom")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*verify) cfg.command = Command::verify;
    if (*jimbo) cfg.command = Command::jimbo;
    if (*trace) cfg.command = Command::trace_variety;
    if (*certify) cfg.command = Command::certify;
    if (*disc) {
      cfg.command = Command::disc_search;
      cfg.winding = parse_winding(winding);
    }
  } catch (const ConfigError& e) {
    std::cerr << "hullforge: config: " << e.what() << '\n';
    return kExitConfig;
  }
  cfg.output_dir = output_dir;
  return run_command(cfg, std::cout, std::cerr);
}
