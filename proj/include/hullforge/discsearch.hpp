#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hullforge/geometry.hpp"

namespace hullforge {

/// Loop theta -> (e^{i(m theta + sigma(theta))}, e^{i(n theta + tau(theta))}) on
/// T^2. sigma and tau are real trigonometric polynomials of degree K stored as
/// [a0, a1..aK, b1..bK] for a0 + sum a_k cos(k theta) + b_k sin(k theta).
struct BoundaryLoop {
  int m = 0;
  int n = 0;
  int K = 0;
  std::vector<double> sigma;
  std::vector<double> tau;

  static BoundaryLoop constant(int m, int n, int K);
  /// Same loop expressed with a larger cutoff (zero-padded coefficients).
  BoundaryLoop embedded(int new_K) const;
  /// The reparametrized loop theta -> loop(theta + shift).
  BoundaryLoop rotated(double shift) const;
};

double trig_value(const std::vector<double>& coeffs, int K, double theta);

struct DefectResult {
  BoundaryLoop loop;
  double defect = 0.0;
  std::array<double, 3> per_coordinate_defect{};
  int samples = 0;  // N actually used
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Negative-frequency spectral power of the three boundary functions z, w and
/// x = height(z, w), sampled at N points. N must be a power of two >= 4K; it
/// is doubled (up to 2^16) while the top quarter of any spectrum holds more
/// than 1% of that coordinate's power.
DefectResult defect(const BoundaryLoop& loop, const GraphSpec& height, int N);

/// Defect at a fixed N together with its analytic gradient with respect to
/// (sigma, tau) coefficients, sigma first.
struct DefectGradient {
  double value = 0.0;
  std::array<double, 3> per_coordinate{};
  std::vector<double> gradient;
};

DefectGradient defect_with_gradient(const BoundaryLoop& loop, const GraphSpec& height, int N);

/// Total spectral power and mean-square sample power of each coordinate
/// (they agree by Parseval); used for consistency checks.
struct PowerBalance {
  std::array<double, 3> spectral{};
  std::array<double, 3> mean_square{};
};
PowerBalance power_balance(const BoundaryLoop& loop, const GraphSpec& height, int N);

/// Max relative discrepancy ||g_analytic - g_fd||_inf / max(||g_fd||_inf, 1e-8)
/// between the analytic gradient and central differences.
double gradient_check(const BoundaryLoop& loop, const GraphSpec& height, double step = 1e-6);

struct SearchOptions {
  int max_iterations = 5000;
  double gradient_tolerance = 1e-9;
  double init_amplitude = 0.5;
  std::uint64_t seed = 1;
  int threads = 0;
  std::vector<BoundaryLoop> warm_starts;  // extra initial loops, embedded to K if needed
};

/// Multi-start quasi-Newton (L-BFGS) minimization of the defect over loops in
/// the winding class (m, n). Returns the best result; ties are broken by
/// lexicographic coefficient order so the outcome is scheduling independent.
DefectResult minimize_defect(int m, int n, const GraphSpec& height, int K, int restarts,
                             const SearchOptions& options = {});

struct ClassResult {
  int m = 0;
  int n = 0;
  int K = 0;
  int restarts = 0;
  DefectResult best;
};

/// Every winding class with |m|, |n| <= max_abs; (0, 0) only when requested
/// since its minimizers are constant loops. Warm starts, when given, are
/// matched to classes by winding.
std::vector<ClassResult> search_winding_classes(const GraphSpec& height, int max_abs, int K, int restarts,
                                                const SearchOptions& options, bool include_trivial = false,
                                                const std::vector<ClassResult>* warm = nullptr);

}  // namespace hullforge
