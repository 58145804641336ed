#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's algebra, root finding, or spectral code.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
inline const C I{0.0, 1.0};
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline C p(C z, C w) { return 1.0 - 4.0 * z * z + 4.0 * w * w - z * z * w * w; }
inline C p_z(C z, C w) { return -8.0 * z - 2.0 * z * w * w; }
inline C p_w(C z, C w) { return 8.0 * w - 2.0 * z * z * w; }

// Reflected symbol written out by hand: (zw)^-2 (z^2 w^2 - 4 w^2 + 4 z^2 - 1).
inline C h(C z, C w) { return (z * z * w * w - 4.0 * w * w + 4.0 * z * z - 1.0) / (z * z * w * w); }
inline C h_z(C z, C w) { return 8.0 / (z * z * z) + 2.0 / (z * z * z * w * w); }
inline C h_w(C z, C w) { return -8.0 / (w * w * w) + 2.0 / (z * z * w * w * w); }

// The factored Jacobian determinant -16 (zw)^-3 (z - iw)(z + iw) p.
inline C delta_factored(C z, C w) { return -16.0 / std::pow(z * w, 3) * (z - I * w) * (z + I * w) * p(z, w); }

inline C r(C z) { return (4.0 * z * z - 1.0) / (4.0 - z * z); }

inline C torus(double angle) { return std::polar(1.0, angle); }

// Distance between two angles on the circle.
inline double angle_gap(double a, double b) { return std::abs(std::arg(std::polar(1.0, a - b))); }

// Naive O(N^2) DFT: c_k = (1/N) sum_l f_l e^{-2 pi i k l / N}.
inline std::vector<C> dft(const std::vector<C>& f) {
  const std::size_t n = f.size();
  std::vector<C> c(n);
  for (std::size_t k = 0; k < n; ++k) {
    C s{};
    for (std::size_t l = 0; l < n; ++l) s += f[l] * std::polar(1.0, -kTwoPi * double(k * l % n) / double(n));
    c[k] = s / double(n);
  }
  return c;
}

// Power at negative frequencies (indices N/2 .. N-1 of the DFT).
inline double negative_power(const std::vector<C>& f) {
  const auto c = dft(f);
  double s = 0.0;
  for (std::size_t k = c.size() / 2; k < c.size(); ++k) s += std::norm(c[k]);
  return s;
}

inline double trig(const std::vector<double>& a, int K, double theta) {
  double v = a[0];
  for (int k = 1; k <= K; ++k) v += a[k] * std::cos(k * theta) + a[K + k] * std::sin(k * theta);
  return v;
}

// Holomorphicity defect of a loop on the graph of Re p, written directly from the definition.
template <class Height>
double loop_defect(int m, int n, int K, const std::vector<double>& sigma, const std::vector<double>& tau, int N,
                   Height&& height) {
  std::vector<C> z(N), w(N), x(N);
  for (int l = 0; l < N; ++l) {
    const double th = kTwoPi * l / N;
    z[l] = std::polar(1.0, m * th + trig(sigma, K, th));
    w[l] = std::polar(1.0, n * th + trig(tau, K, th));
    x[l] = height(z[l], w[l]);
  }
  return negative_power(z) + negative_power(w) + negative_power(x);
}

inline double rel(C a, C b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Uniform point of the open polydisc of the given radius.
inline C disc_point(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), kTwoPi * u(rng));
}

}  // namespace oracle
