#include "hullforge/discsearch.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "hullforge/parallel.hpp"
#include "hullforge/sampling.hpp"

namespace hullforge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxSamples = 1 << 16;
const Complex kI(0.0, 1.0);

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int default_samples(int K) {
  int n = 32;
  while (n < 4 * K) n *= 2;
  return n;
}

// Flat term list of a symbol; evaluates the value and both partials from
// shared power tables.
class CompiledPoly {
 public:
  struct Jet {
    Complex value, d_z, d_w;
  };

  CompiledPoly() = default;
  explicit CompiledPoly(const LaurentPoly2& p) {
    for (const auto& [e, c] : p.terms()) {
      terms_.push_back({e.z, e.w, c});
      zlo_ = std::min(zlo_, e.z - 1);
      zhi_ = std::max(zhi_, e.z);
      wlo_ = std::min(wlo_, e.w - 1);
      whi_ = std::max(whi_, e.w);
    }
  }

  Jet operator()(Complex z, Complex w) const {
    thread_local std::vector<Complex> zp, wp;
    powers(z, zlo_, zhi_, zp);
    powers(w, wlo_, whi_, wp);
    Jet out{};
    for (const auto& t : terms_) {
      const Complex zw = zp[t.j - zlo_] * wp[t.k - wlo_];
      out.value += t.c * zw;
      if (t.j != 0) out.d_z += (t.c * static_cast<double>(t.j)) * zp[t.j - 1 - zlo_] * wp[t.k - wlo_];
      if (t.k != 0) out.d_w += (t.c * static_cast<double>(t.k)) * zp[t.j - zlo_] * wp[t.k - 1 - wlo_];
    }
    return out;
  }

 private:
  struct Term {
    int j, k;
    Complex c;
  };

  static void powers(Complex x, int lo, int hi, std::vector<Complex>& out) {
    out.assign(static_cast<std::size_t>(hi - lo + 1), Complex{});
    Complex start = 1.0;
    // conj(x) / |x|^2 avoids the slow general complex division.
    const Complex step = lo < 0 ? std::conj(x) / std::norm(x) : x;
    for (int e = 0; e < std::abs(lo); ++e) start *= step;
    out[0] = start;
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = out[i - 1] * x;
  }

  std::vector<Term> terms_;
  int zlo_ = 0, zhi_ = 0, wlo_ = 0, whi_ = 0;
};

// Unnormalized complex DFT of one size in both directions. FFTW planning is
// not thread safe, so plan creation and destruction share a lock; execution
// only touches the object's own buffers.
class Fft {
 public:
  explicit Fft(int n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    in_ = fftw_alloc_complex(static_cast<std::size_t>(n));
    out_ = fftw_alloc_complex(static_cast<std::size_t>(n));
    forward_ = fftw_plan_dft_1d(n, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(n, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  ~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(in_);
    fftw_free(out_);
  }

  // y_k = sum_l x_l e^{-2 pi i k l / n}
  void forward(const std::vector<Complex>& x, std::vector<Complex>& y) { run(forward_, x, y); }
  // x_l = sum_k y_k e^{2 pi i k l / n}
  void backward(const std::vector<Complex>& y, std::vector<Complex>& x) { run(backward_, y, x); }

 private:
  static std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
  }

  void run(fftw_plan plan, const std::vector<Complex>& src, std::vector<Complex>& dst) {
    // std::complex<double> is layout compatible with fftw_complex.
    std::copy_n(src.data(), n_, reinterpret_cast<Complex*>(in_));
    fftw_execute(plan);
    dst.resize(static_cast<std::size_t>(n_));
    std::copy_n(reinterpret_cast<const Complex*>(out_), n_, dst.data());
  }

  int n_;
  fftw_complex* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// Defect of loops with fixed (m, n, K) sampled at fixed N.
class DefectEvaluator {
 public:
  DefectEvaluator(const GraphSpec& spec, int K, int N)
      : kind_(spec.height), K_(K), N_(N), fft_(N) {
    if (kind_ != Height::zero) {
      p_ = CompiledPoly(spec.symbol);
    }
  }

  int samples() const { return N_; }

  // Returns the defect; fills the gradient (sigma block then tau block) when asked.
  double evaluate(const BoundaryLoop& loop, std::array<double, 3>* per, std::vector<double>* grad,
                  bool* aliased = nullptr, std::array<double, 3>* total_power = nullptr,
                  std::array<double, 3>* mean_square = nullptr) {
    const std::size_t N = static_cast<std::size_t>(N_);
    auto& f = f_;
    auto& dsig = dsig_;
    auto& dtau = dtau_;
    for (auto& v : f) v.resize(N);
    dsig.resize(N);
    dtau.resize(N);
    series(loop.sigma, sig_);
    series(loop.tau, tau_);
    for (std::size_t l = 0; l < N; ++l) {
      const double theta = kTwoPi * static_cast<double>(l) / N_;
      const double sig = sig_[l], tau = tau_[l];
      const Complex z = std::polar(1.0, loop.m * theta + sig);
      const Complex w = std::polar(1.0, loop.n * theta + tau);
      f[0][l] = z;
      f[1][l] = w;
      if (kind_ == Height::zero) {
        f[2][l] = 0.0;
        dsig[l] = dtau[l] = 0.0;
        continue;
      }
      const auto jet = p_(z, w);
      const Complex v = jet.value;
      const Complex ds = jet.d_z * kI * z;
      const Complex dt = jet.d_w * kI * w;
      switch (kind_) {
        case Height::re_p:
          f[2][l] = v.real();
          dsig[l] = ds.real();
          dtau[l] = dt.real();
          break;
        case Height::conj_p:
          f[2][l] = std::conj(v);
          dsig[l] = std::conj(ds);
          dtau[l] = std::conj(dt);
          break;
        default:
          f[2][l] = v;
          dsig[l] = ds;
          dtau[l] = dt;
      }
    }

    const double n2 = static_cast<double>(N) * static_cast<double>(N);
    const std::size_t top_lo = (3 * N + 7) / 8, top_hi = N - top_lo;
    double value = 0.0;
    auto& spectrum = spectrum_;
    auto& g = g_;
    if (aliased) *aliased = false;
    for (int c = 0; c < 3; ++c) {
      fft_.forward(f[c], spectrum);
      double neg = 0.0, all = 0.0, top = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        const double pw = std::norm(spectrum[k]) / n2;
        all += pw;
        if (k >= N / 2) neg += pw;
        if (k >= top_lo && k <= top_hi) top += pw;
      }
      if (per) (*per)[c] = neg;
      if (total_power) (*total_power)[c] = all;
      if (mean_square) {
        double ms = 0.0;
        for (const auto& x : f[c]) ms += std::norm(x);
        (*mean_square)[c] = ms / static_cast<double>(N);
      }
      if (aliased && all > 1e-300 && top > 0.01 * all) *aliased = true;
      value += neg;
      if (grad) {
        for (std::size_t k = 0; k < N / 2; ++k) spectrum[k] = 0.0;
        fft_.backward(spectrum, g[c]);
        for (auto& v : g[c]) v /= static_cast<double>(N);
      }
    }
    if (!grad) return value;

    // dD/dparam = (2/N) Re sum_l conj(g_l) df_l/dparam, with df_l/dsigma_l = (i z_l, 0, dsig_l).
    auto& A = a_;
    auto& B = b_;
    A.resize(N);
    B.resize(N);
    for (std::size_t l = 0; l < N; ++l) {
      A[l] = 2.0 / N_ * (std::conj(g[0][l]) * kI * f[0][l] + std::conj(g[2][l]) * dsig[l]).real();
      B[l] = 2.0 / N_ * (std::conj(g[1][l]) * kI * f[1][l] + std::conj(g[2][l]) * dtau[l]).real();
    }
    const std::size_t block = 2 * K_ + 1;
    grad->assign(2 * block, 0.0);
    project(A, grad->data());
    project(B, grad->data() + block);
    return value;
  }

 private:
  // Values of c0 + sum_k c_k cos(k theta_l) + s_k sin(k theta_l) at the N sample angles.
  void series(const std::vector<double>& c, std::vector<double>& out) {
    coeff_.assign(static_cast<std::size_t>(N_), Complex{});
    coeff_[0] = c[0];
    for (int k = 1; k <= K_; ++k) coeff_[k] = Complex(c[k], -c[K_ + k]);
    fft_.backward(coeff_, values_);
    out.resize(values_.size());
    for (std::size_t l = 0; l < values_.size(); ++l) out[l] = values_[l].real();
  }

  // Adjoint of series: out[k] += sum_l a_l cos(k theta_l), out[K + k] += sum_l a_l sin(k theta_l).
  void project(const std::vector<double>& a, double* out) {
    values_.assign(a.begin(), a.end());
    fft_.forward(values_, coeff_);
    out[0] += coeff_[0].real();
    for (int k = 1; k <= K_; ++k) {
      out[k] += coeff_[k].real();
      out[K_ + k] -= coeff_[k].imag();
    }
  }

  Height kind_;
  int K_;
  int N_;
  CompiledPoly p_;
  Fft fft_;
  std::vector<Complex> f_[3], g_[3], dsig_, dtau_, spectrum_, coeff_, values_;
  std::vector<double> a_, b_, sig_, tau_;
};

void check_loop(const BoundaryLoop& loop) {
  const std::size_t block = 2 * static_cast<std::size_t>(loop.K) + 1;
  if (loop.K < 0 || loop.sigma.size() != block || loop.tau.size() != block) {
    throw std::invalid_argument("loop coefficient vectors must have length 2K+1");
  }
}

std::vector<double> pack(const BoundaryLoop& loop) {
  std::vector<double> x = loop.sigma;
  x.insert(x.end(), loop.tau.begin(), loop.tau.end());
  return x;
}

void unpack(const Eigen::VectorXd& x, BoundaryLoop& loop) {
  const std::size_t block = 2 * static_cast<std::size_t>(loop.K) + 1;
  loop.sigma.assign(x.data(), x.data() + block);
  loop.tau.assign(x.data() + block, x.data() + 2 * block);
}

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double gnorm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Limited-memory BFGS with Armijo backtracking.
template <class Objective>
LbfgsResult lbfgs(Objective&& fg, Eigen::VectorXd x, int max_iterations, double gtol) {
  constexpr int kMemory = 10;
  constexpr std::size_t kWindow = 50;
  std::deque<double> history;
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  Eigen::VectorXd g;
  double f = fg(x, g);
  LbfgsResult res;
  for (int it = 0; it < max_iterations; ++it) {
    res.iterations = it;
    const double gnorm = g.norm();
    if (gnorm < gtol) {
      res.converged = true;
      break;
    }
    // Two-loop recursion.
    Eigen::VectorXd d = -g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(d);
      d -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      d *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    } else {
      d *= std::min(1.0, 1.0 / gnorm);
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(d);
      d += (alpha[k] - beta) * s_hist[k];
    }
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g * std::min(1.0, 1.0 / gnorm);
      slope = g.dot(d);
    }

    double step = 1.0;
    Eigen::VectorXd x_new, g_new;
    double f_new = f;
    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      x_new = x + step * d;
      f_new = fg(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      // Minimizer of the quadratic through f, slope and f_new, kept in [0.1, 0.5] * step.
      const double curvature = f_new - f - slope * step;
      double next = 0.5 * step;
      if (std::isfinite(f_new) && curvature > 0.0) next = -slope * step * step / (2.0 * curvature);
      step = std::clamp(next, 0.1 * step, 0.5 * step);
    }
    if (!accepted) {
      res.converged = gnorm < gtol || f <= 1e-24;
      break;
    }
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    f = f_new;
    res.iterations = it + 1;
    // Stagnation: less than a 1e-8 relative decrease over the last kWindow steps.
    history.push_back(f);
    if (history.size() > kWindow) {
      if (history.front() - f <= 1e-8 * std::abs(f)) break;
      history.pop_front();
    }
  }
  res.x = std::move(x);
  res.f = f;
  res.gnorm = g.norm();
  if (res.gnorm < gtol) res.converged = true;
  return res;
}

BoundaryLoop random_loop(int m, int n, int K, double amplitude, std::mt19937_64& rng) {
  BoundaryLoop loop = BoundaryLoop::constant(m, n, K);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> level(0.25, 1.0);
  for (auto* coeffs : {&loop.sigma, &loop.tau}) {
    (*coeffs)[0] = phase(rng);
    double l1 = 0.0;
    for (int k = 1; k <= K; ++k) {
      (*coeffs)[k] = unit(rng) / k;
      (*coeffs)[K + k] = unit(rng) / k;
      l1 += std::abs((*coeffs)[k]) + std::abs((*coeffs)[K + k]);
    }
    // Sup norm of the oscillating part is at most its l1 norm.
    if (l1 > 0.0) {
      const double target = amplitude * level(rng);
      for (std::size_t k = 1; k < coeffs->size(); ++k) (*coeffs)[k] *= target / l1;
    }
  }
  return loop;
}

bool better(const DefectResult& a, const DefectResult& b) {
  if (a.defect != b.defect) return a.defect < b.defect;
  if (a.loop.sigma != b.loop.sigma) return a.loop.sigma < b.loop.sigma;
  return a.loop.tau < b.loop.tau;
}

DefectResult run_from(BoundaryLoop loop, const GraphSpec& height, const SearchOptions& options) {
  int N = default_samples(loop.K);
  // Start at a sample count that resolves the initial loop (warm starts may need more).
  for (;;) {
    DefectEvaluator ev(height, loop.K, N);
    bool aliased = false;
    ev.evaluate(loop, nullptr, nullptr, &aliased);
    if (!aliased || N >= kMaxSamples) break;
    N *= 2;
  }
  int iterations = 0;
  LbfgsResult res;
  for (;;) {
    DefectEvaluator ev(height, loop.K, N);
    auto fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      BoundaryLoop trial = loop;
      unpack(x, trial);
      std::vector<double> grad;
      const double v = ev.evaluate(trial, nullptr, &grad);
      g = Eigen::Map<const Eigen::VectorXd>(grad.data(), static_cast<Eigen::Index>(grad.size()));
      return v;
    };
    const std::vector<double> x0 = pack(loop);
    res = lbfgs(fg, Eigen::Map<const Eigen::VectorXd>(x0.data(), static_cast<Eigen::Index>(x0.size())),
                options.max_iterations - iterations, options.gradient_tolerance);
    iterations += res.iterations;
    unpack(res.x, loop);
    bool aliased = false;
    ev.evaluate(loop, nullptr, nullptr, &aliased);
    if (!aliased || N >= kMaxSamples || iterations >= options.max_iterations) break;
    N *= 2;
  }
  DefectResult out = defect(loop, height, N);
  out.iterations = iterations;
  out.gradient_norm = res.gnorm;
  out.converged = res.converged;
  return out;
}

}  // namespace

BoundaryLoop BoundaryLoop::constant(int m, int n, int K) {
  if (K < 0) throw std::invalid_argument("K must be nonnegative");
  return {m, n, K, std::vector<double>(2 * K + 1, 0.0), std::vector<double>(2 * K + 1, 0.0)};
}

BoundaryLoop BoundaryLoop::embedded(int new_K) const {
  if (new_K < K) throw std::invalid_argument("cannot embed into a smaller cutoff");
  BoundaryLoop out = constant(m, n, new_K);
  for (auto [src, dst] : {std::pair{&sigma, &out.sigma}, std::pair{&tau, &out.tau}}) {
    (*dst)[0] = (*src)[0];
    for (int k = 1; k <= K; ++k) {
      (*dst)[k] = (*src)[k];
      (*dst)[new_K + k] = (*src)[K + k];
    }
  }
  return out;
}

BoundaryLoop BoundaryLoop::rotated(double shift) const {
  BoundaryLoop out = *this;
  for (auto [src, dst, winding] : {std::tuple{&sigma, &out.sigma, m}, std::tuple{&tau, &out.tau, n}}) {
    (*dst)[0] = (*src)[0] + winding * shift;
    for (int k = 1; k <= K; ++k) {
      const double a = (*src)[k], b = (*src)[K + k];
      const double c = std::cos(k * shift), s = std::sin(k * shift);
      (*dst)[k] = a * c + b * s;
      (*dst)[K + k] = b * c - a * s;
    }
  }
  return out;
}

double trig_value(const std::vector<double>& coeffs, int K, double theta) {
  double v = coeffs[0];
  for (int k = 1; k <= K; ++k) v += coeffs[k] * std::cos(k * theta) + coeffs[K + k] * std::sin(k * theta);
  return v;
}

DefectResult defect(const BoundaryLoop& loop, const GraphSpec& height, int N) {
  check_loop(loop);
  if (!is_power_of_two(N) || N < 4 * loop.K || N < 4) {
    throw std::invalid_argument("N must be a power of two with N >= 4K");
  }
  DefectResult out;
  out.loop = loop;
  for (;;) {
    DefectEvaluator ev(height, loop.K, N);
    bool aliased = false;
    out.defect = ev.evaluate(loop, &out.per_coordinate_defect, nullptr, &aliased);
    out.samples = N;
    if (!aliased || N >= kMaxSamples) break;
    N *= 2;
  }
  return out;
}

DefectGradient defect_with_gradient(const BoundaryLoop& loop, const GraphSpec& height, int N) {
  check_loop(loop);
  if (!is_power_of_two(N) || N < 4 * loop.K || N < 4) {
    throw std::invalid_argument("N must be a power of two with N >= 4K");
  }
  DefectEvaluator ev(height, loop.K, N);
  DefectGradient out;
  out.value = ev.evaluate(loop, &out.per_coordinate, &out.gradient);
  return out;
}

PowerBalance power_balance(const BoundaryLoop& loop, const GraphSpec& height, int N) {
  check_loop(loop);
  DefectEvaluator ev(height, loop.K, N);
  PowerBalance pb;
  ev.evaluate(loop, nullptr, nullptr, nullptr, &pb.spectral, &pb.mean_square);
  return pb;
}

double gradient_check(const BoundaryLoop& loop, const GraphSpec& height, double step) {
  check_loop(loop);
  const int N = default_samples(loop.K);
  DefectEvaluator ev(height, loop.K, N);
  std::vector<double> analytic;
  ev.evaluate(loop, nullptr, &analytic);
  std::vector<double> x = pack(loop);
  double worst = 0.0, scale = 0.0;
  std::vector<double> fd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    BoundaryLoop plus = loop, minus = loop;
    std::vector<double> xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    unpack(Eigen::Map<Eigen::VectorXd>(xp.data(), static_cast<Eigen::Index>(xp.size())), plus);
    unpack(Eigen::Map<Eigen::VectorXd>(xm.data(), static_cast<Eigen::Index>(xm.size())), minus);
    fd[i] = (ev.evaluate(plus, nullptr, nullptr) - ev.evaluate(minus, nullptr, nullptr)) / (2.0 * step);
    scale = std::max(scale, std::abs(fd[i]));
  }
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(analytic[i] - fd[i]));
  return worst / std::max(scale, 1e-8);
}

DefectResult minimize_defect(int m, int n, const GraphSpec& height, int K, int restarts,
                             const SearchOptions& options) {
  if (K < 0 || K > 64) throw std::invalid_argument("K must lie in [0, 64]");
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");

  std::vector<BoundaryLoop> starts;
  for (int r = 0; r < restarts; ++r) {
    auto rng = derived_rng(options.seed, {static_cast<std::uint32_t>(m + 1024), static_cast<std::uint32_t>(n + 1024),
                                          static_cast<std::uint32_t>(K), static_cast<std::uint32_t>(r)});
    starts.push_back(random_loop(m, n, K, options.init_amplitude, rng));
  }
  for (const auto& warm : options.warm_starts) {
    if (warm.m == m && warm.n == n && warm.K <= K) starts.push_back(warm.embedded(K));
  }

  std::vector<DefectResult> results(starts.size());
  parallel_for(starts.size(), options.threads,
               [&](std::size_t i) { results[i] = run_from(starts[i], height, options); });
  DefectResult best = results.front();
  for (const auto& r : results) {
    if (better(r, best)) best = r;
  }
  return best;
}

std::vector<ClassResult> search_winding_classes(const GraphSpec& height, int max_abs, int K, int restarts,
                                                const SearchOptions& options, bool include_trivial,
                                                const std::vector<ClassResult>* warm) {
  std::vector<ClassResult> classes;
  for (int m = -max_abs; m <= max_abs; ++m) {
    for (int n = -max_abs; n <= max_abs; ++n) {
      if (m == 0 && n == 0 && !include_trivial) continue;
      classes.push_back({m, n, K, restarts, {}});
    }
  }
  parallel_for(classes.size(), options.threads, [&](std::size_t i) {
    SearchOptions local = options;
    local.threads = 1;
    local.warm_starts.clear();
    if (warm) {
      for (const auto& w : *warm) {
        if (w.m == classes[i].m && w.n == classes[i].n) local.warm_starts.push_back(w.best.loop);
      }
    }
    classes[i].best = minimize_defect(classes[i].m, classes[i].n, height, K, restarts, local);
  });
  return classes;
}

}  // namespace hullforge
