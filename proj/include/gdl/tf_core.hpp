#pragma once

// Finite periodic time-frequency model.
//
// A signal lives on L samples t_j = (j - (L-1)/2) h, j = 0..L-1, with step
// h = 1/sqrt(L) and period P = sqrt(L). The grid is symmetric about t = 0,
// so for even L it is offset by half a sample from the origin. Frequencies
// are multiples of 1/P, making time and frequency resolution identical.
// Norms and inner products carry the quadrature weight h.

#include <span>

#include <unsupported/Eigen/FFT>

#include "gdl/common.hpp"

namespace gdl {

struct SignalGrid {
  int L = 0;
  double h = 0.0;          // time step 1/sqrt(L)
  double P = 0.0;          // period sqrt(L)
  double freq_step = 0.0;  // 1/P

  double time(int j) const { return (j - 0.5 * (L - 1)) * h; }
  double cell_area() const { return h * freq_step; }

  friend bool operator==(const SignalGrid& a, const SignalGrid& b) { return a.L == b.L; }
};

inline SignalGrid make_grid(int L) {
  if (L < 4) throw InvalidGridError("grid size L must be >= 4, got " + std::to_string(L));
  SignalGrid g;
  g.L = L;
  g.P = std::sqrt(static_cast<double>(L));
  g.h = 1.0 / g.P;
  g.freq_step = 1.0 / g.P;
  return g;
}

struct PhasePoint {
  double x = 0.0;
  double xi = 0.0;
};

inline PhasePoint operator+(PhasePoint a, PhasePoint b) { return {a.x + b.x, a.xi + b.xi}; }
inline PhasePoint operator-(PhasePoint a, PhasePoint b) { return {a.x - b.x, a.xi - b.xi}; }

class Signal {
 public:
  Signal() = default;
  Signal(SignalGrid grid, ComplexVec samples) : grid_(grid), samples_(std::move(samples)) {
    if (static_cast<int>(samples_.size()) != grid_.L)
      throw DimensionError("signal has " + std::to_string(samples_.size()) +
                           " samples, grid expects " + std::to_string(grid_.L));
  }
  explicit Signal(SignalGrid grid) : grid_(grid), samples_(grid.L) {}

  const SignalGrid& grid() const { return grid_; }
  const ComplexVec& samples() const { return samples_; }
  ComplexVec& samples() { return samples_; }
  int size() const { return grid_.L; }
  const Complex& operator[](int j) const { return samples_[j]; }
  Complex& operator[](int j) { return samples_[j]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& v : samples_) s += std::norm(v);
    return grid_.h * s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  Signal& operator*=(Complex c) {
    for (auto& v : samples_) v *= c;
    return *this;
  }
  Signal& operator+=(const Signal& o) {
    require_same_grid(o);
    for (int j = 0; j < size(); ++j) samples_[j] += o.samples_[j];
    return *this;
  }
  Signal& operator-=(const Signal& o) {
    require_same_grid(o);
    for (int j = 0; j < size(); ++j) samples_[j] -= o.samples_[j];
    return *this;
  }
  friend Signal operator*(Complex c, Signal s) { return s *= c; }
  friend Signal operator+(Signal a, const Signal& b) { return a += b; }
  friend Signal operator-(Signal a, const Signal& b) { return a -= b; }

  void require_same_grid(const Signal& o) const {
    if (!(grid_ == o.grid_))
      throw DimensionError("grid mismatch: L=" + std::to_string(grid_.L) + " vs L=" +
                           std::to_string(o.grid_.L));
  }

 private:
  SignalGrid grid_{};
  ComplexVec samples_;
};

// <f, g> = h * sum_j f_j conj(g_j)
inline Complex inner(const Signal& f, const Signal& g) {
  f.require_same_grid(g);
  Complex s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += f[j] * std::conj(g[j]);
  return f.grid().h * s;
}

// A unit-norm analysis window.
class Window {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit Window(Signal s) : signal_(std::move(s)) {
    const double n = signal_.norm();
    if (std::abs(n - 1.0) > kNormTolerance)
      throw PreconditionError("window must have unit norm, got " + std::to_string(n));
  }

  // Rescales a nonzero signal to unit norm.
  static Window normalized(Signal s) {
    const double n = s.norm();
    if (!(n > 0.0)) throw PreconditionError("cannot normalize a zero signal");
    s *= Complex(1.0 / n);
    return Window(std::move(s));
  }

  const Signal& signal() const { return signal_; }
  const SignalGrid& grid() const { return signal_.grid(); }

 private:
  Signal signal_;
};

namespace detail {

inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

// Signed frequency index of DFT bin k.
inline int centered_bin(int k, int L) { return k < (L + 1) / 2 ? k : k - L; }

inline bool near_integer(double r, long long& out) {
  const double n = std::round(r);
  if (std::abs(r - n) <= 1e-9 && std::abs(n) < 1e15) {
    out = static_cast<long long>(n);
    return true;
  }
  return false;
}

}  // namespace detail

// Translation by x: cyclic rotation when x is a multiple of h, otherwise a
// Fourier-domain phase ramp (exactly unitary).
inline Signal time_shift(const Signal& f, double x) {
  const auto& grid = f.grid();
  const int L = grid.L;
  long long steps = 0;
  if (detail::near_integer(x / grid.h, steps)) {
    const int s = static_cast<int>(((steps % L) + L) % L);
    Signal out(grid);
    for (int j = 0; j < L; ++j) out[(j + s) % L] = f[j];
    return out;
  }
  auto& fft = detail::fft_engine();
  ComplexVec spec;
  fft.fwd(spec, f.samples());
  for (int k = 0; k < L; ++k) {
    const double nu = detail::centered_bin(k, L) / grid.P;
    spec[k] *= std::polar(1.0, -kTwoPi * nu * x);
  }
  ComplexVec out;
  fft.inv(out, spec);
  return Signal(grid, std::move(out));
}

// Modulation by e^{2 pi i xi t_j}.
inline Signal modulate(const Signal& f, double xi) {
  const auto& grid = f.grid();
  Signal out(grid);
  for (int j = 0; j < grid.L; ++j) out[j] = f[j] * std::polar(1.0, kTwoPi * xi * grid.time(j));
  return out;
}

// pi(z) f (t) = e^{2 pi i xi t} f(t - x). z is split into its nearest grid
// point z0 and a sub-step remainder d; the remainder acts first, the grid
// part exactly: pi(z) = e^{2 pi i d_xi x0} M_{xi0} T_{x0} M_{d_xi} T_{d_x}.
// A localized f then never meets the seam of the torus or the Nyquist bin
// during the fractional step.
inline Signal tf_shift(const Signal& f, PhasePoint z) {
  const auto& grid = f.grid();
  const double x0 = std::round(z.x / grid.h) * grid.h;
  const double xi0 = std::round(z.xi / grid.freq_step) * grid.freq_step;
  const double dx = z.x - x0, dxi = z.xi - xi0;
  Signal out = (dx == 0.0) ? f : time_shift(f, dx);
  if (dxi != 0.0) out = modulate(out, dxi);
  if (x0 != 0.0) out = time_shift(out, x0);
  if (xi0 != 0.0) out = modulate(out, xi0);
  if (dxi != 0.0 && x0 != 0.0) out *= std::polar(1.0, kTwoPi * dxi * x0);
  return out;
}

namespace detail {

inline double periodized_profile(const SignalGrid& grid, double t, double support,
                                 const std::function<double(double)>& profile) {
  const int copies = static_cast<int>(std::ceil(support / grid.P)) + 1;
  double v = 0.0;
  for (int k = -copies; k <= copies; ++k) v += profile(t + k * grid.P);
  return v;
}

}  // namespace detail

// Periodized 2^{1/4} e^{-pi t^2}, renormalized to unit norm. Even about t=0.
inline Window gaussian_window(const SignalGrid& grid) {
  Signal s(grid);
  const double c = std::pow(2.0, 0.25);
  for (int j = 0; j < grid.L; ++j) {
    s[j] = detail::periodized_profile(grid, grid.time(j), 7.0,
                                      [c](double t) { return c * std::exp(-kPi * t * t); });
  }
  return Window::normalized(std::move(s));
}

// Periodized C^2 bump (1 - (t/w)^2)^3 on |t| < w, unit norm.
inline Window bump_window(const SignalGrid& grid, double half_width = 1.0) {
  if (!(half_width > 0.0)) throw PreconditionError("bump half-width must be positive");
  Signal s(grid);
  for (int j = 0; j < grid.L; ++j) {
    s[j] = detail::periodized_profile(grid, grid.time(j), half_width, [half_width](double t) {
      const double u = t / half_width;
      if (std::abs(u) >= 1.0) return 0.0;
      const double v = 1.0 - u * u;
      return v * v * v;
    });
  }
  return Window::normalized(std::move(s));
}

// Full phase-space sampling of an STFT: values(a, b) = V_g f(a h, b / P).
struct TFField {
  SignalGrid grid;
  ComplexVec values;  // row-major, time index a, frequency index b

  const Complex& at(int a, int b) const { return values[static_cast<std::size_t>(a) * grid.L + b]; }
  Complex& at(int a, int b) { return values[static_cast<std::size_t>(a) * grid.L + b]; }
  double cell_area() const { return grid.cell_area(); }
  PhasePoint point(int a, int b) const { return {a * grid.h, b * grid.freq_step}; }
};

// V_g f(z) = <f, pi(z) g> at the requested points.
inline ComplexVec stft(const Signal& f, const Window& g, std::span<const PhasePoint> points) {
  f.require_same_grid(g.signal());
  ComplexVec out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = inner(f, tf_shift(g.signal(), points[i])); });
  return out;
}

inline TFField stft_field(const Signal& f, const Window& g) {
  f.require_same_grid(g.signal());
  const auto& grid = f.grid();
  const int L = grid.L;
  TFField field{grid, ComplexVec(static_cast<std::size_t>(L) * L)};
  // e^{-2 pi i b t_0 / P} absorbs the symmetric time origin.
  ComplexVec phase(L);
  for (int b = 0; b < L; ++b) phase[b] = grid.h * std::polar(1.0, -kTwoPi * b * grid.time(0) / grid.P);
  const auto& fs = f.samples();
  const auto& gs = g.signal().samples();
  parallel_for(static_cast<std::size_t>(L), [&](std::size_t ai) {
    const int a = static_cast<int>(ai);
    ComplexVec prod(L), spec;
    for (int j = 0; j < L; ++j) prod[j] = fs[j] * std::conj(gs[((j - a) % L + L) % L]);
    detail::fft_engine().fwd(spec, prod);
    for (int b = 0; b < L; ++b) field.at(a, b) = phase[b] * spec[b];
  });
  return field;
}

// Discrete modulation-space norm of a field: p in {1, 2, inf}.
inline double mp_norm(const TFField& F, double p) {
  if (p == 1.0) {
    double s = 0.0;
    for (const auto& v : F.values) s += std::abs(v);
    return F.cell_area() * s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (const auto& v : F.values) s += std::norm(v);
    return std::sqrt(F.cell_area() * s);
  }
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (const auto& v : F.values) m = std::max(m, std::abs(v));
    return m;
  }
  throw PreconditionError("unsupported modulation norm exponent p=" + std::to_string(p) +
                          " (expected 1, 2 or inf)");
}

// ||f||_{M^p} measured with window g.
inline double mp_norm(const Signal& f, const Window& g, double p) { return mp_norm(stft_field(f, g), p); }

}  // namespace gdl
