#pragma once

// Sufficient frame condition from the M^1 modulus of continuity of the
// window: if omega_delta(g) < 1 and the hole of the point set is at most
// delta, the Gabor system is a frame.

#include "gdl/pointset.hpp"
#include "gdl/tf_core.hpp"

namespace gdl {

struct ModulusQuadrature {
  int u_steps = 64;      // angles per ring of the polar u-grid
  int u_rings = 2;       // rings at radii delta * i / u_rings, i = 1..u_rings
  int phase_steps = 64;  // uniform theta grid on [0, 2 pi)
};

namespace detail {

// min over the theta grid of ||e^{i theta} pi(u) g - g||_{M^1}, given the
// field of g.
inline double phase_min_m1(const Window& g, const TFField& Vg, PhasePoint u, int phase_steps) {
  const TFField Vu = stft_field(tf_shift(g.signal(), u), g);
  // Entries where both fields vanish to working precision contribute
  // nothing for any theta; skip them.
  double peak = 0.0;
  for (std::size_t k = 0; k < Vu.values.size(); ++k)
    peak = std::max({peak, std::abs(Vu.values[k]), std::abs(Vg.values[k])});
  const double floor = 1e-17 * peak;
  std::vector<Complex> a, b;
  for (std::size_t k = 0; k < Vu.values.size(); ++k) {
    if (std::abs(Vu.values[k]) + std::abs(Vg.values[k]) > floor) {
      a.push_back(Vu.values[k]);
      b.push_back(Vg.values[k]);
    }
  }
  double best = kInf;
  for (int t = 0; t < phase_steps; ++t) {
    const Complex e = std::polar(1.0, kTwoPi * t / phase_steps);
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const Complex d = e * a[k] - b[k];
      s += std::sqrt(d.real() * d.real() + d.imag() * d.imag());
    }
    best = std::min(best, s);
  }
  return Vg.cell_area() * best;
}

}  // namespace detail

// ||pi(z) g - pi(w) g||_{M^1} measured directly.
inline double m1_distance(const Window& g, PhasePoint z, PhasePoint w) {
  return mp_norm(tf_shift(g.signal(), z) - tf_shift(g.signal(), w), g, 1.0);
}

// ||e^{i theta} pi(u) g - g||_{M^1}
inline double m1_phase_distance(const Window& g, PhasePoint u, double theta) {
  Signal d = std::polar(1.0, theta) * tf_shift(g.signal(), u);
  d -= g.signal();
  return mp_norm(d, g, 1.0);
}

// Grid maximum over |u| <= delta of the phase-minimized M^1 distance
// between pi(u) g and g.
inline double m1_modulus(const Window& g, double delta, const ModulusQuadrature& q = {}) {
  if (!(delta >= 0.0)) throw PreconditionError("delta must be nonnegative");
  if (delta > g.grid().P) throw PreconditionError("delta exceeds one period of the finite model");
  if (q.u_steps < 1 || q.u_rings < 1 || q.phase_steps < 1) throw PreconditionError("quadrature sizes must be positive");
  if (delta == 0.0) return 0.0;
  const TFField Vg = stft_field(g.signal(), g);
  std::vector<PhasePoint> us;
  for (int i = 1; i <= q.u_rings; ++i)
    for (int k = 0; k < q.u_steps; ++k) {
      const double r = delta * i / q.u_rings, a = kTwoPi * k / q.u_steps;
      us.push_back({r * std::cos(a), r * std::sin(a)});
    }
  std::vector<double> vals(us.size());
  parallel_for(us.size(), [&](std::size_t i) { vals[i] = detail::phase_min_m1(g, Vg, us[i], q.phase_steps); });
  return *std::max_element(vals.begin(), vals.end());
}

struct DeltaSearch {
  double margin = 0.05;     // certify only when omega < 1 - margin
  double tolerance = 1e-3;  // bisection width
  double initial = 0.25;    // first bracket guess
};

// Largest delta (to the search tolerance) with omega_delta < 1 - margin.
// Returns {delta, omega at delta}.
inline std::pair<double, double> critical_delta(const Window& g, const ModulusQuadrature& q = {},
                                                const DeltaSearch& s = {}) {
  if (!(s.margin >= 0.0 && s.margin < 1.0)) throw PreconditionError("margin must lie in [0, 1)");
  if (!(s.tolerance > 0.0)) throw PreconditionError("bisection tolerance must be positive");
  const double target = 1.0 - s.margin;
  const double cap = 0.5 * g.grid().P;
  double lo = 0.0, lo_val = 0.0, hi = std::min(s.initial, cap);
  double hi_val = m1_modulus(g, hi, q);
  while (hi_val < target) {
    lo = hi;
    lo_val = hi_val;
    if (hi >= cap) return {lo, lo_val};
    hi = std::min(2.0 * hi, cap);
    hi_val = m1_modulus(g, hi, q);
  }
  while (hi - lo > s.tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double v = m1_modulus(g, mid, q);
    if (v < target) {
      lo = mid;
      lo_val = v;
    } else {
      hi = mid;
    }
  }
  return {lo, lo_val};
}

enum class Verdict { certified_frame, inconclusive };

inline const char* to_string(Verdict v) {
  return v == Verdict::certified_frame ? "certified-frame" : "inconclusive";
}

struct Certificate {
  double delta = 0.0;
  double omega_delta = 0.0;
  double hole_rho = 0.0;
  double margin = 0.0;
  Verdict verdict = Verdict::inconclusive;
  ModulusQuadrature quadrature;
  double bisection_tolerance = 0.0;
};

inline Certificate certificate_for(double delta, double omega, double rho, const ModulusQuadrature& q,
                                   const DeltaSearch& s) {
  Certificate c;
  c.delta = delta;
  c.omega_delta = omega;
  c.hole_rho = rho;
  c.margin = s.margin;
  c.quadrature = q;
  c.bisection_tolerance = s.tolerance;
  c.verdict = (omega < 1.0 - s.margin && rho <= delta) ? Verdict::certified_frame : Verdict::inconclusive;
  return c;
}

inline Certificate certify_frame(const Window& g, const PointSet& S, const Box& domain,
                                 const ModulusQuadrature& q = {}, const DeltaSearch& s = {}) {
  if (S.empty()) throw PreconditionError("certification needs a nonempty point set");
  const double rho = hole(S, domain);
  const auto [delta, omega] = critical_delta(g, q, s);
  return certificate_for(delta, omega, rho, q, s);
}

// Hole of a point set on the torus [-P/2, P/2)^2 of the finite model,
// measured with periodic images.
inline double torus_hole(const PointSet& S, double period) {
  if (S.empty()) throw PreconditionError("hole of an empty set is undefined");
  PointSet reduced = S;
  if (S.dim() == 2) {
    auto c = S.coords();
    for (auto& v : c) v = reduce_centered(v, period);
    reduced = PointSet(2, std::move(c));
  }
  const auto images = periodize(reduced, period, -0.5 * period, 0.5 * period);
  return hole(images, Box::cube(S.dim(), -0.5 * period, 0.5 * period));
}

}  // namespace gdl
