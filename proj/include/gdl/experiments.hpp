#pragma once

// Experiment pipelines shared by the command-line tool and the acceptance
// suite: frame-bound sweeps under deformations, the annuli counterexample,
// certification runs and seeded lower-bound transfer trials.

#include <random>

#include "gdl/certifier.hpp"
#include "gdl/deform.hpp"
#include "gdl/frame.hpp"
#include "gdl/molecule.hpp"
#include "gdl/pointset.hpp"
#include "gdl/tf_core.hpp"

namespace gdl {

inline Window make_window(const std::string& name, const SignalGrid& grid) {
  if (name == "gaussian") return gaussian_window(grid);
  if (name == "bump") return bump_window(grid);
  throw PreconditionError("unknown window '" + name + "' (expected gaussian or bump)");
}

// Points of S reduced to the torus [-P/2, P/2)^2; duplicates after
// reduction are an error.
inline PointSet to_torus(const PointSet& S, double period) {
  auto c = S.coords();
  for (auto& v : c) v = reduce_centered(v, period);
  return PointSet(S.dim(), std::move(c));
}

struct FramePoint {
  double param = 0.0;
  FrameReport report;
};

// Frame bounds of the torus lattice under random jitter of size eps (one
// seeded draw per eps).
inline std::vector<FramePoint> jitter_sweep(const Window& g, const PointSet& base, const std::vector<double>& eps,
                                            std::uint64_t seed) {
  std::vector<FramePoint> out;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const auto T = random_jitter(base, eps[i], seed);
    const auto S = to_torus(apply_deformation(T, base), g.grid().P);
    out.push_back({eps[i], frame_bounds(g, S)});
  }
  return out;
}

// Frame bounds of the torus lattice under the periodic dilation T_n.
inline std::vector<FramePoint> dilation_sweep(const Window& g, const PointSet& base, const std::vector<int>& ns) {
  std::vector<FramePoint> out;
  for (int n : ns) {
    const auto S = to_torus(apply_deformation(torus_dilation(n, g.grid().P), base), g.grid().P);
    out.push_back({static_cast<double>(n), frame_bounds(g, S)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annuli counterexample

struct CounterexampleConfig {
  int n = 8;
  double spacing = 0.5;
  std::vector<double> radii{10.0, 20.0, 40.0};
  int L = 256;
};

struct CounterexampleRow {
  double R = 0.0;
  double hole_base = 0.0;
  double hole_deformed = 0.0;
};

struct CounterexampleResult {
  std::vector<CounterexampleRow> rows;
  int annulus = 0;                  // odd annulus index holding the probe square
  double probe_radius = 0.0;        // center of the probe square on the x-axis
  FrameReport restricted_base, restricted_deformed;
  PointSet base_points, deformed_points;  // within the largest radius
  std::size_t odd_annuli_points = 0;      // deformed points in odd annuli (beyond B_0)
};

// Lattice spacing * Z^2 shifted by the generic offset spacing * (sqrt2, sqrt3) / 20.
inline PointSet offset_lattice(double spacing, const Box& box) {
  Eigen::MatrixXd gen = spacing * Eigen::MatrixXd::Identity(2, 2);
  const double ox = spacing * std::sqrt(2.0) / 20.0, oy = spacing * std::sqrt(3.0) / 20.0;
  const Box shifted({box.lo[0] - ox, box.lo[1] - oy}, {box.hi[0] - ox, box.hi[1] - oy});
  auto c = lattice(gen, shifted).coords();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += i % 2 == 0 ? ox : oy;
  return PointSet(2, std::move(c));
}

inline CounterexampleResult run_counterexample(const CounterexampleConfig& cfg) {
  if (cfg.radii.empty()) throw PreconditionError("counterexample needs at least one radius");
  CounterexampleResult res;
  const auto T = annuli_deformation(cfg.n);
  for (double R : cfg.radii) {
    const Box box = Box::cube(2, -R, R);
    const auto base = offset_lattice(cfg.spacing, box);
    const auto def = restrict(apply_deformation(T, base), box);
    res.rows.push_back({R, hole(base, box), hole(def, box)});
    if (R == *std::max_element(cfg.radii.begin(), cfg.radii.end())) {
      res.base_points = base;
      res.deformed_points = def;
    }
  }
  for (std::size_t i = 0; i < res.deformed_points.size(); ++i) {
    const auto p = res.deformed_points.point(i);
    const int l = annulus_index(std::hypot(p[0], p[1]), cfg.n);
    if (l % 2 == 1) ++res.odd_annuli_points;
  }

  // Probe: a P x P square centered in the odd annulus around the largest radius,
  // moved to the origin of the finite model.
  const auto grid = make_grid(cfg.L);
  const double q = 1.0 + 1.0 / cfg.n;
  const double Rmax = *std::max_element(cfg.radii.begin(), cfg.radii.end());
  int l = annulus_index(Rmax, cfg.n);
  if (l % 2 == 0) ++l;
  res.annulus = l;
  res.probe_radius = 0.5 * (std::pow(q, l) + std::pow(q, l + 1));
  const double half = 0.5 * grid.P;
  const Box probe({res.probe_radius - half, -half}, {res.probe_radius + half, half});
  const double reach = q * (probe.hi[0] + 1.0);
  const auto source = offset_lattice(cfg.spacing, Box::cube(2, -reach, reach));
  const auto g = gaussian_window(grid);
  auto restricted = [&](const PointSet& S) {
    std::vector<double> c;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const auto p = S.point(i);
      if (p[0] >= probe.lo[0] && p[0] < probe.hi[0] && p[1] >= probe.lo[1] && p[1] < probe.hi[1]) {
        c.push_back(p[0] - res.probe_radius);
        c.push_back(p[1]);
      }
    }
    if (c.empty()) return FrameReport{0.0, 0.0, kInf, 0, grid.L};
    return frame_bounds(g, PointSet(2, std::move(c)));
  };
  res.restricted_base = restricted(source);
  res.restricted_deformed = restricted(apply_deformation(T, source));
  return res;
}

// ---------------------------------------------------------------------------
// Certification

struct CertifyRun {
  double a = 0.0;       // requested spacing
  double spacing = 0.0; // snapped spacing
  Certificate certificate;
  FrameReport frame;
};

// Certifies square torus lattices against one shared critical delta and
// records the actual frame bounds next to each verdict.
inline std::vector<CertifyRun> certify_lattices(const Window& g, const std::vector<double>& spacings,
                                                const ModulusQuadrature& q = {}, const DeltaSearch& s = {}) {
  const auto [delta, omega] = critical_delta(g, q, s);
  std::vector<CertifyRun> out;
  for (double a : spacings) {
    const auto T = torus_lattice(g.grid(), a, a);
    CertifyRun r;
    r.a = a;
    r.spacing = T.a;
    r.certificate = certificate_for(delta, omega, torus_hole(T.points, g.grid().P), q, s);
    r.frame = frame_bounds(g, T.points);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lower-bound transfer trials

// <pi(gamma) g, pi(lambda) g> for the unit Gaussian on the real line:
// e^{-2 pi i gamma_1 d_2} e^{-pi i d_1 d_2} e^{-pi |d|^2 / 2}, d = lambda - gamma.
inline Complex gaussian_gabor_inner(PhasePoint lambda, PhasePoint gamma) {
  const PhasePoint d = lambda - gamma;
  return std::polar(std::exp(-kPi * (d.x * d.x + d.xi * d.xi) / 2.0),
                    -kTwoPi * gamma.x * d.xi - kPi * d.x * d.xi);
}

struct TransferTrial {
  std::vector<PhasePoint> rows, cols;
  ComplexMatrix A;       // normalized to smallest singular value 1
  Envelope theta;        // Gaussian envelope scaled like A
  double sigma_min_raw = 0.0;
};

// Rows: the lattice (2/3) Z^2 in [-10/3, 10/3]^2. Columns: the lattice 1.5 Z^2 in
// [-2.25, 2.25]^2 with seeded jitter of size 0.3. A(lambda, gamma) is the
// Gaussian Gabor inner product divided by its smallest singular value.
inline TransferTrial transfer_trial(std::uint64_t seed) {
  TransferTrial t;
  const double a = 2.0 / 3.0;
  for (int i = -5; i <= 5; ++i)
    for (int k = -5; k <= 5; ++k) t.rows.push_back({a * i, a * k});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int i = -1; i <= 2; ++i)
    for (int k = -1; k <= 2; ++k) t.cols.push_back({1.5 * i - 0.75 + u(rng), 1.5 * k - 0.75 + u(rng)});
  const auto nr = static_cast<Eigen::Index>(t.rows.size()), nc = static_cast<Eigen::Index>(t.cols.size());
  t.A.resize(nr, nc);
  for (Eigen::Index r = 0; r < nr; ++r)
    for (Eigen::Index c = 0; c < nc; ++c)
      t.A(r, c) = gaussian_gabor_inner(t.rows[static_cast<std::size_t>(r)], t.cols[static_cast<std::size_t>(c)]);
  Eigen::JacobiSVD<ComplexMatrix> svd(t.A);
  t.sigma_min_raw = svd.singularValues()(nc - 1);
  if (!(t.sigma_min_raw > 1e-8)) throw NumericError("transfer trial matrix is numerically singular");
  t.A /= t.sigma_min_raw;
  t.theta = gaussian_envelope(2, 0.25, 1.0 / t.sigma_min_raw);
  return t;
}

struct TransferTrialResult {
  std::uint64_t seed = 0;
  double sigma_min_svd = 0.0;
  TransferReport report;
};

inline std::vector<TransferTrialResult> transfer_suite(int trials, std::uint64_t master_seed, int budget = 4) {
  if (trials < 1) throw PreconditionError("transfer suite needs at least one trial");
  std::vector<TransferTrialResult> out(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    auto& r = out[static_cast<std::size_t>(i)];
    r.seed = derive_seed(master_seed, static_cast<std::uint64_t>(i));
    const auto t = transfer_trial(r.seed);
    Eigen::JacobiSVD<ComplexMatrix> svd(t.A);
    r.sigma_min_svd = svd.singularValues()(svd.singularValues().size() - 1);
    r.report = verify_lower_bound_transfer(t.A, t.rows, t.cols, t.theta, 2.0, {1.0, kInf}, 0.01, budget, r.seed);
  }
  return out;
}

}  // namespace gdl
