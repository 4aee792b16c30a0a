#pragma once

// Gabor systems in the finite model: analysis and Gram matrices, frame and
// Riesz bounds, synthesis, twisted shifts and heuristic l^p lower bounds.

#include <random>

#include <Eigen/Dense>

#include "gdl/pointset.hpp"
#include "gdl/tf_core.hpp"

namespace gdl {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Largest L for which dense eigensolves are attempted.
inline constexpr int kDenseCutoff = 1024;

inline std::vector<PhasePoint> phase_points(const PointSet& S) {
  if (S.dim() != 2) throw DimensionError("phase-space point sets must be two-dimensional");
  std::vector<PhasePoint> pts(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) pts[i] = {S.point(i)[0], S.point(i)[1]};
  return pts;
}

// Lattice a' Z x b' Z on the torus [-P/2, P/2)^2, with the spacings snapped
// to a' = P / round(P / a) so the lattice closes up over one period.
struct TorusLattice {
  double a = 0.0, b = 0.0;
  int na = 0, nb = 0;
  PointSet points;
};

inline double commensurate_spacing(double a, double period) {
  if (!(a > 0.0)) throw PreconditionError("lattice spacing must be positive");
  const double k = std::max(1.0, std::round(period / a));
  return period / k;
}

inline TorusLattice torus_lattice(const SignalGrid& grid, double a, double b) {
  TorusLattice t;
  t.a = commensurate_spacing(a, grid.P);
  t.b = commensurate_spacing(b, grid.P);
  t.na = static_cast<int>(std::lround(grid.P / t.a));
  t.nb = static_cast<int>(std::lround(grid.P / t.b));
  std::vector<double> c;
  c.reserve(2 * static_cast<std::size_t>(t.na) * t.nb);
  for (int i = 0; i < t.na; ++i)
    for (int k = 0; k < t.nb; ++k) {
      c.push_back(reduce_centered(i * t.a, grid.P));
      c.push_back(reduce_centered(k * t.b, grid.P));
    }
  t.points = PointSet(2, std::move(c));
  return t;
}

struct AnalysisMatrix {
  SignalGrid grid;
  std::vector<PhasePoint> points;  // reduced to [-P/2, P/2)^2
  ComplexMatrix C;                 // |points| x L, row = h conj(pi(lambda) g)

  ComplexVec apply(const Signal& f) const {
    Eigen::Map<const ComplexVector> v(f.samples().data(), f.size());
    ComplexVector out = C * v;
    return ComplexVec(out.data(), out.data() + out.size());
  }
};

inline AnalysisMatrix analysis_matrix(const Window& g, const std::vector<PhasePoint>& points) {
  if (points.empty()) throw PreconditionError("analysis matrix needs a nonempty point set");
  const auto& grid = g.grid();
  AnalysisMatrix M{grid, points, ComplexMatrix(static_cast<Eigen::Index>(points.size()), grid.L)};
  for (auto& p : M.points) p = {reduce_centered(p.x, grid.P), reduce_centered(p.xi, grid.P)};
  parallel_for(points.size(), [&](std::size_t i) {
    const Signal row = tf_shift(g.signal(), M.points[i]);
    for (int j = 0; j < grid.L; ++j) M.C(static_cast<Eigen::Index>(i), j) = grid.h * std::conj(row[j]);
  });
  return M;
}

inline AnalysisMatrix analysis_matrix(const Window& g, const PointSet& S) {
  if (S.empty()) throw PreconditionError("analysis matrix needs a nonempty point set");
  return analysis_matrix(g, phase_points(S));
}

struct FrameReport {
  double A = 0.0;
  double B = 0.0;
  double cond = kInf;
  std::size_t n_points = 0;
  int L = 0;
};

namespace detail {

inline std::pair<double, double> extreme_eigenvalues(const ComplexMatrix& H) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

inline FrameReport make_report(double A, double B, std::size_t n, int L) {
  FrameReport r;
  r.A = std::max(0.0, A);
  r.B = std::max(r.A, B);
  r.cond = r.A > 0.0 ? r.B / r.A : kInf;
  r.n_points = n;
  r.L = L;
  return r;
}

inline void require_dense(const SignalGrid& grid) {
  if (grid.L > kDenseCutoff)
    throw PreconditionError("dense spectral computations are limited to L <= " + std::to_string(kDenseCutoff));
}

}  // namespace detail

// Extreme eigenvalues of the frame operator f -> sum |<f, pi(lambda) g>|^2.
inline FrameReport frame_bounds(const AnalysisMatrix& M) {
  detail::require_dense(M.grid);
  const ComplexMatrix Ct = M.C / std::sqrt(M.grid.h);
  const ComplexMatrix F = Ct.adjoint() * Ct;
  auto [lo, hi] = detail::extreme_eigenvalues(F);
  return detail::make_report(lo, hi, M.points.size(), M.grid.L);
}

inline FrameReport frame_bounds(const Window& g, const PointSet& S) { return frame_bounds(analysis_matrix(g, S)); }

// Gram matrix G(lambda, mu) = <pi(mu) g, pi(lambda) g>.
inline ComplexMatrix gram_matrix(const AnalysisMatrix& M) {
  const ComplexMatrix Ct = M.C / std::sqrt(M.grid.h);
  return Ct * Ct.adjoint();
}

inline FrameReport riesz_bounds(const AnalysisMatrix& M) {
  detail::require_dense(M.grid);
  if (static_cast<int>(M.points.size()) > M.grid.L)
    throw RankError("a Riesz sequence needs at most L = " + std::to_string(M.grid.L) + " elements, got " +
                    std::to_string(M.points.size()));
  auto [lo, hi] = detail::extreme_eigenvalues(gram_matrix(M));
  return detail::make_report(lo, hi, M.points.size(), M.grid.L);
}

inline FrameReport riesz_bounds(const Window& g, const PointSet& S) {
  if (S.size() > static_cast<std::size_t>(g.grid().L))
    throw RankError("a Riesz sequence needs at most L elements");
  return riesz_bounds(analysis_matrix(g, S));
}

// sum_lambda c_lambda pi(lambda) g, with the points used as given.
inline Signal synthesize(const Window& g, const std::vector<PhasePoint>& points, const ComplexVec& c) {
  if (points.size() != c.size()) throw DimensionError("coefficient count does not match the point count");
  Signal out(g.grid());
  for (std::size_t i = 0; i < points.size(); ++i) out += c[i] * tf_shift(g.signal(), points[i]);
  return out;
}

struct ShiftedSequence {
  std::vector<PhasePoint> points;
  ComplexVec coeffs;
};

// (kappa(z) c)_{lambda + z} = e^{-2 pi i x lambda_2} c_lambda
inline ShiftedSequence twisted_shift(const std::vector<PhasePoint>& points, const ComplexVec& c, PhasePoint z) {
  if (points.size() != c.size()) throw DimensionError("coefficient count does not match the point count");
  ShiftedSequence out{points, c};
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.points[i] = points[i] + z;
    out.coeffs[i] = std::polar(1.0, -kTwoPi * z.x * points[i].xi) * c[i];
  }
  return out;
}

struct LowerBoundEstimate {
  double value = 0.0;
  double p = 2.0;
  bool heuristic = false;  // true for p in {1, inf}: an upper estimate of the infimum
  std::size_t starts = 0;
};

namespace detail {

// Moduli via sqrt(re^2 + im^2); std::abs goes through hypot, which
// dominates the search otherwise.
inline double lp_norm(const ComplexVector& v, double p) {
  if (p == 2.0) return v.norm();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double n2 = std::norm(v(i));
    acc = p == 1.0 ? acc + std::sqrt(n2) : std::max(acc, n2);
  }
  return p == 1.0 ? acc : std::sqrt(acc);
}

// Coordinate pattern search for min ||Mc||_p / ||c||_p from one start.
inline double pattern_search(const ComplexMatrix& M, ComplexVector c, double p) {
  const Eigen::Index n = M.cols();
  auto ratio = [&](const ComplexVector& Mc, const ComplexVector& x) {
    const double d = lp_norm(x, p);
    return d > 0.0 ? lp_norm(Mc, p) / d : kInf;
  };
  c /= lp_norm(c, p);
  ComplexVector Mc = M * c;
  double best = ratio(Mc, c);
  const Complex dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  ComplexVector trial(M.rows());
  double step = 0.25;
  int sweeps = 0;
  while (step > 1e-7 && sweeps < 300) {
    ++sweeps;
    bool improved = false;
    for (Eigen::Index k = 0; k < n; ++k) {
      for (const Complex& d : dirs) {
        const Complex delta = step * d;
        c(k) += delta;
        trial.noalias() = Mc + delta * M.col(k);
        const double r = ratio(trial, c);
        if (r < best - 1e-15) {
          best = r;
          const double s = lp_norm(c, p);
          c /= s;
          Mc = trial / s;
          improved = true;
          break;
        }
        c(k) -= delta;
      }
    }
    step = improved ? std::min(0.25, 1.5 * step) : 0.5 * step;
  }
  return best;
}

}  // namespace detail

// inf over c != 0 of ||Mc||_p / ||c||_p. Exact for p = 2 (smallest singular
// value; 0 for wide matrices, which have a kernel). For p in {1, inf} a
// deterministic multi-start pattern search gives an upper estimate.
inline LowerBoundEstimate p_lower_bound(const ComplexMatrix& M, double p, int budget = 32, std::uint64_t seed = 0) {
  if (M.size() == 0 || M.cwiseAbs().maxCoeff() == 0.0) throw PreconditionError("lower bound needs a nonzero matrix");
  if (!(p == 1.0 || p == 2.0 || (std::isinf(p) && p > 0)))
    throw PreconditionError("lower bounds are supported for p in {1, 2, inf}");
  LowerBoundEstimate est;
  est.p = p;
  const Eigen::Index n = M.cols();
  ComplexVector v2;
  double s2 = 0.0;
  if (M.rows() < n) {
    s2 = 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(M, Eigen::ComputeFullV);
    v2 = svd.matrixV().col(n - 1);
  } else {
    const ComplexMatrix H = M.adjoint() * M;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in lower-bound computation");
    s2 = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
    v2 = es.eigenvectors().col(0);
  }
  if (p == 2.0) {
    est.value = s2;
    est.starts = 1;
    return est;
  }
  est.heuristic = true;
  std::vector<ComplexVector> starts;
  starts.push_back(v2);
  for (Eigen::Index k = 0; k < n; ++k) starts.push_back(ComplexVector::Unit(n, k));
  const std::size_t fixed = starts.size();
  starts.resize(fixed + static_cast<std::size_t>(std::max(0, budget)));
  for (std::size_t t = fixed; t < starts.size(); ++t) {
    std::mt19937_64 rng(derive_seed(seed, t - fixed));
    std::normal_distribution<double> nd(0.0, 1.0);
    starts[t] = ComplexVector(n);
    for (Eigen::Index k = 0; k < n; ++k) starts[t](k) = Complex(nd(rng), nd(rng));
  }
  std::vector<double> results(starts.size(), kInf);
  parallel_for(starts.size(), [&](std::size_t t) { results[t] = detail::pattern_search(M, starts[t], p); });
  est.value = *std::min_element(results.begin(), results.end());
  est.starts = starts.size();
  return est;
}

}  // namespace gdl
