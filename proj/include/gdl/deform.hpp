#pragma once

// Deformations of point sets and the Lipschitz conditions for families
// tau_n: local difference preservation (L1) and inverse-bounded
// differences (L2). Also Morrey-type Hölder bounds for differentiable maps
// and the annuli counterexample map.

#include <map>
#include <optional>
#include <random>
#include <variant>

#include "gdl/pointset.hpp"

namespace gdl {

using Point = std::vector<double>;

// Offset table: the point base.point(i) moves by offsets[i*m .. i*m+m).
struct JitterMap {
  PointSet base;
  std::vector<double> offsets;
};

struct LinearMap {
  Eigen::MatrixXd matrix;
};

struct DifferentiableMap {
  int dim = 2;
  std::function<Point(std::span<const double>)> T;
  std::function<Eigen::MatrixXd(std::span<const double>)> DT;
};

// Radial multiplier 1 on even annuli, 1 + 1/n on odd annuli.
struct AnnuliMap {};

struct DeformationMap {
  std::variant<JitterMap, LinearMap, DifferentiableMap, AnnuliMap> kind;
  int n = 1;

  std::string kind_name() const {
    static const char* names[] = {"jitter", "linear", "differentiable", "annuli"};
    return names[kind.index()];
  }
};

inline DeformationMap jitter_deformation(PointSet base, std::vector<double> offsets, int n = 1) {
  if (offsets.size() != base.coords().size()) throw DimensionError("jitter table size does not match its base set");
  return {JitterMap{std::move(base), std::move(offsets)}, n};
}

// Offsets eps * u_lambda with u_lambda uniform in the unit ball (m <= 2) or
// cube (m > 2); reproducible from the seed.
inline DeformationMap random_jitter(const PointSet& base, double eps, std::uint64_t seed, int n = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int m = base.dim();
  std::vector<double> off(base.coords().size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::vector<double> v(m);
    while (true) {
      double r2 = 0.0;
      for (auto& c : v) {
        c = u(rng);
        r2 += c * c;
      }
      if (m > 2 || r2 <= 1.0) break;
    }
    for (int k = 0; k < m; ++k) off[i * m + k] = eps * v[k];
  }
  return jitter_deformation(base, std::move(off), n);
}

inline DeformationMap linear_deformation(Eigen::MatrixXd A, int n = 1) {
  if (A.rows() != A.cols()) throw DimensionError("linear deformation must be square");
  if (std::abs(A.determinant()) < 1e-14) throw PreconditionError("linear deformation must be invertible");
  return {LinearMap{std::move(A)}, n};
}

// (1 + 1/n) I
inline DeformationMap dilation(int n, int dim = 2) {
  if (n < 1) throw PreconditionError("dilation index n must be >= 1");
  return linear_deformation(Eigen::MatrixXd::Identity(dim, dim) * (1.0 + 1.0 / n), n);
}

inline DeformationMap differentiable_deformation(int dim, std::function<Point(std::span<const double>)> T,
                                                 std::function<Eigen::MatrixXd(std::span<const double>)> DT,
                                                 int n = 1) {
  if (!T || !DT) throw PreconditionError("differentiable deformation needs both T and DT");
  return {DifferentiableMap{dim, std::move(T), std::move(DT)}, n};
}

// Periodic analogue of the dilation on the torus of side `period`:
// z_i + period/(2 pi n) sin(2 pi z_i / period). Near the origin it acts as
// (1 + 1/n) I, and sup |DT - I| = 1/n.
inline DeformationMap torus_dilation(int n, double period, int dim = 2) {
  if (n < 2) throw PreconditionError("torus dilation needs n >= 2 to stay injective");
  const double c = period / (kTwoPi * n);
  auto T = [=](std::span<const double> z) {
    Point out(z.begin(), z.end());
    for (auto& v : out) v += c * std::sin(kTwoPi * v / period);
    return out;
  };
  auto DT = [=](std::span<const double> z) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(dim, dim);
    for (int i = 0; i < dim; ++i) J(i, i) += std::cos(kTwoPi * z[i] / period) / n;
    return J;
  };
  return differentiable_deformation(dim, T, DT, n);
}

inline DeformationMap annuli_deformation(int n) {
  if (n < 1) throw PreconditionError("annuli deformation needs n >= 1");
  return {AnnuliMap{}, n};
}

// Index l of the annulus B_l containing radius r, with B_0 = {r < q}.
inline int annulus_index(double r, int n) {
  const double q = 1.0 + 1.0 / n;
  if (r < q) return 0;
  int l = static_cast<int>(std::floor(std::log(r) / std::log(q)));
  while (std::pow(q, l + 1) <= r) ++l;
  while (l > 0 && std::pow(q, l) > r) --l;
  return l;
}

inline double annuli_multiplier(double r, int n) {
  return annulus_index(r, n) % 2 == 1 ? 1.0 + 1.0 / n : 1.0;
}

namespace detail {

struct PointKey {
  std::vector<double> c;
  bool operator<(const PointKey& o) const { return c < o.c; }
};

// Per-map evaluation state (jitter lookups are indexed once).
class MapEvaluator {
 public:
  explicit MapEvaluator(const DeformationMap& T) : T_(&T) {
    if (auto* j = std::get_if<JitterMap>(&T.kind))
      for (std::size_t i = 0; i < j->base.size(); ++i)
        index_.emplace(PointKey{Point(j->base.point(i).begin(), j->base.point(i).end())}, i);
  }

  Point operator()(std::span<const double> p) const {
    return std::visit([&](const auto& k) { return apply(k, p); }, T_->kind);
  }

 private:
  Point apply(const JitterMap& j, std::span<const double> p) const {
    auto it = index_.find(PointKey{Point(p.begin(), p.end())});
    if (it == index_.end()) throw PreconditionError("jitter table has no entry for a point of the set");
    Point out(p.begin(), p.end());
    const int m = j.base.dim();
    for (int k = 0; k < m; ++k) out[k] += j.offsets[it->second * m + k];
    return out;
  }
  Point apply(const LinearMap& l, std::span<const double> p) const {
    if (l.matrix.cols() != static_cast<Eigen::Index>(p.size())) throw DimensionError("linear map dimension mismatch");
    Eigen::Map<const Eigen::VectorXd> v(p.data(), static_cast<Eigen::Index>(p.size()));
    Eigen::VectorXd w = l.matrix * v;
    return Point(w.data(), w.data() + w.size());
  }
  Point apply(const DifferentiableMap& d, std::span<const double> p) const {
    if (d.dim != static_cast<int>(p.size())) throw DimensionError("differentiable map dimension mismatch");
    return d.T(p);
  }
  Point apply(const AnnuliMap&, std::span<const double> p) const {
    double r = 0.0;
    for (double v : p) r += v * v;
    const double a = annuli_multiplier(std::sqrt(r), T_->n);
    Point out(p.begin(), p.end());
    for (auto& v : out) v *= a;
    return out;
  }

  const DeformationMap* T_;
  std::map<PointKey, std::size_t> index_;
};

}  // namespace detail

inline Point map_point(const DeformationMap& T, std::span<const double> p) { return detail::MapEvaluator(T)(p); }

// Images tau(lambda) in the order of S.
inline std::vector<double> deformed_coords(const DeformationMap& T, const PointSet& S) {
  detail::MapEvaluator eval(T);
  std::vector<double> out;
  out.reserve(S.coords().size());
  for (std::size_t i = 0; i < S.size(); ++i) {
    const Point q = eval(S.point(i));
    out.insert(out.end(), q.begin(), q.end());
  }
  return out;
}

inline PointSet apply_deformation(const DeformationMap& T, const PointSet& S) {
  auto coords = deformed_coords(T, S);
  const int m = S.dim();
  std::vector<std::size_t> idx(S.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto at = [&](std::size_t i) { return coords.begin() + static_cast<std::ptrdiff_t>(i * m); };
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return std::lexicographical_compare(at(a), at(a) + m, at(b), at(b) + m); });
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (std::equal(at(idx[i - 1]), at(idx[i - 1]) + m, at(idx[i])))
      throw CollisionError("deformation is not injective on the set: two points share an image");
  return PointSet(m, std::move(coords));
}

namespace detail {

// max over pairs (i, j) of S with |s_i - s_j| <= R of f(i, j), split over
// workers with a deterministic max reduction. Returns {max, pair count}.
template <class Fn>
std::pair<double, std::size_t> max_over_close_pairs(const PointSet& S, double R, Fn&& f) {
  const std::size_t n = S.size();
  if (n < 2) return {0.0, 0};
  const double r = R * (1.0 + 1e-12);
  NeighborGrid grid(S, std::max(R, 1e-9));
  std::vector<double> best(n, 0.0);
  std::vector<std::size_t> counts(n, 0);
  parallel_for(n, [&](std::size_t i) {
    auto p = S.point(i);
    grid.for_each_candidate(p, r, [&](std::size_t j) {
      if (j <= i || distance(p, S.point(j)) > r) return;
      ++counts[i];
      best[i] = std::max(best[i], f(i, j));
    });
  });
  double m = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, best[i]);
    c += counts[i];
  }
  return {m, c};
}

}  // namespace detail

// sup over pairs with |lambda - lambda'| <= R of |(tau lambda - tau lambda') - (lambda - lambda')|.
inline double check_L1(const DeformationMap& T, const PointSet& S, double R) {
  if (!(R > 0.0)) throw PreconditionError("L1 radius must be positive");
  const auto img = deformed_coords(T, S);
  const int m = S.dim();
  return detail::max_over_close_pairs(S, R, [&](std::size_t i, std::size_t j) {
           double s = 0.0;
           for (int k = 0; k < m; ++k) {
             const double d = (img[i * m + k] - img[j * m + k]) - (S.point(i)[k] - S.point(j)[k]);
             s += d * d;
           }
           return std::sqrt(s);
         })
      .first;
}

struct L2Result {
  double Rprime = 0.0;        // max(R, largest observed |lambda - lambda'|)
  bool finite = true;         // false when the observed spread saturates the set
  bool certifying = false;    // always false: only a finite sub-family is examined
  std::size_t pair_count = 0;
};

// Smallest R' >= R such that |tau_n lambda - tau_n lambda'| <= R implies
// |lambda - lambda'| <= R' for every supplied map with n >= n0.
inline L2Result check_L2(const std::vector<DeformationMap>& family, const PointSet& S, double R, int n0) {
  if (family.empty()) throw PreconditionError("L2 check needs a nonempty family");
  if (!(R > 0.0)) throw PreconditionError("L2 radius must be positive");
  L2Result res;
  res.Rprime = R;
  const int m = S.dim();
  bool any = false;
  for (const auto& T : family) {
    if (T.n < n0) continue;
    any = true;
    const PointSet img(m, deformed_coords(T, S));
    auto [mx, cnt] = detail::max_over_close_pairs(img, R, [&](std::size_t i, std::size_t j) {
      return distance(S.point(i), S.point(j));
    });
    res.Rprime = std::max(res.Rprime, mx);
    res.pair_count += cnt;
  }
  if (!any) throw PreconditionError("no family member has n >= n0");
  double diam = 0.0;
  for (int k = 0; k < m; ++k) diam += S.bbox().extent(k) * S.bbox().extent(k);
  res.finite = res.Rprime < 0.5 * std::sqrt(diam);
  return res;
}

struct LipschitzReport {
  double R = 0.0;
  double L1_sup = 0.0;                  // max over family members with n >= n0
  std::vector<std::pair<int, double>> L1_by_n;
  std::optional<double> L2_Rprime;      // empty when no finite R' is evidenced
  int n0 = 0;
  std::size_t pair_count = 0;
  bool certifying = false;
};

inline LipschitzReport lipschitz_report(const std::vector<DeformationMap>& family, const PointSet& S, double R,
                                        int n0) {
  LipschitzReport rep;
  rep.R = R;
  rep.n0 = n0;
  for (const auto& T : family) {
    if (T.n < n0) continue;
    const double v = check_L1(T, S, R);
    rep.L1_by_n.emplace_back(T.n, v);
    rep.L1_sup = std::max(rep.L1_sup, v);
  }
  const auto l2 = check_L2(family, S, R, n0);
  if (l2.finite) rep.L2_Rprime = l2.Rprime;
  rep.pair_count = l2.pair_count;
  return rep;
}

struct MorreyReport {
  double p = 0.0;
  double alpha = 0.0;
  double lp_norm_DT_minus_I = 0.0;
  double constant = 1.0;
  double epsilon_n = 0.0;
  double empirical_max_ratio = 0.0;
  bool bound_holds = true;  // empirical_max_ratio <= epsilon_n (1 + 1e-9)
  std::size_t pair_count = 0;
};

// Hölder estimate |(Tx - Ty) - (x - y)| <= eps |x - y|^alpha with
// alpha = 1 - m/p and eps = C ||DT - I||_{L^p(domain)}, C = 1. The norm is
// a midpoint Riemann sum over per_axis^m cells; the ratio is sampled over
// all pairs of cell midpoints.
inline MorreyReport morrey_report(const DeformationMap& T, double p, const Box& domain, int per_axis = 21) {
  const auto* d = std::get_if<DifferentiableMap>(&T.kind);
  if (!d) throw PreconditionError("Morrey bound needs a differentiable deformation");
  const int m = d->dim;
  if (domain.dim() != m) throw DimensionError("domain dimension mismatch");
  if (!(p > m)) throw PreconditionError("Morrey bound needs p > m");
  if (per_axis < 2) throw PreconditionError("Morrey grid needs at least 2 samples per axis");

  MorreyReport rep;
  rep.p = p;
  rep.alpha = std::isinf(p) ? 1.0 : 1.0 - m / p;

  std::size_t cells = 1;
  for (int k = 0; k < m; ++k) cells *= static_cast<std::size_t>(per_axis);
  std::vector<double> xs(cells * m), txs(cells * m);
  double cell_vol = 1.0;
  for (int k = 0; k < m; ++k) cell_vol *= domain.extent(k) / per_axis;
  double acc = 0.0, sup = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rem = c;
    for (int k = 0; k < m; ++k) {
      const std::size_t i = rem % per_axis;
      rem /= per_axis;
      xs[c * m + k] = domain.lo[k] + (i + 0.5) * domain.extent(k) / per_axis;
    }
    std::span<const double> x(xs.data() + c * m, m);
    const Point tx = d->T(x);
    std::copy(tx.begin(), tx.end(), txs.begin() + static_cast<std::ptrdiff_t>(c * m));
    const Eigen::MatrixXd E = d->DT(x) - Eigen::MatrixXd::Identity(m, m);
    const double nrm = Eigen::JacobiSVD<Eigen::MatrixXd>(E).singularValues()(0);
    sup = std::max(sup, nrm);
    if (!std::isinf(p)) acc += std::pow(nrm, p) * cell_vol;
  }
  rep.lp_norm_DT_minus_I = std::isinf(p) ? sup : std::pow(acc, 1.0 / p);
  rep.epsilon_n = rep.constant * rep.lp_norm_DT_minus_I;

  std::vector<double> best(cells, 0.0);
  parallel_for(cells, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < cells; ++j) {
      double dx2 = 0.0, dd2 = 0.0;
      for (int k = 0; k < m; ++k) {
        const double dx = xs[i * m + k] - xs[j * m + k];
        const double dd = (txs[i * m + k] - txs[j * m + k]) - dx;
        dx2 += dx * dx;
        dd2 += dd * dd;
      }
      best[i] = std::max(best[i], std::sqrt(dd2) / std::pow(std::sqrt(dx2), rep.alpha));
    }
  });
  for (double b : best) rep.empirical_max_ratio = std::max(rep.empirical_max_ratio, b);
  rep.pair_count = cells * (cells - 1) / 2;
  rep.bound_holds = rep.empirical_max_ratio <= rep.epsilon_n * (1.0 + 1e-9) + 1e-15;
  return rep;
}

}  // namespace gdl
