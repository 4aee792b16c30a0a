#pragma once

// Geometry of finite point sets in R^m: separation, relative separation,
// hole, Beurling density estimates, lattices and the boundary-augmented
// weak-convergence distance. Balls are closed throughout.

#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <unordered_map>

#include <Eigen/Dense>

#include "gdl/common.hpp"

namespace gdl {

// Boundary tolerance used when testing closed-ball membership against
// computed centers.
inline constexpr double kGeomTolerance = 1e-9;

struct Box {
  std::vector<double> lo, hi;

  static Box cube(int dim, double lo, double hi) {
    return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
  }
  int dim() const { return static_cast<int>(lo.size()); }
  bool empty() const {
    if (lo.empty()) return true;
    for (int i = 0; i < dim(); ++i)
      if (lo[i] > hi[i]) return true;
    return false;
  }
  double extent(int i) const { return hi[i] - lo[i]; }
  bool contains(std::span<const double> p, double tol = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    return true;
  }
};

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

class PointSet {
 public:
  PointSet() = default;

  // coords holds points contiguously (size = n * dim). Exact duplicates are
  // rejected. The bounding box defaults to the tight box of the points.
  PointSet(int dim, std::vector<double> coords, std::optional<Box> bbox = std::nullopt)
      : dim_(dim), coords_(std::move(coords)) {
    if (dim < 1) throw DimensionError("point set dimension must be >= 1");
    if (coords_.size() % dim != 0) throw DimensionError("coordinate count is not a multiple of dim");
    for (double c : coords_)
      if (!std::isfinite(c)) throw PreconditionError("point coordinates must be finite");
    reject_duplicates();
    if (bbox) {
      if (bbox->dim() != dim) throw DimensionError("bounding box dimension mismatch");
      for (std::size_t i = 0; i < size(); ++i)
        if (!bbox->contains(point(i), 1e-12)) throw PreconditionError("point outside supplied bounding box");
      bbox_ = *bbox;
    } else {
      bbox_ = tight_box();
    }
  }

  static PointSet from_points(int dim, const std::vector<std::vector<double>>& pts,
                              std::optional<Box> bbox = std::nullopt) {
    std::vector<double> c;
    c.reserve(pts.size() * dim);
    for (const auto& p : pts) {
      if (static_cast<int>(p.size()) != dim) throw DimensionError("point has wrong dimension");
      c.insert(c.end(), p.begin(), p.end());
    }
    return PointSet(dim, std::move(c), std::move(bbox));
  }

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return size() == 0; }
  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)}; }
  const std::vector<double>& coords() const { return coords_; }
  const Box& bbox() const { return bbox_; }

 private:
  Box tight_box() const {
    Box b{std::vector<double>(dim_, kInf), std::vector<double>(dim_, -kInf)};
    for (std::size_t i = 0; i < size(); ++i)
      for (int k = 0; k < dim_; ++k) {
        b.lo[k] = std::min(b.lo[k], point(i)[k]);
        b.hi[k] = std::max(b.hi[k], point(i)[k]);
      }
    return b;
  }

  void reject_duplicates() const {
    std::vector<std::size_t> idx(size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      auto pa = point(a), pb = point(b);
      return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    });
    for (std::size_t i = 1; i < idx.size(); ++i) {
      auto pa = point(idx[i - 1]), pb = point(idx[i]);
      if (std::equal(pa.begin(), pa.end(), pb.begin()))
        throw PreconditionError("duplicate point in point set");
    }
  }

  int dim_ = 0;
  std::vector<double> coords_;
  Box bbox_;
};

namespace detail {

// Uniform bucket grid over a point set for fixed-radius neighbour queries.
class NeighborGrid {
 public:
  NeighborGrid(const PointSet& s, double cell) : set_(&s), cell_(cell) {
    if (s.empty()) return;
    lo_ = s.bbox().lo;
    for (std::size_t i = 0; i < s.size(); ++i) buckets_[key(s.point(i))].push_back(i);
  }

  // Calls fn(j) for every point within distance r of p (superset filter
  // by bucket, exact filter by the caller).
  template <class Fn>
  void for_each_candidate(std::span<const double> p, double r, Fn&& fn) const {
    if (set_->empty()) return;
    const int m = set_->dim();
    std::vector<long long> lo(m), hi(m), cur(m);
    for (int k = 0; k < m; ++k) {
      lo[k] = static_cast<long long>(std::floor((p[k] - r - lo_[k]) / cell_));
      hi[k] = static_cast<long long>(std::floor((p[k] + r - lo_[k]) / cell_));
    }
    cur = lo;
    while (true) {
      auto it = buckets_.find(hash(cur));
      if (it != buckets_.end())
        for (std::size_t j : it->second) fn(j);
      int k = 0;
      while (k < m && ++cur[k] > hi[k]) {
        cur[k] = lo[k];
        ++k;
      }
      if (k == m) break;
    }
  }

  double cell() const { return cell_; }

 private:
  static std::uint64_t hash(const std::vector<long long>& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (long long v : c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return h;
  }
  std::uint64_t key(std::span<const double> p) const {
    std::vector<long long> c(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) c[k] = static_cast<long long>(std::floor((p[k] - lo_[k]) / cell_));
    return hash(c);
  }

  const PointSet* set_;
  double cell_;
  std::vector<double> lo_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

}  // namespace detail

// min pairwise distance; +inf for sets with at most one point.
inline double separation(const PointSet& s) {
  const std::size_t n = s.size();
  if (n <= 1) return kInf;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s.point(a)[0] < s.point(b)[0]; });
  double best = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = s.point(idx[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto q = s.point(idx[j]);
      if (q[0] - p[0] >= best) break;
      best = std::min(best, distance(p, q));
    }
  }
  return best;
}

// max over centers x of #(S ∩ closed B_1(x)). Exact candidate enumeration
// for m <= 2: every point as a center, plus (m = 2) the two centers of the
// unit circles through each pair at distance <= 2, or (m = 1) every point
// as the left end of [p, p + 2].
inline int rel_separation(const PointSet& s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  const int m = s.dim();
  if (m > 2) throw PreconditionError("exact relative separation is implemented for dimension <= 2");
  const double r = 1.0 + kGeomTolerance;
  detail::NeighborGrid grid(s, 2.0);
  auto count_at = [&](std::span<const double> c) {
    int cnt = 0;
    grid.for_each_candidate(c, r, [&](std::size_t j) {
      if (distance(c, s.point(j)) <= r) ++cnt;
    });
    return cnt;
  };
  int best = 1;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = s.point(i);
    if (m == 1) {
      const double c[1] = {p[0] + 1.0};
      best = std::max(best, count_at(c));
      continue;
    }
    best = std::max(best, count_at(p));
    grid.for_each_candidate(p, 2.0 + kGeomTolerance, [&](std::size_t j) {
      if (j <= i) return;
      auto q = s.point(j);
      const double dx = q[0] - p[0], dy = q[1] - p[1];
      const double d2 = dx * dx + dy * dy;
      if (d2 > 4.0 * (1.0 + kGeomTolerance)) return;
      const double mx = 0.5 * (p[0] + q[0]), my = 0.5 * (p[1] + q[1]);
      const double off = std::sqrt(std::max(0.0, 1.0 / d2 - 0.25));
      const double c1[2] = {mx - dy * off, my + dx * off};
      const double c2[2] = {mx + dy * off, my - dx * off};
      best = std::max(best, std::max(count_at(c1), count_at(c2)));
    });
  }
  return best;
}

namespace detail {

struct Vec2 {
  double x, y;
};

// Clips a convex polygon to {v : (v - mid) . dir <= 0}.
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 mid, Vec2 dir) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  auto side = [&](Vec2 v) { return (v.x - mid.x) * dir.x + (v.y - mid.y) * dir.y; };
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    const double sa = side(a), sb = side(b);
    if (sa <= 0) out.push_back(a);
    if ((sa < 0 && sb > 0) || (sa > 0 && sb < 0)) {
      const double t = sa / (sa - sb);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

inline double hole_1d(const PointSet& s, const Box& domain) {
  std::vector<double> xs;
  for (std::size_t i = 0; i < s.size(); ++i) xs.push_back(s.point(i)[0]);
  std::sort(xs.begin(), xs.end());
  auto nearest = [&](double x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    double d = kInf;
    if (it != xs.end()) d = std::min(d, *it - x);
    if (it != xs.begin()) d = std::min(d, x - *(it - 1));
    return d;
  };
  const double a = domain.lo[0], b = domain.hi[0];
  double best = std::max(nearest(a), nearest(b));
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double mid = 0.5 * (xs[i] + xs[i + 1]);
    if (mid >= a && mid <= b) best = std::max(best, nearest(mid));
  }
  return best;
}

// Exact hole in the plane: each site's Voronoi cell is clipped to the
// domain and the farthest cell vertex is measured.
inline double hole_2d(const PointSet& s, const Box& domain) {
  const std::size_t n = s.size();
  Box span = s.bbox();
  for (int k = 0; k < 2; ++k) {
    span.lo[k] = std::min(span.lo[k], domain.lo[k]);
    span.hi[k] = std::max(span.hi[k], domain.hi[k]);
  }
  const double area = std::max(1e-300, span.extent(0) * span.extent(1));
  double cell = std::sqrt(area / static_cast<double>(n));
  if (!(cell > 0.0) || !std::isfinite(cell)) cell = 1.0;
  NeighborGrid grid(s, cell);
  const std::vector<Vec2> box_poly = {{domain.lo[0], domain.lo[1]},
                                      {domain.hi[0], domain.lo[1]},
                                      {domain.hi[0], domain.hi[1]},
                                      {domain.lo[0], domain.hi[1]}};
  std::vector<double> per_site(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    auto p = s.point(i);
    const Vec2 pv{p[0], p[1]};
    std::vector<Vec2> poly = box_poly;
    auto reach = [&] {
      double r = 0.0;
      for (auto v : poly) r = std::max(r, std::hypot(v.x - pv.x, v.y - pv.y));
      return r;
    };
    double rmax = reach();
    // Grow the query radius until no unseen site can cut the cell.
    double searched = 0.0;
    std::vector<char> used(n, 0);
    used[i] = 1;
    double radius = 2.0 * cell;
    while (!poly.empty()) {
      const double limit = std::min(radius, 2.0 * rmax + cell);
      std::vector<std::pair<double, std::size_t>> cand;
      grid.for_each_candidate(p, limit, [&](std::size_t j) {
        if (used[j]) return;
        const double d = distance(p, s.point(j));
        if (d <= limit) cand.emplace_back(d, j);
      });
      std::sort(cand.begin(), cand.end());
      for (auto [d, j] : cand) {
        if (d > 2.0 * rmax) break;
        used[j] = 1;
        auto q = s.point(j);
        poly = clip_halfplane(poly, {0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])}, {q[0] - p[0], q[1] - p[1]});
        if (poly.empty()) break;
        rmax = reach();
      }
      searched = limit;
      if (poly.empty() || searched >= 2.0 * rmax) break;
      radius *= 2.0;
    }
    double r = 0.0;
    for (auto v : poly) r = std::max(r, std::hypot(v.x - pv.x, v.y - pv.y));
    per_site[i] = r;
  });
  double best = 0.0;
  for (double r : per_site) best = std::max(best, r);
  return best;
}

inline double hole_grid(const PointSet& s, const Box& domain, int per_axis) {
  const int m = s.dim();
  double best = 0.0;
  std::vector<int> idx(m, 0);
  std::vector<double> x(m);
  while (true) {
    for (int k = 0; k < m; ++k)
      x[k] = domain.lo[k] + (per_axis == 1 ? 0.5 : static_cast<double>(idx[k]) / (per_axis - 1)) * domain.extent(k);
    double d = kInf;
    for (std::size_t j = 0; j < s.size(); ++j) d = std::min(d, distance(x, s.point(j)));
    best = std::max(best, d);
    int k = 0;
    while (k < m && ++idx[k] == per_axis) {
      idx[k] = 0;
      ++k;
    }
    if (k == m) break;
  }
  return best;
}

}  // namespace detail

// sup over x in domain of the distance from x to the nearest point of S.
// Exact for m <= 2; higher dimensions fall back to a grid of
// fallback_per_axis samples per axis (a lower estimate).
inline double hole(const PointSet& s, const Box& domain, int fallback_per_axis = 48) {
  if (s.empty()) throw PreconditionError("hole of an empty set is undefined");
  if (domain.dim() != s.dim()) throw DimensionError("domain dimension mismatch");
  if (domain.empty()) throw PreconditionError("hole domain is empty");
  if (s.dim() == 1) return detail::hole_1d(s, domain);
  if (s.dim() == 2) return detail::hole_2d(s, domain);
  return detail::hole_grid(s, domain, fallback_per_axis);
}

struct CenterSampling {
  int per_axis = 12;  // centers per axis on the admissible sub-box
};

struct DensityReport {
  std::vector<double> radii;
  std::vector<double> lower_counts;  // min_z #(S ∩ B_R(z)) / vol(B_R)
  std::vector<double> upper_counts;  // max_z ...
  double D_minus_est = 0.0;
  double D_plus_est = 0.0;
  double boundary_band = 0.0;  // relative O(1/R) uncertainty at the largest R
};

inline double ball_volume(int m, double r) {
  return std::pow(kPi, 0.5 * m) / std::tgamma(0.5 * m + 1.0) * std::pow(r, m);
}

inline DensityReport beurling_density(const PointSet& s, const std::vector<double>& radii,
                                      CenterSampling centers = {}) {
  DensityReport rep;
  rep.radii = radii;
  if (radii.empty()) throw PreconditionError("density needs at least one radius");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw PreconditionError("density radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw PreconditionError("density radii must be increasing");
  }
  if (s.empty()) {
    rep.lower_counts.assign(radii.size(), 0.0);
    rep.upper_counts.assign(radii.size(), 0.0);
    return rep;
  }
  const int m = s.dim();
  const Box& box = s.bbox();
  detail::NeighborGrid grid(s, std::max(radii.back() / 4.0, 1e-6));
  for (double R : radii) {
    for (int k = 0; k < m; ++k)
      if (box.extent(k) < 2.0 * R)
        throw PreconditionError("radius " + std::to_string(R) + " too large for the bounding box");
    double lo = kInf, hi = 0.0;
    std::vector<int> idx(m, 0);
    std::vector<double> c(m);
    const int q = std::max(1, centers.per_axis);
    while (true) {
      for (int k = 0; k < m; ++k) {
        const double a = box.lo[k] + R, b = box.hi[k] - R;
        c[k] = q == 1 ? 0.5 * (a + b) : a + (b - a) * idx[k] / (q - 1);
      }
      int cnt = 0;
      grid.for_each_candidate(c, R, [&](std::size_t j) {
        if (distance(c, s.point(j)) <= R) ++cnt;
      });
      const double dens = cnt / ball_volume(m, R);
      lo = std::min(lo, dens);
      hi = std::max(hi, dens);
      int k = 0;
      while (k < m && ++idx[k] == q) {
        idx[k] = 0;
        ++k;
      }
      if (k == m) break;
    }
    rep.lower_counts.push_back(lo);
    rep.upper_counts.push_back(hi);
  }
  rep.D_minus_est = rep.lower_counts.back();
  rep.D_plus_est = rep.upper_counts.back();
  // Boundary layer of one mean spacing over a ball of radius R.
  const double spacing = rep.D_plus_est > 0 ? std::pow(rep.D_plus_est, -1.0 / m) : 0.0;
  rep.boundary_band = 2.0 * m * spacing / radii.back();
  return rep;
}

// Hausdorff distance between (A ∩ B̄_R(z)) ∪ ∂B_R(z) and (B ∩ B̄_R(z)) ∪ ∂B_R(z).
inline double weak_distance(const PointSet& a, const PointSet& b, std::span<const double> z, double R) {
  if (!(R > 0.0)) throw PreconditionError("weak distance radius must be positive");
  if (a.dim() != b.dim() || static_cast<int>(z.size()) != a.dim())
    throw DimensionError("weak distance dimension mismatch");
  auto inside = [&](const PointSet& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (distance(s.point(i), z) <= R) out.push_back(i);
    return out;
  };
  const auto ia = inside(a), ib = inside(b);
  auto directed = [&](const PointSet& x, const std::vector<std::size_t>& ix, const PointSet& y,
                      const std::vector<std::size_t>& iy) {
    double worst = 0.0;
    for (std::size_t i : ix) {
      auto p = x.point(i);
      double d = std::max(0.0, R - distance(p, z));
      for (std::size_t j : iy) d = std::min(d, distance(p, y.point(j)));
      worst = std::max(worst, d);
    }
    return worst;
  };
  return std::max(directed(a, ia, b, ib), directed(b, ib, a, ia));
}

// All points gen * k, k in Z^m, inside the closed box.
inline PointSet lattice(const Eigen::MatrixXd& gen, const Box& box) {
  const int m = static_cast<int>(gen.rows());
  if (gen.cols() != m) throw DimensionError("lattice generator must be square");
  if (box.dim() != m) throw DimensionError("lattice box dimension mismatch");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gen);
  if (!lu.isInvertible() || std::abs(gen.determinant()) < 1e-14)
    throw PreconditionError("lattice generator is singular");
  const Eigen::MatrixXd inv = gen.inverse();
  // Range of integer coordinates covering the box, from its corners.
  std::vector<long long> klo(m, std::numeric_limits<long long>::max()), khi(m, std::numeric_limits<long long>::min());
  for (int corner = 0; corner < (1 << m); ++corner) {
    Eigen::VectorXd x(m);
    for (int k = 0; k < m; ++k) x[k] = (corner >> k) & 1 ? box.hi[k] : box.lo[k];
    Eigen::VectorXd kc = inv * x;
    for (int k = 0; k < m; ++k) {
      klo[k] = std::min(klo[k], static_cast<long long>(std::floor(kc[k])) - 1);
      khi[k] = std::max(khi[k], static_cast<long long>(std::ceil(kc[k])) + 1);
    }
  }
  const double tol = 1e-12 * std::max(1.0, gen.cwiseAbs().maxCoeff());
  std::vector<double> coords;
  std::vector<long long> cur = klo;
  Eigen::VectorXd kv(m);
  while (true) {
    for (int k = 0; k < m; ++k) kv[k] = static_cast<double>(cur[k]);
    Eigen::VectorXd x = gen * kv;
    bool in = true;
    for (int k = 0; k < m && in; ++k) in = x[k] >= box.lo[k] - tol && x[k] <= box.hi[k] + tol;
    if (in)
      for (int k = 0; k < m; ++k) coords.push_back(x[k]);
    int k = 0;
    while (k < m && ++cur[k] > khi[k]) {
      cur[k] = klo[k];
      ++k;
    }
    if (k == m) break;
  }
  return PointSet(m, std::move(coords));
}

inline PointSet restrict(const PointSet& s, const Box& region) {
  if (region.dim() != s.dim()) throw DimensionError("region dimension mismatch");
  std::vector<double> coords;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (region.contains(s.point(i))) coords.insert(coords.end(), s.point(i).begin(), s.point(i).end());
  return PointSet(s.dim(), std::move(coords));
}

inline PointSet restrict(const PointSet& s, const Ball& region) {
  if (static_cast<int>(region.center.size()) != s.dim()) throw DimensionError("region dimension mismatch");
  std::vector<double> coords;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (distance(s.point(i), region.center) <= region.radius)
      coords.insert(coords.end(), s.point(i).begin(), s.point(i).end());
  return PointSet(s.dim(), std::move(coords));
}

// Adds the periodic images (shifts by multiples of `period` per axis) that
// fall within `margin` of the box [origin, origin + period]^m.
inline PointSet periodize(const PointSet& s, double period, double origin, double margin) {
  const int m = s.dim();
  std::vector<double> coords;
  std::vector<int> shift(m, -1);
  std::vector<double> q(m);
  while (true) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      bool keep = true;
      for (int k = 0; k < m && keep; ++k) {
        q[k] = s.point(i)[k] + shift[k] * period;
        keep = q[k] >= origin - margin && q[k] <= origin + period + margin;
      }
      if (keep) coords.insert(coords.end(), q.begin(), q.end());
    }
    int k = 0;
    while (k < m && ++shift[k] > 1) {
      shift[k] = -1;
      ++k;
    }
    if (k == m) break;
  }
  return PointSet(m, std::move(coords));
}

// Text format: header "# dim=<m>", then one point per line.
inline void write_pointset(std::ostream& os, const PointSet& s) {
  os << "# dim=" << s.dim() << '\n';
  os << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto p = s.point(i);
    for (int k = 0; k < s.dim(); ++k) os << (k ? " " : "") << p[k];
    os << '\n';
  }
}

inline PointSet read_pointset(std::istream& is) {
  std::string line;
  int dim = 0;
  std::vector<double> coords;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("dim=");
      if (pos != std::string::npos) dim = std::stoi(line.substr(pos + 4));
      continue;
    }
    if (dim <= 0) throw PreconditionError("point-set file is missing the '# dim=<m>' header");
    std::istringstream ls(line);
    double v;
    int count = 0;
    while (ls >> v) {
      coords.push_back(v);
      ++count;
    }
    if (count != dim)
      throw PreconditionError("point-set line " + std::to_string(lineno) + " has " + std::to_string(count) +
                              " coordinates, expected " + std::to_string(dim));
  }
  if (dim <= 0) throw PreconditionError("point-set file is missing the '# dim=<m>' header");
  return PointSet(dim, std::move(coords));
}

}  // namespace gdl
