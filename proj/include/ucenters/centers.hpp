#pragma once

// Uncertainty regions of centers.
//
// Exact regions exist for every center in 1-D (they are order statistics of
// the objects' interval endpoints) and for the center of mass in any
// dimension (a ball). For the 1-center and 1-median in d >= 2 only a sampled
// lower bound on the region size is offered.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ucenters/core.hpp"

namespace ucenters {

struct Interval {
  double start = 0.0;
  double end = 0.0;

  double size() const { return end - start; }
  bool contains(double x, double tol = kTolerance) const {
    return x >= start - tol && x <= end + tol;
  }
};

/// Witness-based region estimate: the computed centers of the sampled
/// realizations and the largest distance between any two of them.
struct SampledRegion {
  std::vector<Point> witnesses;
  double lower_bound_size = 0.0;
};

using CenterRegion = std::variant<Interval, UncertaintyBall, SampledRegion>;

inline double region_size(const CenterRegion& region) {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return r.size();
        } else if constexpr (std::is_same_v<T, UncertaintyBall>) {
          return region_size(r);
        } else {
          return r.lower_bound_size;
        }
      },
      region);
}

namespace detail {

inline void require_1d(std::span<const UncertaintyBall> balls, const char* what) {
  if (balls.empty()) throw InputError(std::string(what) + ": empty input");
  for (const auto& b : balls) {
    if (b.center.dim() != 1) throw InputError(std::string(what) + ": balls must be 1-D");
  }
}

inline std::vector<double> sorted_starts(std::span<const UncertaintyBall> balls) {
  std::vector<double> out;
  out.reserve(balls.size());
  for (const auto& b : balls) out.push_back(b.start());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> sorted_ends(std::span<const UncertaintyBall> balls) {
  std::vector<double> out;
  out.reserve(balls.size());
  for (const auto& b : balls) out.push_back(b.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1-D order statistics
// ---------------------------------------------------------------------------

/// Region of the k-th smallest position (k is 1-based): [s_(k), e_(k)].
inline Interval region_kth_smallest(std::span<const UncertaintyBall> balls, std::size_t k) {
  detail::require_1d(balls, "region_kth_smallest");
  if (k < 1 || k > balls.size()) throw InputError("region_kth_smallest: k out of range");
  return {detail::sorted_starts(balls)[k - 1], detail::sorted_ends(balls)[k - 1]};
}

inline Interval region_max_1d(std::span<const UncertaintyBall> balls) {
  detail::require_1d(balls, "region_max_1d");
  return region_kth_smallest(balls, balls.size());
}

inline Interval region_min_1d(std::span<const UncertaintyBall> balls) {
  detail::require_1d(balls, "region_min_1d");
  return region_kth_smallest(balls, 1);
}

/// Midpoint of the max and min regions; its size is the mean of their sizes.
inline Interval region_one_center_1d(std::span<const UncertaintyBall> balls) {
  const Interval hi = region_max_1d(balls);
  const Interval lo = region_min_1d(balls);
  return {(lo.start + hi.start) / 2.0, (lo.end + hi.end) / 2.0};
}

/// Odd n: the middle order statistic. Even n: midpoint of the two middle ones.
inline Interval region_one_median_1d(std::span<const UncertaintyBall> balls) {
  detail::require_1d(balls, "region_one_median_1d");
  const std::size_t n = balls.size();
  if (n % 2 == 1) return region_kth_smallest(balls, (n + 1) / 2);
  const auto s = detail::sorted_starts(balls);
  const auto e = detail::sorted_ends(balls);
  return {(s[n / 2 - 1] + s[n / 2]) / 2.0, (e[n / 2 - 1] + e[n / 2]) / 2.0};
}

// ---------------------------------------------------------------------------
// Center of mass
// ---------------------------------------------------------------------------

/// Ball centered at the weighted mean of the centers, with the weighted mean
/// radius. Exact in every dimension.
inline UncertaintyBall region_center_of_mass(std::span<const UncertaintyBall> balls,
                                             std::span<const double> weights) {
  if (balls.empty()) throw InputError("region_center_of_mass: empty input");
  if (weights.size() != balls.size()) throw InputError("region_center_of_mass: weight count mismatch");
  double total = 0.0;
  double radius = 0.0;
  Point center(balls.front().center.dim());
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (!(weights[i] > 0.0)) throw InputError("region_center_of_mass: weights must be positive");
    total += weights[i];
    center += balls[i].center * weights[i];
    radius += weights[i] * balls[i].radius;
  }
  return {center * (1.0 / total), radius / total};
}

// ---------------------------------------------------------------------------
// Exact centers of point sets
// ---------------------------------------------------------------------------

inline Point center_of_mass(std::span<const Point> points, std::span<const double> weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw InputError("center_of_mass: bad input sizes");
  }
  Point acc(points.front().dim());
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    acc += points[i] * weights[i];
    total += weights[i];
  }
  return acc * (1.0 / total);
}

/// 1-D 1-median: middle point for odd n, midpoint of the two middle points for even n.
inline double median_1d(std::vector<double> xs) {
  if (xs.empty()) throw InputError("median_1d: empty input");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2.0;
}

struct EnclosingBall {
  Point center;
  double radius = 0.0;

  bool contains(const Point& p) const {
    return distance(center, p) <= radius + kTolerance * std::max(1.0, radius);
  }
};

namespace detail {

// Smallest ball with every support point on its boundary: the circumsphere
// within their affine hull. Returns nullopt for affinely dependent supports.
inline std::optional<EnclosingBall> circumsphere(std::span<const Point> support) {
  if (support.empty()) return std::nullopt;
  const Point& p0 = support.front();
  if (support.size() == 1) return EnclosingBall{p0, 0.0};
  const auto k = static_cast<Eigen::Index>(support.size() - 1);
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  std::vector<Point> diffs;
  diffs.reserve(support.size() - 1);
  for (std::size_t j = 1; j < support.size(); ++j) diffs.push_back(support[j] - p0);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) gram(a, b) = 2.0 * diffs[a].dot(diffs[b]);
    rhs(a) = diffs[a].dot(diffs[a]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-12);
  if (lu.rank() < k) return std::nullopt;
  const Eigen::VectorXd lambda = lu.solve(rhs);
  Point center = p0;
  for (Eigen::Index a = 0; a < k; ++a) center += diffs[a] * lambda(a);
  double radius = 0.0;
  for (const auto& p : support) radius = std::max(radius, distance(center, p));
  return EnclosingBall{center, radius};
}

// Smallest ball enclosing a small point set, with some of them possibly
// redundant (degenerate support).
inline EnclosingBall ball_from_support(std::span<const Point> support) {
  if (auto ball = circumsphere(support)) {
    bool all_in = true;
    for (const auto& p : support) all_in = all_in && ball->contains(p);
    if (all_in) return *ball;
  }
  // Drop one point at a time and keep the smallest ball that still covers all.
  std::optional<EnclosingBall> best;
  for (std::size_t skip = 0; skip < support.size(); ++skip) {
    std::vector<Point> sub;
    for (std::size_t j = 0; j < support.size(); ++j) {
      if (j != skip) sub.push_back(support[j]);
    }
    if (sub.empty()) continue;
    EnclosingBall cand = ball_from_support(sub);
    bool all_in = true;
    for (const auto& p : support) all_in = all_in && cand.contains(p);
    if (all_in && (!best || cand.radius < best->radius)) best = cand;
  }
  if (!best) throw Error("smallest enclosing ball: degenerate support");
  return *best;
}

inline EnclosingBall welzl(std::vector<Point>& pts, std::size_t count, std::vector<Point>& boundary,
                           std::size_t dim) {
  if (count == 0 || boundary.size() == dim + 1) {
    // Negative radius: the empty ball, which contains nothing.
    if (boundary.empty()) return EnclosingBall{Point(dim), -1.0};
    return ball_from_support(boundary);
  }
  const Point p = pts[count - 1];
  EnclosingBall ball = welzl(pts, count - 1, boundary, dim);
  if (ball.contains(p)) return ball;
  boundary.push_back(p);
  ball = welzl(pts, count - 1, boundary, dim);
  boundary.pop_back();
  return ball;
}

}  // namespace detail

/// Smallest enclosing ball (Welzl's recursion). Intended for small sets.
inline EnclosingBall smallest_enclosing_ball(std::span<const Point> points, std::uint64_t seed = 0) {
  if (points.empty()) throw InputError("smallest_enclosing_ball: empty input");
  std::vector<Point> pts(points.begin(), points.end());
  std::mt19937_64 rng(seed);
  std::shuffle(pts.begin(), pts.end(), rng);
  std::vector<Point> boundary;
  return detail::welzl(pts, pts.size(), boundary, pts.front().dim());
}

struct WeiszfeldOptions {
  int max_iterations = 200;
  double tolerance = 1e-9;
  double perturbation = 1e-6;
};

namespace detail {

// Line through the two farthest-apart points when every point lies on it.
inline std::optional<std::pair<Point, Point>> common_line(std::span<const Point> points) {
  std::size_t a = 0;
  std::size_t b = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance(points[i], points[j]);
      if (d > best) {
        best = d;
        a = i;
        b = j;
      }
    }
  }
  if (best <= kTolerance) return std::pair{points[a], Point(points[a].dim())};
  const Point dir = (points[b] - points[a]) * (1.0 / best);
  for (const auto& p : points) {
    const Point rel = p - points[a];
    const Point off = rel - dir * rel.dot(dir);
    if (off.norm() > kTolerance * std::max(1.0, best)) return std::nullopt;
  }
  return std::pair{points[a], dir};
}

// Weiszfeld crawls when the optimum sits close to an input point; a few
// damped Newton steps on the sum of distances finish the job.
inline Point newton_polish(std::span<const Point> points, Point x, double coincide) {
  const std::size_t dim = x.dim();
  auto cost = [&](const Point& y) {
    double s = 0.0;
    for (const auto& p : points) s += distance(p, y);
    return s;
  };
  double fx = cost(x);
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& p : points) {
      const double d = distance(x, p);
      if (d <= coincide) return x;
      Eigen::VectorXd u(static_cast<Eigen::Index>(dim));
      for (std::size_t k = 0; k < dim; ++k) u(static_cast<Eigen::Index>(k)) = (x[k] - p[k]) / d;
      grad += u;
      hess += (Eigen::MatrixXd::Identity(u.size(), u.size()) - u * u.transpose()) / d;
    }
    if (grad.norm() <= 1e-13 * static_cast<double>(points.size())) break;
    const Eigen::VectorXd step = hess.ldlt().solve(-grad);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool moved = false;
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      Point y = x;
      for (std::size_t j = 0; j < dim; ++j) y[j] += t * step(static_cast<Eigen::Index>(j));
      const double fy = cost(y);
      if (fy < fx) {
        x = std::move(y);
        fx = fy;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return x;
}

}  // namespace detail

/// Geometric median (1-median) of an unweighted point set.
///
/// Collinear inputs use the 1-D rule (midpoint of the two middle points for
/// even n). Otherwise an input point is returned when it satisfies the
/// optimality condition, else Weiszfeld iteration runs from the centroid.
inline Point geometric_median(std::span<const Point> points, const WeiszfeldOptions& opts = {}) {
  if (points.empty()) throw InputError("geometric_median: empty input");
  if (auto line = detail::common_line(points)) {
    const auto& [origin, dir] = *line;
    if (dir.norm() == 0.0) return origin;
    std::vector<double> ts;
    ts.reserve(points.size());
    for (const auto& p : points) ts.push_back((p - origin).dot(dir));
    return origin + dir * median_1d(std::move(ts));
  }

  const std::size_t dim = points.front().dim();
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, distance(p, points.front()));
  const double coincide = kTolerance * std::max(1.0, scale);

  for (const auto& p : points) {
    double multiplicity = 0.0;
    Point pull(dim);
    for (const auto& q : points) {
      const double d = distance(p, q);
      if (d <= coincide) {
        multiplicity += 1.0;
      } else {
        pull += (q - p) * (1.0 / d);
      }
    }
    if (pull.norm() <= multiplicity + kTolerance) return p;
  }

  std::vector<double> ones(points.size(), 1.0);
  Point x = center_of_mass(points, ones);
  for (int it = 0; it < opts.max_iterations; ++it) {
    Point num(dim);
    double den = 0.0;
    bool hit = false;
    for (const auto& q : points) {
      const double d = distance(x, q);
      if (d <= coincide) {
        hit = true;
        break;
      }
      num += q * (1.0 / d);
      den += 1.0 / d;
    }
    if (hit) {
      for (std::size_t k = 0; k < dim; ++k) x[k] += opts.perturbation * std::max(1.0, scale);
      continue;
    }
    Point next = num * (1.0 / den);
    const double step = distance(next, x);
    x = std::move(next);
    if (step <= opts.tolerance * std::max(1.0, scale)) break;
  }
  return detail::newton_polish(points, std::move(x), coincide);
}

/// The exact center of one realization (one point per object).
inline Point realized_center(CenterKind kind, std::span<const Point> points,
                             std::span<const double> weights) {
  switch (kind) {
    case CenterKind::one_center:
      return smallest_enclosing_ball(points).center;
    case CenterKind::centroid: {
      std::vector<double> ones(points.size(), 1.0);
      return center_of_mass(points, ones);
    }
    case CenterKind::center_of_mass:
      return center_of_mass(points, weights);
    case CenterKind::one_median:
      return geometric_median(points);
  }
  throw InputError("realized_center: unknown center kind");
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

inline bool has_exact_region(CenterKind kind, std::size_t dim) {
  return dim == 1 || kind == CenterKind::centroid || kind == CenterKind::center_of_mass;
}

/// Exact center region for the given object regions. Throws InputError for
/// the 1-center and 1-median in d >= 2, where no exact region is available.
inline CenterRegion center_region(CenterKind kind, std::span<const UncertaintyBall> balls,
                                  std::span<const double> weights) {
  if (balls.empty()) throw InputError("center_region: empty input");
  const std::size_t dim = balls.front().center.dim();
  if (!has_exact_region(kind, dim)) {
    throw InputError("no exact region for " + std::string(to_string(kind)) + " in d >= 2");
  }
  switch (kind) {
    case CenterKind::one_center: return region_one_center_1d(balls);
    case CenterKind::one_median: return region_one_median_1d(balls);
    case CenterKind::centroid: {
      std::vector<double> ones(balls.size(), 1.0);
      return region_center_of_mass(balls, ones);
    }
    case CenterKind::center_of_mass: return region_center_of_mass(balls, weights);
  }
  throw InputError("center_region: unknown center kind");
}

// ---------------------------------------------------------------------------
// Sampled lower bound
// ---------------------------------------------------------------------------

namespace detail {

// Center plus the 2d axis-aligned extreme points of a ball.
inline std::vector<Point> ball_corners(const UncertaintyBall& ball) {
  std::vector<Point> out{ball.center};
  if (ball.radius == 0.0) return out;
  for (std::size_t k = 0; k < ball.center.dim(); ++k) {
    for (double sign : {-1.0, 1.0}) {
      Point p = ball.center;
      p[k] += sign * ball.radius;
      out.push_back(std::move(p));
    }
  }
  return out;
}

inline Point uniform_in_ball(const UncertaintyBall& ball, std::mt19937_64& rng) {
  const std::size_t d = ball.center.dim();
  if (ball.radius == 0.0) return ball.center;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Point dir(d);
  double len = 0.0;
  while (len < 1e-12) {
    for (std::size_t k = 0; k < d; ++k) dir[k] = gauss(rng);
    len = dir.norm();
  }
  const double r = ball.radius * std::pow(unit(rng), 1.0 / static_cast<double>(d));
  return ball.center + dir * (r / len);
}

inline constexpr std::size_t kMaxCornerRealizations = 4096;

}  // namespace detail

/// Lower bound on the size of a center's uncertainty region, certified by
/// witnesses: every realization places one point inside each ball, so each
/// computed center lies in the true region and their diameter bounds its
/// size from below.
///
/// The realization set is the full corner product when it has at most 4096
/// members (otherwise single-ball and common-direction corner moves), plus
/// `sample_count` independent uniform draws.
inline SampledRegion sampled_center_region(std::span<const UncertaintyBall> balls, CenterKind kind,
                                           std::size_t sample_count, std::uint64_t seed,
                                           std::span<const double> weights = {}) {
  if (balls.empty()) throw InputError("sampled_center_region: empty input");
  if (sample_count < 2) throw InputError("sampled_center_region: need sample_count >= 2");
  std::vector<double> w(weights.begin(), weights.end());
  if (w.empty()) w.assign(balls.size(), 1.0);
  if (w.size() != balls.size()) throw InputError("sampled_center_region: weight count mismatch");

  std::vector<std::vector<Point>> corners;
  corners.reserve(balls.size());
  double product = 1.0;
  for (const auto& b : balls) {
    corners.push_back(detail::ball_corners(b));
    product *= static_cast<double>(corners.back().size());
  }

  SampledRegion region;
  auto add = [&](const std::vector<Point>& realization) {
    region.witnesses.push_back(realized_center(kind, realization, w));
  };

  std::vector<Point> realization;
  realization.reserve(balls.size());
  if (product <= static_cast<double>(detail::kMaxCornerRealizations)) {
    std::vector<std::size_t> idx(balls.size(), 0);
    while (true) {
      realization.clear();
      for (std::size_t i = 0; i < balls.size(); ++i) realization.push_back(corners[i][idx[i]]);
      add(realization);
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == corners[pos].size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  } else {
    std::vector<Point> centers;
    for (const auto& b : balls) centers.push_back(b.center);
    add(centers);
    for (std::size_t i = 0; i < balls.size(); ++i) {
      for (std::size_t c = 1; c < corners[i].size(); ++c) {
        realization = centers;
        realization[i] = corners[i][c];
        add(realization);
      }
    }
    const std::size_t directions = 2 * balls.front().center.dim();
    for (std::size_t c = 1; c <= directions; ++c) {
      realization.clear();
      for (std::size_t i = 0; i < balls.size(); ++i) {
        realization.push_back(corners[i].size() > c ? corners[i][c] : corners[i][0]);
      }
      add(realization);
    }
  }

  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < sample_count; ++s) {
    realization.clear();
    for (const auto& b : balls) realization.push_back(detail::uniform_in_ball(b, rng));
    add(realization);
  }

  const auto& wit = region.witnesses;
  for (std::size_t i = 0; i < wit.size(); ++i) {
    for (std::size_t j = i + 1; j < wit.size(); ++j) {
      region.lower_bound_size = std::max(region.lower_bound_size, distance(wit[i], wit[j]));
    }
  }
  return region;
}

inline double sampled_center_size_lower_bound(std::span<const UncertaintyBall> balls, CenterKind kind,
                                              std::size_t sample_count, std::uint64_t seed,
                                              std::span<const double> weights = {}) {
  return sampled_center_region(balls, kind, sample_count, seed, weights).lower_bound_size;
}

}  // namespace ucenters
