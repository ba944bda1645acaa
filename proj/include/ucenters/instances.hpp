#pragma once

// Instance constructions: the lower-bound families, the unboundedness
// examples in the plane, and seeded random generators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ucenters/core.hpp"

namespace ucenters::instances {

/// Default number of steps a "moves forever" trajectory must cover; its last
/// waypoint is placed at ten times this.
inline constexpr double kDefaultMotionHorizon = 1000.0;

namespace detail {

inline MovingObject stationary(Point at, double v, double weight = 1.0) {
  return {weight, v, Trajectory::stationary(std::move(at))};
}

// Constant-velocity motion from `from` along unit `dir` for `duration`, then hold.
inline MovingObject linear(Point from, const Point& dir, double v, double duration, double weight = 1.0) {
  Point to = from + dir * (v * duration);
  return {weight, v, Trajectory({{0.0, std::move(from)}, {duration, std::move(to)}})};
}

inline Instance make(std::size_t dim, std::vector<MovingObject> objects, CenterKind kind, std::string family) {
  Instance inst;
  inst.dim = dim;
  inst.objects = std::move(objects);
  inst.center_kind = kind;
  inst.queries_per_step = 1;
  inst.meta.family = std::move(family);
  return inst;
}

inline void require(bool cond, const char* what) {
  if (!cond) throw InputError(what);
}

}  // namespace detail

/// n static objects at the origin of the line.
inline Instance static_at_origin(std::size_t n, double v, CenterKind kind = CenterKind::one_center) {
  detail::require(n >= 2, "static_at_origin: need n >= 2");
  detail::require(v >= 0.0, "static_at_origin: v must be non-negative");
  std::vector<MovingObject> objs;
  for (std::size_t i = 0; i < n; ++i) objs.push_back(detail::stationary(Point{0.0}, v));
  auto inst = detail::make(1, std::move(objs), kind, "static_at_origin");
  inst.meta.params = {{"n", static_cast<double>(n)}, {"v", v}};
  return inst;
}

/// n objects at the origin; object 1 moves at +v and object 2 at -v
/// "forever", the rest stay put. Use movers_last() for the adversarial order.
inline Instance two_movers_1d(std::size_t n, double v, double motion_horizon = kDefaultMotionHorizon,
                              CenterKind kind = CenterKind::one_center) {
  detail::require(n >= 3, "two_movers_1d: need n >= 3");
  detail::require(v > 0.0, "two_movers_1d: v must be positive");
  const double until = 10.0 * motion_horizon;
  std::vector<MovingObject> objs;
  objs.push_back(detail::linear(Point{0.0}, Point{1.0}, v, until));
  objs.push_back(detail::linear(Point{0.0}, Point{-1.0}, v, until));
  for (std::size_t i = 2; i < n; ++i) objs.push_back(detail::stationary(Point{0.0}, v));
  auto inst = detail::make(1, std::move(objs), kind, "two_movers_1d");
  inst.meta.params = {{"n", static_cast<double>(n)}, {"v", v}, {"motion_until", until}};
  return inst;
}

/// Lower-bound family for the 1-median on the line.
///
/// Odd n: ceil(n/2) objects at 0 and floor(n/2) at 10vn; object 1 walks to
/// 3vn and stops. Even n: n/2 at each site; object 1 walks to 3vn and object
/// n/2 + 1 walks from 10vn down to 7vn. Both walks take 3n time units.
inline Instance median_movers(std::size_t n, double v) {
  detail::require(n >= 3, "median_movers: need n >= 3");
  detail::require(v > 0.0, "median_movers: v must be positive");
  const double nn = static_cast<double>(n);
  const double far = 10.0 * v * nn;
  const double walk = 3.0 * nn;
  const std::size_t near_count = (n + 1) / 2;
  std::vector<MovingObject> objs;
  objs.push_back(detail::linear(Point{0.0}, Point{1.0}, v, walk));
  for (std::size_t i = 1; i < near_count; ++i) objs.push_back(detail::stationary(Point{0.0}, v));
  for (std::size_t i = near_count; i < n; ++i) {
    if (n % 2 == 0 && i == near_count) {
      objs.push_back(detail::linear(Point{far}, Point{-1.0}, v, walk));
    } else {
      objs.push_back(detail::stationary(Point{far}, v));
    }
  }
  auto inst = detail::make(1, std::move(objs), CenterKind::one_median, "median_movers");
  inst.meta.params = {{"n", static_cast<double>(n)}, {"v", v}, {"far_site", far}, {"stop_time", walk}};
  return inst;
}

/// Three static objects at (-2L, 0), (2L, 0) and (0, G) in the plane.
/// G = 1.1 * max(8L^2/v, 150L^2/v) satisfies both 8L^2 <= Gv (the segment from
/// (0, G) to (2L, -v) is a diameter of a circle enclosing (-2L, 0)) and the
/// strip inequality 100L^2 <= 2(G/3)v + v^2.
inline Instance unbounded_1center_2d(double L, double v) {
  detail::require(L > 0.0, "unbounded_1center_2d: L must be positive");
  detail::require(v > 0.0, "unbounded_1center_2d: v must be positive");
  const double G = 1.1 * std::max(8.0 * L * L / v, 150.0 * L * L / v);
  std::vector<MovingObject> objs;
  objs.push_back(detail::stationary(Point{-2.0 * L, 0.0}, v));
  objs.push_back(detail::stationary(Point{2.0 * L, 0.0}, v));
  objs.push_back(detail::stationary(Point{0.0, G}, v));
  auto inst = detail::make(2, std::move(objs), CenterKind::one_center, "unbounded_1center_2d");
  inst.meta.params = {{"L", L}, {"v", v}, {"G", G}};
  return inst;
}

/// The strip construction for the 1-center in the plane (n >= 28).
///
/// A rests at a = (0, G), B at b = (-2L, 0). With u = c - a for c = (2L, 0),
/// E starts at e = c + v(n-3)û and keeps moving along û, while n-3 objects
/// start at e and walk back to c, arriving after n-3 time units.
/// G = 1.1 * 3(100L^2 - v^2) / (2v).
inline Instance strip_1center_2d(std::size_t n, double v, double L,
                                 double motion_horizon = kDefaultMotionHorizon) {
  detail::require(n >= 28, "strip_1center_2d: need n >= 28");
  detail::require(L > 0.0 && v > 0.0, "strip_1center_2d: L and v must be positive");
  const double G = 1.1 * 3.0 * (100.0 * L * L - v * v) / (2.0 * v);
  const Point a{0.0, G};
  const Point b{-2.0 * L, 0.0};
  const Point c{2.0 * L, 0.0};
  const Point u = c - a;
  const Point u_hat = u * (1.0 / u.norm());
  const double back = static_cast<double>(n - 3);
  const Point e = c + u_hat * (v * back);
  std::vector<MovingObject> objs;
  objs.push_back(detail::stationary(a, v));
  objs.push_back(detail::stationary(b, v));
  objs.push_back(detail::linear(e, u_hat, v, 10.0 * motion_horizon));
  for (std::size_t i = 3; i < n; ++i) objs.push_back(detail::linear(e, u_hat * -1.0, v, back));
  auto inst = detail::make(2, std::move(objs), CenterKind::one_center, "strip_1center_2d");
  inst.meta.params = {{"n", static_cast<double>(n)}, {"v", v},        {"L", L},
                      {"G", G},                      {"stop_time", back}, {"motion_until", 10.0 * motion_horizon}};
  return inst;
}

/// Four static objects at (0, 0), (0, v), (L, 0) and (L, v).
inline Instance unbounded_1median_2d(double L, double v) {
  detail::require(L > 0.0 && v > 0.0, "unbounded_1median_2d: L and v must be positive");
  std::vector<MovingObject> objs;
  objs.push_back(detail::stationary(Point{0.0, 0.0}, v));
  objs.push_back(detail::stationary(Point{0.0, v}, v));
  objs.push_back(detail::stationary(Point{L, 0.0}, v));
  objs.push_back(detail::stationary(Point{L, v}, v));
  auto inst = detail::make(2, std::move(objs), CenterKind::one_median, "unbounded_1median_2d");
  inst.meta.params = {{"L", L}, {"v", v}};
  return inst;
}

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

struct RandomSpec {
  std::size_t n = 4;
  std::size_t dim = 1;
  std::uint64_t seed = 1;
  double span = 4.0;                 ///< positions drawn in [0, span]^dim
  double weight_min = 1.0, weight_max = 1.0;
  double speed_min = 1.0, speed_max = 1.0;
  std::size_t segments = 0;          ///< 0: static objects
  double segment_duration = 5.0;
  CenterKind kind = CenterKind::one_center;
};

namespace detail {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  if (lo == hi) return lo;
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace detail

/// Seeded instance with log-uniform weights and speeds. With segments > 0
/// each object follows a random piecewise-linear path below its speed limit.
inline Instance random_instance(const RandomSpec& spec) {
  detail::require(spec.n >= 2, "random_instance: need n >= 2");
  detail::require(spec.dim >= 1, "random_instance: need dim >= 1");
  detail::require(spec.weight_min > 0.0 && spec.weight_min <= spec.weight_max, "random_instance: bad weight range");
  detail::require(spec.speed_min > 0.0 && spec.speed_min <= spec.speed_max, "random_instance: bad speed range");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> pos(0.0, spec.span);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<MovingObject> objs;
  for (std::size_t i = 0; i < spec.n; ++i) {
    MovingObject obj;
    obj.weight = spec.kind == CenterKind::centroid ? 1.0 : detail::log_uniform(rng, spec.weight_min, spec.weight_max);
    obj.max_speed = detail::log_uniform(rng, spec.speed_min, spec.speed_max);
    Point start(spec.dim);
    for (std::size_t k = 0; k < spec.dim; ++k) start[k] = pos(rng);
    std::vector<Waypoint> wps{{0.0, start}};
    for (std::size_t s = 0; s < spec.segments; ++s) {
      Point dir(spec.dim);
      double len = 0.0;
      while (len < 1e-9) {
        for (std::size_t k = 0; k < spec.dim; ++k) dir[k] = gauss(rng);
        len = dir.norm();
      }
      const double step = obj.max_speed * spec.segment_duration * 0.999 * unit(rng);
      wps.push_back({wps.back().time + spec.segment_duration, wps.back().position + dir * (step / len)});
    }
    obj.trajectory = Trajectory(std::move(wps));
    objs.push_back(std::move(obj));
  }
  auto inst = detail::make(spec.dim, std::move(objs), spec.kind, "random");
  inst.meta.params = {{"n", static_cast<double>(spec.n)}, {"seed", static_cast<double>(spec.seed)},
                      {"span", spec.span}};
  return inst;
}

/// Static unit-weight objects in [0, span] with common speed v.
inline Instance random_static(std::size_t n, std::uint64_t seed, double span, double v = 1.0,
                              CenterKind kind = CenterKind::one_center) {
  RandomSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.span = span;
  spec.speed_min = spec.speed_max = v;
  spec.kind = kind;
  auto inst = random_instance(spec);
  inst.meta.family = "random_static";
  return inst;
}

/// Weighted center-of-mass instance with distinct speeds.
inline Instance random_weighted(std::size_t n, std::uint64_t seed, double span, double weight_max,
                                double speed_max, std::size_t dim = 2, std::size_t segments = 3) {
  RandomSpec spec;
  spec.n = n;
  spec.dim = dim;
  spec.seed = seed;
  spec.span = span;
  spec.weight_min = 1.0;
  spec.weight_max = weight_max;
  spec.speed_min = 1.0;
  spec.speed_max = speed_max;
  spec.segments = segments;
  spec.kind = CenterKind::center_of_mass;
  auto inst = random_instance(spec);
  inst.meta.family = "random_weighted";
  return inst;
}

// ---------------------------------------------------------------------------
// Relabeling
// ---------------------------------------------------------------------------

/// New object k is old object perm[k].
inline Instance relabel(const Instance& inst, const std::vector<std::size_t>& perm) {
  if (perm.size() != inst.size()) throw InputError("relabel: permutation size mismatch");
  std::vector<bool> seen(perm.size(), false);
  Instance out = inst;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] >= perm.size() || seen[perm[k]]) throw InputError("relabel: not a permutation");
    seen[perm[k]] = true;
    out.objects[k] = inst.objects[perm[k]];
  }
  return out;
}

/// Static objects first, moving objects last (adversarial order for
/// schedulers that do not know the trajectories).
inline Instance movers_last(const Instance& inst) {
  std::vector<std::size_t> perm(inst.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_partition(perm.begin(), perm.end(),
                        [&](std::size_t i) { return inst.objects[i].trajectory.is_static(); });
  return relabel(inst, perm);
}

/// Ids of the objects that ever move.
inline std::vector<std::size_t> mover_ids(const Instance& inst) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (!inst.objects[i].trajectory.is_static()) out.push_back(i);
  }
  return out;
}

/// Reference period that knows who moves: each static object in turn
/// preceded by every mover, e.g. [m, s1, m, s2, ...] for one mover.
/// With `movers_only`, just the movers in id order.
inline std::vector<std::size_t> mover_reference_period(const Instance& inst, bool movers_only = false) {
  const auto movers = mover_ids(inst);
  if (movers.empty()) throw InputError("mover_reference_period: instance has no moving objects");
  if (movers_only) return movers;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (!inst.objects[i].trajectory.is_static()) continue;
    out.insert(out.end(), movers.begin(), movers.end());
    out.push_back(i);
  }
  if (out.empty()) out = movers;
  return out;
}

// ---------------------------------------------------------------------------
// Family specs (CLI surface)
// ---------------------------------------------------------------------------

struct FamilySpec {
  std::string name;
  std::size_t n = 4;
  double v = 1.0;
  double L = 10.0;
  std::uint64_t seed = 1;
  double span = 4.0;
  double weight_max = 10.0;
  double speed_max = 4.0;
  double motion_horizon = kDefaultMotionHorizon;
  std::optional<CenterKind> kind;
};

inline std::vector<std::string> family_names() {
  return {"static_at_origin",     "two_movers_1d",        "median_movers", "unbounded_1center_2d",
          "strip_1center_2d",     "unbounded_1median_2d", "random_static", "random_weighted"};
}

inline Instance make_family(const FamilySpec& f) {
  Instance inst;
  if (f.name == "static_at_origin") {
    inst = static_at_origin(f.n, f.v);
  } else if (f.name == "two_movers_1d") {
    inst = two_movers_1d(f.n, f.v, f.motion_horizon);
  } else if (f.name == "median_movers") {
    inst = median_movers(f.n, f.v);
  } else if (f.name == "unbounded_1center_2d") {
    inst = unbounded_1center_2d(f.L, f.v);
  } else if (f.name == "strip_1center_2d") {
    inst = strip_1center_2d(f.n, f.v, f.L, f.motion_horizon);
  } else if (f.name == "unbounded_1median_2d") {
    inst = unbounded_1median_2d(f.L, f.v);
  } else if (f.name == "random_static") {
    inst = random_static(f.n, f.seed, f.span, f.v);
  } else if (f.name == "random_weighted") {
    inst = random_weighted(f.n, f.seed, f.span, f.weight_max, f.speed_max);
  } else {
    throw InputError("unknown family '" + f.name + "'");
  }
  if (f.kind) {
    inst.center_kind = *f.kind;
    if (*f.kind == CenterKind::centroid) {
      for (auto& obj : inst.objects) obj.weight = 1.0;
    }
  }
  require_valid(inst);
  return inst;
}

}  // namespace ucenters::instances
