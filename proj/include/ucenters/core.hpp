#pragma once

// Geometry, trajectories, instances and observation state shared by the
// rest of the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ucenters {

/// Global comparison tolerance for real-valued geometry.
inline constexpr double kTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad input: violated precondition, malformed file, invalid parameter.
struct InputError : Error {
  using Error::Error;
};

/// The computation is well-posed but cannot produce an answer
/// (infeasible, or a configured search budget was exhausted).
struct DomainError : Error {
  using Error::Error;
};

struct BudgetExceeded : DomainError {
  using DomainError::DomainError;
};

/// Reads UNCERTAIN_CENTERS_BUDGET, falling back to `fallback` when unset or
/// unparsable.
inline std::uint64_t budget_from_env(std::uint64_t fallback) {
  const char* raw = std::getenv("UNCERTAIN_CENTERS_BUDGET");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || parsed == 0) return fallback;
  return parsed;
}

// ---------------------------------------------------------------------------
// Point
// ---------------------------------------------------------------------------

class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : coords_(dim, 0.0) {}
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t k) const { return coords_[k]; }
  double& operator[](std::size_t k) { return coords_[k]; }
  std::span<const double> coords() const noexcept { return coords_; }

  bool is_finite() const {
    return std::all_of(coords_.begin(), coords_.end(),
                       [](double c) { return std::isfinite(c); });
  }

  Point& operator+=(const Point& o) {
    check_same_dim(o);
    for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] += o.coords_[k];
    return *this;
  }
  Point& operator-=(const Point& o) {
    check_same_dim(o);
    for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] -= o.coords_[k];
    return *this;
  }
  Point& operator*=(double s) {
    for (double& c : coords_) c *= s;
    return *this;
  }

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend bool operator==(const Point&, const Point&) = default;

  double dot(const Point& o) const {
    check_same_dim(o);
    double acc = 0.0;
    for (std::size_t k = 0; k < coords_.size(); ++k) acc += coords_[k] * o.coords_[k];
    return acc;
  }
  double norm() const { return std::sqrt(dot(*this)); }

 private:
  void check_same_dim(const Point& o) const {
    if (o.coords_.size() != coords_.size()) {
      throw InputError("point dimension mismatch");
    }
  }

  std::vector<double> coords_;
};

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

// ---------------------------------------------------------------------------
// Trajectory
// ---------------------------------------------------------------------------

struct Waypoint {
  double time = 0.0;
  Point position;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// Piecewise-linear motion; the object holds its final waypoint forever.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {}

  static Trajectory stationary(Point at) { return Trajectory({Waypoint{0.0, std::move(at)}}); }

  const std::vector<Waypoint>& waypoints() const noexcept { return waypoints_; }
  bool empty() const noexcept { return waypoints_.empty(); }
  std::size_t dim() const { return waypoints_.empty() ? 0 : waypoints_.front().position.dim(); }
  double end_time() const { return waypoints_.empty() ? 0.0 : waypoints_.back().time; }

  /// True when every waypoint sits at the same location.
  bool is_static() const {
    return std::all_of(waypoints_.begin(), waypoints_.end(), [&](const Waypoint& w) {
      return w.position == waypoints_.front().position;
    });
  }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<Waypoint> waypoints_;
};

inline Point position_at(const Trajectory& trajectory, double t) {
  if (!(t >= 0.0)) throw InputError("position_at: time must be non-negative");
  const auto& wps = trajectory.waypoints();
  if (wps.empty()) throw InputError("position_at: empty trajectory");
  if (t >= wps.back().time) return wps.back().position;
  // First waypoint strictly after t; t >= wps.front().time == 0.
  auto hi = std::upper_bound(wps.begin(), wps.end(), t,
                             [](double value, const Waypoint& w) { return value < w.time; });
  auto lo = std::prev(hi);
  const double span = hi->time - lo->time;
  const double elapsed = t - lo->time;
  // Multiply before dividing so integral motions stay exact.
  std::vector<double> out(lo->position.dim());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = lo->position[k] + (hi->position[k] - lo->position[k]) * elapsed / span;
  }
  return Point(std::move(out));
}

// ---------------------------------------------------------------------------
// Objects and instances
// ---------------------------------------------------------------------------

struct MovingObject {
  double weight = 1.0;
  double max_speed = 0.0;
  Trajectory trajectory;

  friend bool operator==(const MovingObject&, const MovingObject&) = default;
};

enum class CenterKind { one_center, centroid, center_of_mass, one_median };

inline std::string_view to_string(CenterKind kind) {
  switch (kind) {
    case CenterKind::one_center: return "one_center";
    case CenterKind::centroid: return "centroid";
    case CenterKind::center_of_mass: return "center_of_mass";
    case CenterKind::one_median: return "one_median";
  }
  return "?";
}

inline std::optional<CenterKind> center_kind_from_string(std::string_view name) {
  if (name == "one_center") return CenterKind::one_center;
  if (name == "centroid") return CenterKind::centroid;
  if (name == "center_of_mass") return CenterKind::center_of_mass;
  if (name == "one_median") return CenterKind::one_median;
  return std::nullopt;
}

/// Generator echoes (family name, chosen constants) kept alongside an instance.
struct InstanceMeta {
  std::string family;
  std::map<std::string, double> params;

  friend bool operator==(const InstanceMeta&, const InstanceMeta&) = default;
};

struct Instance {
  std::size_t dim = 1;
  std::vector<MovingObject> objects;
  CenterKind center_kind = CenterKind::one_center;
  std::size_t queries_per_step = 1;
  InstanceMeta meta;

  std::size_t size() const noexcept { return objects.size(); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Violation {
  std::optional<std::size_t> object;   // 0-based
  std::optional<std::size_t> segment;  // 0-based
  std::string message;
};

inline std::string describe(const Violation& v) {
  std::string out;
  if (v.object) out += "object " + std::to_string(*v.object + 1) + ": ";
  if (v.segment) out += "segment " + std::to_string(*v.segment + 1) + ": ";
  return out + v.message;
}

/// Checks every instance invariant. An empty result means the instance is valid.
inline std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto report = [&](std::optional<std::size_t> obj, std::optional<std::size_t> seg,
                    std::string msg) { out.push_back({obj, seg, std::move(msg)}); };

  if (inst.dim < 1) report(std::nullopt, std::nullopt, "dim must be >= 1");
  if (inst.objects.size() < 2) report(std::nullopt, std::nullopt, "need n >= 2 objects");
  if (inst.queries_per_step < 1) report(std::nullopt, std::nullopt, "queries_per_step must be >= 1");

  for (std::size_t i = 0; i < inst.objects.size(); ++i) {
    const MovingObject& obj = inst.objects[i];
    if (!(obj.weight > 0.0) || !std::isfinite(obj.weight)) report(i, std::nullopt, "weight must be positive");
    if (inst.center_kind == CenterKind::centroid && obj.weight != 1.0) {
      report(i, std::nullopt, "centroid instances require unit weights");
    }
    if (!(obj.max_speed >= 0.0) || !std::isfinite(obj.max_speed)) {
      report(i, std::nullopt, "max_speed must be non-negative");
    }
    const auto& wps = obj.trajectory.waypoints();
    if (wps.empty()) {
      report(i, std::nullopt, "trajectory has no waypoints");
      continue;
    }
    if (wps.front().time != 0.0) report(i, std::nullopt, "first waypoint must be at time 0");
    for (std::size_t j = 0; j < wps.size(); ++j) {
      if (wps[j].position.dim() != inst.dim) {
        report(i, std::nullopt, "waypoint " + std::to_string(j + 1) + " has wrong dimension");
      } else if (!wps[j].position.is_finite()) {
        report(i, std::nullopt, "waypoint " + std::to_string(j + 1) + " is not finite");
      }
    }
    for (std::size_t j = 0; j + 1 < wps.size(); ++j) {
      const double dt = wps[j + 1].time - wps[j].time;
      if (!(dt > 0.0)) {
        report(i, j, "waypoint times must be strictly increasing");
        continue;
      }
      if (wps[j].position.dim() != wps[j + 1].position.dim()) continue;
      const double speed = distance(wps[j].position, wps[j + 1].position) / dt;
      if (speed > obj.max_speed * (1.0 + kTolerance) + kTolerance * kTolerance) {
        report(i, j, "segment speed " + std::to_string(speed) + " exceeds max_speed " +
                         std::to_string(obj.max_speed));
      }
    }
  }
  return out;
}

inline void require_valid(const Instance& inst) {
  const auto violations = validate_instance(inst);
  if (violations.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& v : violations) msg += "\n  " + describe(v);
  throw InputError(msg);
}

// ---------------------------------------------------------------------------
// Uncertainty regions
// ---------------------------------------------------------------------------

struct UncertaintyBall {
  Point center;
  double radius = 0.0;

  // 1-D endpoints.
  double start() const { return center[0] - radius; }
  double end() const { return center[0] + radius; }
};

/// Diameter of the ball; in 1-D this is end - start.
inline double region_size(const UncertaintyBall& ball) { return 2.0 * ball.radius; }

struct Observation {
  Point last_known;
  double last_time = 0.0;
};

/// Last exact fix of every object. Owned by a single simulation run.
class ObservationState {
 public:
  ObservationState() = default;

  /// Everything is known exactly at time 0.
  explicit ObservationState(const Instance& inst) {
    entries_.reserve(inst.objects.size());
    for (const auto& obj : inst.objects) {
      entries_.push_back({position_at(obj.trajectory, 0.0), 0.0});
    }
  }

  std::size_t size() const noexcept { return entries_.size(); }
  const Observation& operator[](std::size_t i) const { return entries_[i]; }

  void record_query(std::size_t i, const MovingObject& obj, double t) {
    if (t < entries_.at(i).last_time) throw InputError("record_query: clock regression");
    entries_[i] = {position_at(obj.trajectory, t), t};
  }

 private:
  std::vector<Observation> entries_;
};

inline UncertaintyBall region_of(const MovingObject& obj, const Observation& obs, double t) {
  if (t < obs.last_time) throw InputError("region_of: time precedes last query (clock regression)");
  return {obs.last_known, obj.max_speed * (t - obs.last_time)};
}

inline std::vector<UncertaintyBall> regions_at(const Instance& inst, const ObservationState& state,
                                               double t) {
  std::vector<UncertaintyBall> out;
  out.reserve(inst.objects.size());
  for (std::size_t i = 0; i < inst.objects.size(); ++i) {
    out.push_back(region_of(inst.objects[i], state[i], t));
  }
  return out;
}

}  // namespace ucenters
