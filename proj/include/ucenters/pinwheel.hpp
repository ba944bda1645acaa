#pragma once

// Pinwheel scheduling toolkit.
//
// A pinwheel instance is a multiset of windows a_1..a_n; a schedule is an
// infinite sequence in which item i appears in every a_i consecutive slots.
// Everything here is exact: windows are integers and densities are rationals.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ucenters/core.hpp"

namespace ucenters::pinwheel {

using Rational = boost::multiprecision::cpp_rational;
using Window = std::int64_t;

inline constexpr std::uint64_t kDefaultSearchBudget = 10'000'000;

/// Windows plus the object each window belongs to.
struct WindowMultiset {
  std::vector<Window> windows;
  std::vector<std::size_t> ids;

  static WindowMultiset from_windows(std::vector<Window> windows) {
    WindowMultiset out;
    out.ids.resize(windows.size());
    std::iota(out.ids.begin(), out.ids.end(), std::size_t{0});
    out.windows = std::move(windows);
    return out;
  }

  std::size_t size() const noexcept { return windows.size(); }
  bool empty() const noexcept { return windows.empty(); }

  void push_back(Window w, std::size_t id) {
    windows.push_back(w);
    ids.push_back(id);
  }

  void validate() const {
    if (windows.size() != ids.size()) throw InputError("window multiset: id count mismatch");
    for (Window w : windows) {
      if (w < 1) throw InputError("window multiset: windows must be >= 1");
    }
  }
};

inline Rational density(std::span<const Window> windows) {
  Rational sum = 0;
  for (Window w : windows) {
    if (w < 1) throw InputError("density: windows must be >= 1");
    sum += Rational(1, w);
  }
  return sum;
}

inline Rational density(const WindowMultiset& a) { return density(a.windows); }

inline std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// One channel's repeating slot sequence; nullopt marks an idle slot.
struct PeriodicSchedule {
  std::vector<std::optional<std::size_t>> slots;
  std::size_t channel = 0;

  std::size_t period() const noexcept { return slots.size(); }
  bool empty() const noexcept { return slots.empty(); }

  std::optional<std::size_t> at(std::int64_t t) const {
    if (slots.empty()) return std::nullopt;
    const auto len = static_cast<std::int64_t>(slots.size());
    return slots[static_cast<std::size_t>(((t - 1) % len + len) % len)];
  }
};

/// Period rendered with 1-based ids, '-' for idle, e.g. "1 2 1 3".
inline std::string format_period(const PeriodicSchedule& s) {
  std::string out;
  for (std::size_t k = 0; k < s.slots.size(); ++k) {
    if (k) out += ' ';
    out += s.slots[k] ? std::to_string(*s.slots[k] + 1) : std::string("-");
  }
  return out;
}

/// Independent check: scans two full periods of the infinite repetition and
/// confirms every window contains its item.
inline bool verify_schedule(const PeriodicSchedule& sched, const WindowMultiset& a) {
  a.validate();
  if (a.empty()) return true;
  if (sched.empty()) return false;
  const std::size_t len = sched.period();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t id = a.ids[i];
    const auto w = static_cast<std::size_t>(a.windows[i]);
    // Every window starting in the first period, running into the second.
    std::size_t since = 0;  // slots since last occurrence, tracked over 2 periods + w
    bool seen = false;
    const std::size_t horizon = 2 * len + w;
    for (std::size_t k = 0; k < horizon; ++k) {
      if (sched.slots[k % len] == id) {
        seen = true;
        since = 0;
      } else {
        ++since;
        if (since >= w) return false;
      }
    }
    if (!seen) return false;
  }
  return true;
}

struct SchedulabilityResult {
  bool schedulable = false;
  std::optional<PeriodicSchedule> witness;
  std::uint64_t states_explored = 0;
};

namespace detail {

// Rotation that is lexicographically smallest, with idle ordered last.
inline std::vector<std::optional<std::size_t>> canonical_rotation(
    std::vector<std::optional<std::size_t>> slots) {
  if (slots.empty()) return slots;
  auto rank = [](const std::optional<std::size_t>& s) {
    return s ? *s : std::numeric_limits<std::size_t>::max();
  };
  std::size_t best = 0;
  const std::size_t len = slots.size();
  for (std::size_t r = 1; r < len; ++r) {
    for (std::size_t k = 0; k < len; ++k) {
      const auto a = rank(slots[(r + k) % len]);
      const auto b = rank(slots[(best + k) % len]);
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  std::rotate(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(best), slots.end());
  return slots;
}

// Mixed-radix code of a counter vector when the product of windows fits in
// 64 bits, otherwise a byte string.
class StateCodec {
 public:
  explicit StateCodec(std::span<const Window> windows) : windows_(windows.begin(), windows.end()) {
    unsigned __int128 product = 1;
    for (Window w : windows_) {
      product *= static_cast<unsigned __int128>(w);
      if (product > std::numeric_limits<std::uint64_t>::max()) {
        compact_ = false;
        break;
      }
    }
  }

  std::string encode(std::span<const Window> remaining) const {
    std::string key;
    if (compact_) {
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < remaining.size(); ++i) {
        code = code * static_cast<std::uint64_t>(windows_[i]) + static_cast<std::uint64_t>(remaining[i] - 1);
      }
      key.assign(reinterpret_cast<const char*>(&code), sizeof(code));
    } else {
      key.assign(reinterpret_cast<const char*>(remaining.data()), remaining.size() * sizeof(Window));
    }
    return key;
  }

 private:
  std::vector<Window> windows_;
  bool compact_ = true;
};

}  // namespace detail

/// Decides pinwheel schedulability by searching the deadline-counter graph.
///
/// A state holds, per item, the number of slots left before it must next
/// appear (1..a_i). Scheduling item j resets its counter to a_j and
/// decrements the rest; a counter may not reach 0. The multiset is
/// schedulable iff a cycle is reachable from the all-fresh state, and the
/// cycle's choices form the witness period.
///
/// Density above 1 is rejected without searching. Throws BudgetExceeded
/// when more than `budget` states would have to be visited.
inline SchedulabilityResult is_schedulable_exact(const WindowMultiset& a,
                                                 std::uint64_t budget = kDefaultSearchBudget) {
  a.validate();
  SchedulabilityResult result;
  if (a.empty()) {
    result.schedulable = true;
    result.witness = PeriodicSchedule{{std::nullopt}, 0};
    return result;
  }
  if (density(a) > 1) return result;

  const std::size_t n = a.size();
  const detail::StateCodec codec(a.windows);

  struct Frame {
    std::vector<Window> remaining;
    std::string key;
    std::vector<std::size_t> choices;
    std::size_t next = 0;
  };

  // Candidate items in earliest-deadline order; if one item is due now it is
  // the only option, two due items make the state a dead end.
  auto candidates = [&](const std::vector<Window>& rem) {
    std::vector<std::size_t> order;
    std::size_t due = 0;
    for (std::size_t i = 0; i < n; ++i) due += rem[i] == 1 ? 1 : 0;
    if (due > 1) return order;
    for (std::size_t i = 0; i < n; ++i) {
      if (due == 1 && rem[i] != 1) continue;
      order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return rem[x] < rem[y]; });
    return order;
  };

  // Value >= 0: position on the DFS stack. -1: explored, no cycle reachable.
  std::unordered_map<std::string, std::int64_t> visited;
  std::vector<Frame> stack;

  auto push = [&](std::vector<Window> rem) {
    Frame f;
    f.key = codec.encode(rem);
    f.choices = candidates(rem);
    f.remaining = std::move(rem);
    visited.emplace(f.key, static_cast<std::int64_t>(stack.size()));
    if (visited.size() > budget) {
      throw BudgetExceeded("pinwheel search undecided at configured budget of " +
                           std::to_string(budget) + " states");
    }
    stack.push_back(std::move(f));
  };

  push(std::vector<Window>(a.windows.begin(), a.windows.end()));
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.choices.size()) {
      visited[top.key] = -1;
      stack.pop_back();
      continue;
    }
    const std::size_t pick = top.choices[top.next++];
    std::vector<Window> rem = top.remaining;
    for (std::size_t i = 0; i < n; ++i) rem[i] = (i == pick) ? a.windows[i] : rem[i] - 1;
    const std::string key = codec.encode(rem);
    auto it = visited.find(key);
    if (it == visited.end()) {
      push(std::move(rem));
      continue;
    }
    if (it->second < 0) continue;
    // Back edge: the choices from the repeated state up to here form a cycle.
    std::vector<std::optional<std::size_t>> slots;
    for (auto k = static_cast<std::size_t>(it->second); k < stack.size(); ++k) {
      slots.push_back(a.ids[stack[k].choices[stack[k].next - 1]]);
    }
    result.schedulable = true;
    result.witness = PeriodicSchedule{detail::canonical_rotation(std::move(slots)), 0};
    result.states_explored = visited.size();
    return result;
  }
  result.states_explored = visited.size();
  return result;
}

// ---------------------------------------------------------------------------
// Partitions into schedulable parts
// ---------------------------------------------------------------------------

namespace detail {

struct Item {
  Window window;
  std::size_t id;
};

inline std::vector<Item> sorted_items(const WindowMultiset& a) {
  std::vector<Item> items;
  for (std::size_t i = 0; i < a.size(); ++i) items.push_back({a.windows[i], a.ids[i]});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& x, const Item& y) { return x.window < y.window; });
  return items;
}

inline WindowMultiset to_multiset(const std::vector<Item>& items) {
  WindowMultiset out;
  for (const auto& it : items) out.push_back(it.window, it.id);
  return out;
}

// Moves up to `count` items with window in [lo, hi] from `pool` into `dst`
// (smallest windows first); only when at least `count` are available.
inline bool take_if_available(std::vector<Item>& pool, std::vector<Item>& dst, Window lo, Window hi,
                              std::size_t count) {
  const auto available = std::count_if(pool.begin(), pool.end(), [&](const Item& it) {
    return it.window >= lo && it.window <= hi;
  });
  if (static_cast<std::size_t>(available) < count) return false;
  std::size_t taken = 0;
  std::vector<Item> rest;
  for (const auto& it : pool) {
    if (taken < count && it.window >= lo && it.window <= hi) {
      dst.push_back(it);
      ++taken;
    } else {
      rest.push_back(it);
    }
  }
  pool = std::move(rest);
  return true;
}

inline Rational density_of(const std::vector<Item>& items) {
  Rational sum = 0;
  for (const auto& it : items) sum += Rational(1, it.window);
  return sum;
}

}  // namespace detail

/// Splits a multiset of density <= 4/3 into two pinwheel-schedulable parts.
///
/// First part, in priority order: a single 1; two windows from {2,3}; four
/// from {4,5,6}. Otherwise the first part gets the {2,3} windows and the
/// second the {4,5,6} windows, and the remaining windows (all >= 7) join the
/// first part while its density is below 3/5, then the second.
inline std::pair<WindowMultiset, WindowMultiset> partition_two(const WindowMultiset& b) {
  b.validate();
  if (density(b) > Rational(4, 3)) throw InputError("partition_two: density exceeds 4/3");
  std::vector<detail::Item> pool = detail::sorted_items(b);
  std::vector<detail::Item> first;
  std::vector<detail::Item> second;

  if (detail::take_if_available(pool, first, 1, 1, 1) ||
      detail::take_if_available(pool, first, 2, 3, 2) ||
      detail::take_if_available(pool, first, 4, 6, 4)) {
    second = std::move(pool);
    return {detail::to_multiset(first), detail::to_multiset(second)};
  }

  std::vector<detail::Item> rest;
  for (const auto& it : pool) {
    if (it.window <= 3) {
      first.push_back(it);
    } else if (it.window <= 6) {
      second.push_back(it);
    } else {
      rest.push_back(it);
    }
  }
  Rational first_density = detail::density_of(first);
  const Rational threshold(3, 5);
  for (const auto& it : rest) {
    if (first_density < threshold) {
      first.push_back(it);
      first_density += Rational(1, it.window);
    } else {
      second.push_back(it);
    }
  }
  return {detail::to_multiset(first), detail::to_multiset(second)};
}

/// Splits a multiset of density <= 2 into three pinwheel-schedulable parts.
///
/// If a dense round-robin-schedulable part exists (a 1, two of {2,3}, four
/// of {4,5,6}, or five 7s) it becomes the first part and the rest goes
/// through partition_two. Otherwise {2,3}, {4,5,6} and 7-windows seed the
/// three parts and each remaining window (>= 8) joins the currently least
/// dense part, lowest index on ties.
inline std::array<WindowMultiset, 3> partition_three(const WindowMultiset& a) {
  a.validate();
  if (density(a) > 2) throw InputError("partition_three: density exceeds 2");
  std::vector<detail::Item> pool = detail::sorted_items(a);
  std::vector<detail::Item> first;

  if (detail::take_if_available(pool, first, 1, 1, 1) ||
      detail::take_if_available(pool, first, 2, 3, 2) ||
      detail::take_if_available(pool, first, 4, 6, 4) ||
      detail::take_if_available(pool, first, 7, 7, 5)) {
    auto [second, third] = partition_two(detail::to_multiset(pool));
    return {detail::to_multiset(first), std::move(second), std::move(third)};
  }

  std::array<std::vector<detail::Item>, 3> parts;
  std::vector<detail::Item> rest;
  for (const auto& it : pool) {
    if (it.window <= 3) {
      parts[0].push_back(it);
    } else if (it.window <= 6) {
      parts[1].push_back(it);
    } else if (it.window == 7) {
      parts[2].push_back(it);
    } else {
      rest.push_back(it);
    }
  }
  std::array<Rational, 3> dens{detail::density_of(parts[0]), detail::density_of(parts[1]),
                               detail::density_of(parts[2])};
  for (const auto& it : rest) {
    std::size_t lightest = 0;
    for (std::size_t p = 1; p < 3; ++p) {
      if (dens[p] < dens[lightest]) lightest = p;
    }
    parts[lightest].push_back(it);
    dens[lightest] += Rational(1, it.window);
  }
  return {detail::to_multiset(parts[0]), detail::to_multiset(parts[1]), detail::to_multiset(parts[2])};
}

// ---------------------------------------------------------------------------
// Static 1-center strategy (unit-speed coordinates)
// ---------------------------------------------------------------------------

/// floor(x), except values within tolerance of an integer snap to it.
inline std::int64_t snapped_floor(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= kTolerance * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(x));
}

/// Query window keeping a static object at x from growing past y at unit speed.
inline Window window_f(double x, double y) { return snapped_floor(std::abs(y - x)) + 1; }

namespace detail {

inline std::vector<Window> slack_windows(std::span<const double> sorted, double slack) {
  const double lo = sorted.front();
  const double hi = sorted.back();
  std::vector<Window> out;
  out.reserve(sorted.size());
  for (double x : sorted) out.push_back(std::min(window_f(x, hi + slack), window_f(x, lo - slack)));
  return out;
}

inline void require_sorted_positions(std::span<const double> positions, const char* what) {
  if (positions.size() < 2) throw InputError(std::string(what) + ": need n >= 2 positions");
  for (double x : positions) {
    if (!std::isfinite(x)) throw InputError(std::string(what) + ": positions must be finite");
  }
  if (!std::is_sorted(positions.begin(), positions.end())) {
    throw InputError(std::string(what) + ": positions must be sorted");
  }
}

}  // namespace detail

/// True when keeping every region inside [x_1 - b, x_n + b] passes the
/// density test.
inline bool slack_feasible(std::span<const double> sorted, double b) {
  return density(detail::slack_windows(sorted, b)) <= 1;
}

/// Candidate slacks in (0, n]: the values where some window changes, i.e.
/// integer minus a distance to an extreme, plus n itself. Sorted, deduplicated.
inline std::vector<double> slack_candidates(std::span<const double> sorted) {
  detail::require_sorted_positions(sorted, "slack_candidates");
  const auto n = static_cast<double>(sorted.size());
  const double lo = sorted.front();
  const double hi = sorted.back();
  std::vector<double> out{n};
  for (double x : sorted) {
    for (double d : {x - lo, hi - x}) {
      for (auto k = static_cast<std::int64_t>(std::floor(d)); static_cast<double>(k) <= d + n; ++k) {
        const double b = static_cast<double>(k) - d;
        if (b > kTolerance && b <= n + kTolerance) out.push_back(b);
      }
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<double> dedup;
  for (double b : out) {
    if (dedup.empty() || b - dedup.back() > kTolerance) dedup.push_back(b);
  }
  return dedup;
}

/// Smallest positive slack b such that windows min(f(x_i, x_n + b), f(x_i, x_1 - b))
/// have density at most 1. Positions are in unit-speed coordinates, sorted.
inline double compute_b(std::span<const double> sorted) {
  const auto cands = slack_candidates(sorted);
  std::size_t lo = 0;
  std::size_t hi = cands.size() - 1;
  if (!slack_feasible(sorted, cands[hi])) throw Error("compute_b: slack n infeasible");
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (slack_feasible(sorted, cands[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo > 0 && slack_feasible(sorted, cands[lo - 1])) {
    throw Error("compute_b: feasibility is not monotone over the candidates");
  }
  return cands[lo];
}

/// Four-channel query plan for a static 1-D instance: three pinwheel channels
/// hold every region inside [x_1 - b/2, x_n + b/2], the fourth alternates
/// between the two extreme objects.
struct StaticStrategy {
  double v = 1.0;
  double b = 0.0;       ///< slack in unit-speed coordinates
  double extent = 0.0;  ///< x_n - x_1 in original coordinates
  std::vector<Window> windows;  ///< per object id
  std::array<WindowMultiset, 3> parts;
  std::array<PeriodicSchedule, 3> channels;
  std::size_t low_extreme = 0;   ///< object at x_1
  std::size_t high_extreme = 0;  ///< object at x_n

  /// Largest 1-center region size the strategy admits:
  /// (b + min(x_n - x_1, 1)) / 2 in unit-speed coordinates, scaled by v.
  double size_bound() const { return (b * v + std::min(extent, v)) / 2.0; }

  std::size_t alternation_at(std::int64_t t) const { return t % 2 == 1 ? low_extreme : high_extreme; }
};

inline StaticStrategy build_static_strategy(std::span<const double> positions, double v,
                                            std::uint64_t budget = kDefaultSearchBudget) {
  if (positions.size() < 2) throw InputError("build_static_strategy: need n >= 2 objects");
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError("build_static_strategy: v must be positive");
  const std::size_t n = positions.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return positions[x] < positions[y]; });
  std::vector<double> sorted;
  for (std::size_t id : order) sorted.push_back(positions[id] / v);
  detail::require_sorted_positions(sorted, "build_static_strategy");

  StaticStrategy s;
  s.v = v;
  s.b = compute_b(sorted);
  s.extent = positions[order.back()] - positions[order.front()];
  s.low_extreme = order.front();
  s.high_extreme = order.back();

  const auto sorted_windows = detail::slack_windows(sorted, s.b / 2.0);
  s.windows.assign(n, 0);
  WindowMultiset all;
  for (std::size_t k = 0; k < n; ++k) {
    s.windows[order[k]] = sorted_windows[k];
  }
  for (std::size_t id = 0; id < n; ++id) all.push_back(s.windows[id], id);
  if (density(all) > 2) {
    throw Error("build_static_strategy: halved-slack windows have density above 2");
  }

  s.parts = partition_three(all);
  for (std::size_t c = 0; c < 3; ++c) {
    auto verdict = is_schedulable_exact(s.parts[c], budget);
    if (!verdict.schedulable) {
      throw DomainError("build_static_strategy: channel " + std::to_string(c + 1) +
                        " is not schedulable");
    }
    s.channels[c] = *verdict.witness;
    s.channels[c].channel = c;
  }
  return s;
}

}  // namespace ucenters::pinwheel
