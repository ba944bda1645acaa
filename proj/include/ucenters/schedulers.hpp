#pragma once

// Online query strategies and the offline brute-force optimum.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ucenters/centers.hpp"
#include "ucenters/core.hpp"
#include "ucenters/pinwheel.hpp"

namespace ucenters {

/// Objects to query at one step. Ids are 0-based and distinct.
struct QueryDecision {
  std::int64_t step = 0;
  std::vector<std::size_t> ids;

  friend bool operator==(const QueryDecision&, const QueryDecision&) = default;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual QueryDecision next(std::int64_t t, const ObservationState& state) = 0;
  virtual std::string name() const = 0;
};

// ---------------------------------------------------------------------------
// Round-robin
// ---------------------------------------------------------------------------

inline QueryDecision round_robin_next(std::size_t n, std::int64_t t, std::size_t q) {
  if (q > n) throw InputError("round_robin: q exceeds n");
  if (t < 1) throw InputError("round_robin: steps start at 1");
  QueryDecision d{t, {}};
  const auto base = static_cast<std::size_t>(t - 1) * q;
  for (std::size_t k = 0; k < q; ++k) d.ids.push_back((base + k) % n);
  return d;
}

class RoundRobinScheduler final : public Scheduler {
 public:
  RoundRobinScheduler(std::size_t n, std::size_t q) : n_(n), q_(q) {
    if (q_ > n_) throw InputError("round_robin: q exceeds n");
  }
  QueryDecision next(std::int64_t t, const ObservationState&) override { return round_robin_next(n_, t, q_); }
  std::string name() const override { return "round_robin"; }

 private:
  std::size_t n_;
  std::size_t q_;
};

// ---------------------------------------------------------------------------
// Grouped (logarithmic) scheduler for the center of mass
// ---------------------------------------------------------------------------

/// floor(log2(i)) for i >= 1.
inline std::size_t floor_log2(std::size_t i) { return static_cast<std::size_t>(std::bit_width(i) - 1); }

/// Object ids ordered by v_i * w_i, largest first; ties keep the lower id first.
inline std::vector<std::size_t> grouped_log_order(const Instance& inst) {
  std::vector<std::size_t> order(inst.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& oa = inst.objects[a];
    const auto& ob = inst.objects[b];
    return oa.max_speed * oa.weight > ob.max_speed * ob.weight;
  });
  return order;
}

/// Rank (0-based) of the object queried at the given single-query step.
///
/// Rank r belongs to group floor(log2(r + 1)); there are floor(log2 n) + 1
/// groups, visited cyclically, and each group cycles through its members.
inline std::size_t grouped_log_rank(std::size_t n, std::int64_t step) {
  if (n == 0) throw InputError("grouped_log: no objects");
  const std::size_t groups = floor_log2(n) + 1;
  const auto k = static_cast<std::size_t>(step - 1);
  const std::size_t group = k % groups;
  const std::size_t visits = k / groups;
  const std::size_t first = std::size_t{1} << group;                 // 1-based rank
  const std::size_t last = std::min(n, (std::size_t{1} << (group + 1)) - 1);
  return first - 1 + visits % (last - first + 1);
}

/// Ids queried at step t when `order` lists the objects by decreasing v_i * w_i.
inline QueryDecision grouped_log_next(std::span<const std::size_t> order, std::int64_t t, std::size_t q = 1) {
  if (t < 1) throw InputError("grouped_log: steps start at 1");
  const std::size_t want = std::min(q, order.size());
  QueryDecision d{t, {}};
  // Step t covers virtual single-query steps (t-1)q+1 .. tq; duplicates are
  // skipped by advancing further.
  auto virtual_step = (t - 1) * static_cast<std::int64_t>(q) + 1;
  while (d.ids.size() < want) {
    const std::size_t id = order[grouped_log_rank(order.size(), virtual_step++)];
    if (std::find(d.ids.begin(), d.ids.end(), id) == d.ids.end()) d.ids.push_back(id);
  }
  return d;
}

class GroupedLogScheduler final : public Scheduler {
 public:
  GroupedLogScheduler(const Instance& inst) : order_(grouped_log_order(inst)), q_(inst.queries_per_step) {}
  QueryDecision next(std::int64_t t, const ObservationState&) override { return grouped_log_next(order_, t, q_); }
  std::string name() const override { return "grouped_log"; }
  const std::vector<std::size_t>& order() const { return order_; }

 private:
  std::vector<std::size_t> order_;
  std::size_t q_;
};

// ---------------------------------------------------------------------------
// Scripted periods
// ---------------------------------------------------------------------------

inline QueryDecision scripted_next(std::span<const std::size_t> period, std::size_t n, std::int64_t t,
                                   std::size_t q) {
  if (period.empty()) throw InputError("scripted: empty period");
  if (t < 1) throw InputError("scripted: steps start at 1");
  QueryDecision d{t, {}};
  const auto base = static_cast<std::size_t>(t - 1) * q;
  for (std::size_t k = 0; k < q; ++k) {
    const std::size_t id = period[(base + k) % period.size()];
    if (id >= n) throw InputError("scripted: id " + std::to_string(id + 1) + " out of range");
    if (std::find(d.ids.begin(), d.ids.end(), id) != d.ids.end()) {
      throw InputError("scripted: duplicate id " + std::to_string(id + 1) + " within one step");
    }
    d.ids.push_back(id);
  }
  return d;
}

class ScriptedScheduler final : public Scheduler {
 public:
  ScriptedScheduler(std::vector<std::size_t> period, std::size_t n, std::size_t q)
      : period_(std::move(period)), n_(n), q_(q) {
    if (period_.empty()) throw InputError("scripted: empty period");
    for (std::size_t id : period_) {
      if (id >= n_) throw InputError("scripted: id " + std::to_string(id + 1) + " out of range");
    }
  }
  QueryDecision next(std::int64_t t, const ObservationState&) override { return scripted_next(period_, n_, t, q_); }
  std::string name() const override { return "scripted"; }

 private:
  std::vector<std::size_t> period_;
  std::size_t n_;
  std::size_t q_;
};

// ---------------------------------------------------------------------------
// Alternating extremes (1-D)
// ---------------------------------------------------------------------------

namespace detail {

inline double age(const ObservationState& state, std::size_t i, std::int64_t t) {
  return static_cast<double>(t) - state[i].last_time;
}

// Appends ids from `preferred` then every other object by decreasing region
// radius (lowest id on ties) until `want` distinct ids are chosen.
inline void fill_distinct(QueryDecision& d, std::span<const std::size_t> preferred, const Instance& inst,
                          const ObservationState& state, std::size_t want) {
  auto push = [&](std::size_t id) {
    if (d.ids.size() < want && std::find(d.ids.begin(), d.ids.end(), id) == d.ids.end()) d.ids.push_back(id);
  };
  for (std::size_t id : preferred) push(id);
  if (d.ids.size() >= want) return;
  std::vector<std::size_t> rest(inst.size());
  std::iota(rest.begin(), rest.end(), std::size_t{0});
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    return inst.objects[a].max_speed * age(state, a, d.step) > inst.objects[b].max_speed * age(state, b, d.step);
  });
  for (std::size_t id : rest) push(id);
}

}  // namespace detail

/// Alternates between the objects with the smallest and largest last known
/// position (odd steps: smallest), lowest id on ties.
class AlternatingExtremesScheduler final : public Scheduler {
 public:
  explicit AlternatingExtremesScheduler(const Instance& inst) : inst_(&inst) {
    if (inst.dim != 1) throw InputError("alternating_extremes: 1-D instances only");
  }

  QueryDecision next(std::int64_t t, const ObservationState& state) override {
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t i = 1; i < state.size(); ++i) {
      if (state[i].last_known[0] < state[lo].last_known[0]) lo = i;
      if (state[i].last_known[0] > state[hi].last_known[0]) hi = i;
    }
    QueryDecision d{t, {}};
    const std::size_t first = t % 2 == 1 ? lo : hi;
    const std::size_t second = t % 2 == 1 ? hi : lo;
    const std::size_t pref[] = {first, second};
    detail::fill_distinct(d, pref, *inst_, state, std::min(inst_->queries_per_step, inst_->size()));
    return d;
  }
  std::string name() const override { return "alternating_extremes"; }

 private:
  const Instance* inst_;
};

// ---------------------------------------------------------------------------
// Static four-query 1-center strategy
// ---------------------------------------------------------------------------

/// Static instances positions as plain coordinates (1-D, time 0).
inline std::vector<double> static_positions_1d(const Instance& inst) {
  if (inst.dim != 1) throw InputError("static positions: 1-D instances only");
  std::vector<double> xs;
  for (const auto& obj : inst.objects) {
    if (!obj.trajectory.is_static()) throw InputError("static strategy: instance has moving objects");
    xs.push_back(position_at(obj.trajectory, 0.0)[0]);
  }
  return xs;
}

/// One id per pinwheel channel plus the alternation id. Idle or repeated
/// slots go to the extreme object with the larger region, then the other
/// extreme, then the largest remaining region; never more than n ids.
inline QueryDecision static_four_query_next(const pinwheel::StaticStrategy& strategy, const Instance& inst,
                                            const ObservationState& state, std::int64_t t) {
  if (strategy.windows.size() != inst.size()) throw InputError("static_four_query: strategy/instance mismatch");
  QueryDecision d{t, {}};
  std::vector<std::size_t> wanted;
  for (const auto& ch : strategy.channels) {
    if (auto id = ch.at(t)) wanted.push_back(*id);
  }
  wanted.push_back(strategy.alternation_at(t));
  std::size_t first = strategy.low_extreme;
  std::size_t second = strategy.high_extreme;
  if (detail::age(state, second, t) > detail::age(state, first, t) ||
      (detail::age(state, second, t) == detail::age(state, first, t) && second < first)) {
    std::swap(first, second);
  }
  wanted.push_back(first);
  wanted.push_back(second);
  detail::fill_distinct(d, wanted, inst, state, std::min<std::size_t>(4, inst.size()));
  return d;
}

class StaticFourQueryScheduler final : public Scheduler {
 public:
  StaticFourQueryScheduler(const Instance& inst, std::uint64_t budget = pinwheel::kDefaultSearchBudget)
      : inst_(&inst) {
    const auto xs = static_positions_1d(inst);
    double v = 0.0;
    for (const auto& obj : inst.objects) v = std::max(v, obj.max_speed);
    strategy_ = pinwheel::build_static_strategy(xs, v, budget);
  }
  QueryDecision next(std::int64_t t, const ObservationState& state) override {
    return static_four_query_next(strategy_, *inst_, state, t);
  }
  std::string name() const override { return "static_four_query"; }
  const pinwheel::StaticStrategy& strategy() const { return strategy_; }

 private:
  const Instance* inst_;
  pinwheel::StaticStrategy strategy_;
};

// ---------------------------------------------------------------------------
// Offline optimum by exhaustive minimax
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultOptBudget = 5'000'000;

struct OptResult {
  std::vector<QueryDecision> schedule;
  double value = 0.0;
  std::int64_t horizon = 0;
  std::uint64_t states = 0;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t q) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(q);
  std::iota(cur.begin(), cur.end(), std::size_t{0});
  while (true) {
    out.push_back(cur);
    std::size_t k = q;
    while (k > 0 && cur[k - 1] == n - q + (k - 1)) --k;
    if (k == 0) break;
    ++cur[k - 1];
    for (std::size_t j = k; j < q; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

class OptSearch {
 public:
  OptSearch(const Instance& inst, std::int64_t horizon, std::uint64_t budget)
      : inst_(inst), horizon_(horizon), budget_(budget) {
    const std::size_t n = inst.size();
    const std::size_t q = inst.queries_per_step;
    if (q > n) throw InputError("opt_search: q exceeds n");
    if (!has_exact_region(inst.center_kind, inst.dim)) {
      throw InputError("opt_search: no exact region for this center kind and dimension");
    }
    choices_ = combinations(n, q);
    positions_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::int64_t t = 0; t <= horizon; ++t) {
        positions_[i].push_back(position_at(inst.objects[i].trajectory, static_cast<double>(t)));
      }
      weights_.push_back(inst.objects[i].weight);
    }
  }

  OptResult solve() {
    OptResult out;
    out.horizon = horizon_;
    std::vector<std::int64_t> last(inst_.size(), 0);
    out.value = value(0, last);
    // Replay the memoized choices.
    for (std::int64_t t = 0; t < horizon_; ++t) {
      const auto& entry = memo_.at(key(t, last));
      const auto& pick = choices_[entry.choice];
      out.schedule.push_back({t + 1, pick});
      for (std::size_t id : pick) last[id] = t + 1;
    }
    out.states = memo_.size();
    return out;
  }

 private:
  struct Entry {
    double value;
    std::size_t choice;
  };

  static std::string key(std::int64_t t, const std::vector<std::int64_t>& last) {
    std::string k;
    k.reserve((last.size() + 1) * sizeof(std::int32_t));
    auto put = [&](std::int64_t x) {
      const auto v = static_cast<std::int32_t>(x);
      k.append(reinterpret_cast<const char*>(&v), sizeof(v));
    };
    put(t);
    for (auto x : last) put(x);
    return k;
  }

  double size_at(std::int64_t t, const std::vector<std::int64_t>& last) const {
    std::vector<UncertaintyBall> balls;
    balls.reserve(last.size());
    for (std::size_t i = 0; i < last.size(); ++i) {
      balls.push_back({positions_[i][static_cast<std::size_t>(last[i])],
                       inst_.objects[i].max_speed * static_cast<double>(t - last[i])});
    }
    return region_size(center_region(inst_.center_kind, balls, weights_));
  }

  double value(std::int64_t t, std::vector<std::int64_t>& last) {
    if (t == horizon_) return 0.0;
    const std::string k = key(t, last);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second.value;

    double best = std::numeric_limits<double>::infinity();
    std::size_t best_choice = 0;
    std::vector<std::int64_t> saved;
    for (std::size_t c = 0; c < choices_.size(); ++c) {
      saved = last;
      for (std::size_t id : choices_[c]) last[id] = t + 1;
      const double now = size_at(t + 1, last);
      if (now < best - kTolerance) {
        const double rest = value(t + 1, last);
        const double total = std::max(now, rest);
        if (total < best - kTolerance) {
          best = total;
          best_choice = c;
        }
      }
      last = saved;
    }
    memo_.emplace(k, Entry{best, best_choice});
    if (memo_.size() > budget_) {
      throw BudgetExceeded("opt_search exceeded its budget of " + std::to_string(budget_) + " states");
    }
    return best;
  }

  const Instance& inst_;
  std::int64_t horizon_;
  std::uint64_t budget_;
  std::vector<std::vector<std::size_t>> choices_;
  std::vector<std::vector<Point>> positions_;
  std::vector<double> weights_;
  std::unordered_map<std::string, Entry> memo_;
};

}  // namespace detail

/// Query sequence minimizing the largest center-region size over steps
/// 1..horizon, with full knowledge of the trajectories. Memoizes on
/// (step, last query time of every object).
inline OptResult opt_search(const Instance& inst, std::int64_t horizon,
                            std::uint64_t budget = kDefaultOptBudget) {
  if (horizon < 0) throw InputError("opt_search: negative horizon");
  require_valid(inst);
  if (horizon == 0) return OptResult{};
  return detail::OptSearch(inst, horizon, budget).solve();
}

/// Replays a precomputed sequence; past its end, falls back to round-robin.
class ReplayScheduler final : public Scheduler {
 public:
  ReplayScheduler(std::vector<QueryDecision> schedule, std::size_t n, std::size_t q)
      : schedule_(std::move(schedule)), n_(n), q_(q) {}
  QueryDecision next(std::int64_t t, const ObservationState&) override {
    const auto idx = static_cast<std::size_t>(t - 1);
    if (idx < schedule_.size()) return schedule_[idx];
    return round_robin_next(n_, t, std::min(q_, n_));
  }
  std::string name() const override { return "opt_search"; }

 private:
  std::vector<QueryDecision> schedule_;
  std::size_t n_;
  std::size_t q_;
};

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

enum class SchedulerKind { round_robin, static_four_query, grouped_log, alternating_extremes, scripted, opt_search };

inline std::string_view to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::round_robin: return "round_robin";
    case SchedulerKind::static_four_query: return "static_four_query";
    case SchedulerKind::grouped_log: return "grouped_log";
    case SchedulerKind::alternating_extremes: return "alternating_extremes";
    case SchedulerKind::scripted: return "scripted";
    case SchedulerKind::opt_search: return "opt_search";
  }
  return "?";
}

inline std::optional<SchedulerKind> scheduler_kind_from_string(std::string_view s) {
  for (auto k : {SchedulerKind::round_robin, SchedulerKind::static_four_query, SchedulerKind::grouped_log,
                 SchedulerKind::alternating_extremes, SchedulerKind::scripted, SchedulerKind::opt_search}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::round_robin;
  std::vector<std::size_t> period;  ///< scripted: 0-based ids
  std::int64_t opt_horizon = 0;     ///< opt_search: search horizon
  std::uint64_t budget = 0;         ///< 0 selects the default budget
};

/// Builds a scheduler bound to `inst`; the instance must outlive it.
inline std::unique_ptr<Scheduler> make_scheduler(const SchedulerSpec& spec, const Instance& inst) {
  const std::size_t n = inst.size();
  const std::size_t q = inst.queries_per_step;
  switch (spec.kind) {
    case SchedulerKind::round_robin:
      return std::make_unique<RoundRobinScheduler>(n, q);
    case SchedulerKind::static_four_query:
      return std::make_unique<StaticFourQueryScheduler>(
          inst, spec.budget ? spec.budget : pinwheel::kDefaultSearchBudget);
    case SchedulerKind::grouped_log:
      return std::make_unique<GroupedLogScheduler>(inst);
    case SchedulerKind::alternating_extremes:
      return std::make_unique<AlternatingExtremesScheduler>(inst);
    case SchedulerKind::scripted:
      return std::make_unique<ScriptedScheduler>(spec.period, n, q);
    case SchedulerKind::opt_search: {
      auto res = opt_search(inst, spec.opt_horizon, spec.budget ? spec.budget : kDefaultOptBudget);
      return std::make_unique<ReplayScheduler>(std::move(res.schedule), n, q);
    }
  }
  throw InputError("make_scheduler: unknown kind");
}

}  // namespace ucenters
