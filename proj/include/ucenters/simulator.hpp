#pragma once

// Discrete-time engine: at every integer step apply the scheduler's queries,
// rebuild the object regions and measure the center's region.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "ucenters/centers.hpp"
#include "ucenters/core.hpp"
#include "ucenters/schedulers.hpp"

namespace ucenters {

struct StepRecord {
  std::int64_t t = 0;
  double center_size = 0.0;
  std::vector<double> object_sizes;
  std::vector<std::size_t> queried;
};

struct MeasurementSeries {
  std::size_t n = 0;
  std::vector<StepRecord> steps;
  double max_size = 0.0;
  double post_warmup_max = 0.0;  ///< max over t > n
  std::vector<std::string> warnings;

  /// Center size at step t (1-based).
  double size_at(std::int64_t t) const { return steps.at(static_cast<std::size_t>(t - 1)).center_size; }
};

namespace detail {

inline void check_decision(const QueryDecision& d, std::size_t n, std::size_t q, std::int64_t t) {
  const std::size_t want = std::min(q, n);
  if (d.step != t) throw Error("scheduler answered for step " + std::to_string(d.step) + " at step " + std::to_string(t));
  if (d.ids.size() != want) {
    throw Error("scheduler returned " + std::to_string(d.ids.size()) + " ids at step " + std::to_string(t) +
                ", expected " + std::to_string(want));
  }
  for (std::size_t k = 0; k < d.ids.size(); ++k) {
    if (d.ids[k] >= n) throw Error("scheduler returned invalid id at step " + std::to_string(t));
    for (std::size_t j = 0; j < k; ++j) {
      if (d.ids[j] == d.ids[k]) throw Error("scheduler returned a duplicate id at step " + std::to_string(t));
    }
  }
}

}  // namespace detail

/// Runs `scheduler` for steps 1..horizon. Aborts with Error on any invariant
/// breach (a true position outside its region, or a queried object whose
/// region is not a point).
inline MeasurementSeries run(const Instance& inst, Scheduler& scheduler, std::int64_t horizon,
                             std::uint64_t /*seed*/ = 0) {
  if (horizon < 0) throw InputError("run: negative horizon");
  require_valid(inst);
  if (!has_exact_region(inst.center_kind, inst.dim)) {
    throw InputError("run: no exact region for " + std::string(to_string(inst.center_kind)) + " in d >= 2");
  }
  const std::size_t n = inst.size();
  MeasurementSeries out;
  out.n = n;
  if (auto it = inst.meta.params.find("motion_until");
      it != inst.meta.params.end() && static_cast<double>(horizon) > it->second) {
    out.warnings.push_back("horizon exceeds the instance's encoded motion (t = " + std::to_string(it->second) + ")");
  }

  std::vector<double> weights;
  for (const auto& obj : inst.objects) weights.push_back(obj.weight);

  ObservationState state(inst);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    QueryDecision d = scheduler.next(t, state);
    detail::check_decision(d, n, inst.queries_per_step, t);
    const auto now = static_cast<double>(t);
    for (std::size_t id : d.ids) state.record_query(id, inst.objects[id], now);

    const auto balls = regions_at(inst, state, now);
    StepRecord rec;
    rec.t = t;
    rec.queried = d.ids;
    for (std::size_t i = 0; i < n; ++i) {
      const Point truth = position_at(inst.objects[i].trajectory, now);
      const double slack = kTolerance * std::max(1.0, balls[i].radius + balls[i].center.norm());
      if (distance(truth, balls[i].center) > balls[i].radius + slack) {
        throw Error("object " + std::to_string(i + 1) + " left its uncertainty region at step " + std::to_string(t));
      }
      rec.object_sizes.push_back(region_size(balls[i]));
    }
    for (std::size_t id : d.ids) {
      if (rec.object_sizes[id] != 0.0) throw Error("queried object region not reset at step " + std::to_string(t));
    }
    rec.center_size = region_size(center_region(inst.center_kind, balls, weights));
    out.max_size = std::max(out.max_size, rec.center_size);
    if (t > static_cast<std::int64_t>(n)) out.post_warmup_max = std::max(out.post_warmup_max, rec.center_size);
    out.steps.push_back(std::move(rec));
  }
  return out;
}

inline MeasurementSeries run(const Instance& inst, const SchedulerSpec& spec, std::int64_t horizon,
                             std::uint64_t seed = 0) {
  auto scheduler = make_scheduler(spec, inst);
  return run(inst, *scheduler, horizon, seed);
}

/// For each possible first query (q = 1), a sampled lower bound on the
/// center's region size at step 1. Used on the d >= 2 instances where no
/// exact region is available.
inline std::vector<double> first_query_lower_bounds(const Instance& inst, std::size_t sample_count,
                                                    std::uint64_t seed) {
  require_valid(inst);
  std::vector<double> weights;
  for (const auto& obj : inst.objects) weights.push_back(obj.weight);
  std::vector<double> out;
  for (std::size_t first = 0; first < inst.size(); ++first) {
    ObservationState state(inst);
    state.record_query(first, inst.objects[first], 1.0);
    const auto balls = regions_at(inst, state, 1.0);
    out.push_back(sampled_center_size_lower_bound(balls, inst.center_kind, sample_count, seed, weights));
  }
  return out;
}

/// Like run(), but records sampled lower bounds instead of exact sizes, for
/// center kinds that have no exact region in d >= 2. Object sizes are exact.
inline MeasurementSeries run_sampled(const Instance& inst, Scheduler& scheduler, std::int64_t horizon,
                                     std::size_t sample_count, std::uint64_t seed) {
  if (horizon < 0) throw InputError("run_sampled: negative horizon");
  require_valid(inst);
  const std::size_t n = inst.size();
  MeasurementSeries out;
  out.n = n;
  std::vector<double> weights;
  for (const auto& obj : inst.objects) weights.push_back(obj.weight);
  ObservationState state(inst);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    QueryDecision d = scheduler.next(t, state);
    detail::check_decision(d, n, inst.queries_per_step, t);
    const auto now = static_cast<double>(t);
    for (std::size_t id : d.ids) state.record_query(id, inst.objects[id], now);
    const auto balls = regions_at(inst, state, now);
    StepRecord rec;
    rec.t = t;
    rec.queried = d.ids;
    for (const auto& b : balls) rec.object_sizes.push_back(region_size(b));
    rec.center_size = sampled_center_size_lower_bound(balls, inst.center_kind, sample_count,
                                                      seed + static_cast<std::uint64_t>(t), weights);
    out.max_size = std::max(out.max_size, rec.center_size);
    if (t > static_cast<std::int64_t>(n)) out.post_warmup_max = std::max(out.post_warmup_max, rec.center_size);
    out.steps.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Competitive tables
// ---------------------------------------------------------------------------

struct CompeteRow {
  std::size_t n = 0;
  std::string scheduler;
  double max_size = 0.0;
  double reference_size = 0.0;
  double ratio = 0.0;
};

/// max / reference, with 0/0 read as 1.
inline double competitive_ratio(double value, double reference) {
  if (reference > 0.0) return value / reference;
  return value > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

using InstanceFamily = std::function<Instance(std::size_t n)>;
using ReferenceFactory = std::function<SchedulerSpec(const Instance&)>;

/// One row per (n, scheduler): the scheduler's max center size over the
/// horizon against the reference strategy's. Runs fan out concurrently; rows
/// come back ordered by n, then by the order of `schedulers`.
inline std::vector<CompeteRow> compete(const InstanceFamily& family, const std::vector<SchedulerSpec>& schedulers,
                                       const ReferenceFactory& reference, std::int64_t horizon,
                                       const std::vector<std::size_t>& n_values) {
  struct Job {
    std::size_t n;
    std::string name;
    std::future<double> value;
    std::future<double> ref;
  };
  std::vector<Instance> instances;
  instances.reserve(n_values.size());
  for (std::size_t n : n_values) instances.push_back(family(n));

  std::vector<Job> jobs;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    const Instance& inst = instances[k];
    auto ref = std::async(std::launch::async, [&inst, &reference, horizon] {
                 return run(inst, reference(inst), horizon).max_size;
               }).share();
    for (const auto& spec : schedulers) {
      Job job;
      job.n = n_values[k];
      job.name = std::string(to_string(spec.kind));
      job.value = std::async(std::launch::async, [&inst, spec, horizon] { return run(inst, spec, horizon).max_size; });
      job.ref = std::async(std::launch::deferred, [ref] { return ref.get(); });
      jobs.push_back(std::move(job));
    }
  }
  std::vector<CompeteRow> rows;
  for (auto& job : jobs) {
    CompeteRow row;
    row.n = job.n;
    row.scheduler = job.name;
    row.max_size = job.value.get();
    row.reference_size = job.ref.get();
    row.ratio = competitive_ratio(row.max_size, row.reference_size);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ucenters
