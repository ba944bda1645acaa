// ucenters: command-line front end for the uncertain-centers library.
//
// Exit codes: 0 ok, 1 domain error (infeasible or undecided within budget),
// 2 usage or I/O error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "ucenters/ucenters.hpp"

namespace {

using namespace ucenters;
using io::Json;

struct SourceOptions {
  std::string instance;
  std::string family;
  std::size_t n = 4;
  double v = 1.0;
  double L = 10.0;
  std::uint64_t seed = 1;
  double span = 4.0;
  std::string center_kind;
  bool worst_case = false;
};

struct OutputOptions {
  std::string out = "-";
  std::string format = "csv";
};

void add_source(CLI::App* cmd, SourceOptions& s) {
  auto* inst = cmd->add_option("--instance", s.instance, "Instance file (JSON)");
  auto* fam = cmd->add_option("--family", s.family, "Generator family")
                  ->check(CLI::IsMember(instances::family_names()));
  inst->excludes(fam);
  cmd->add_option("--n", s.n, "Number of objects")->check(CLI::PositiveNumber);
  cmd->add_option("--v", s.v, "Maximum speed");
  cmd->add_option("--L", s.L, "Length scale of the planar constructions");
  cmd->add_option("--seed", s.seed, "Random seed");
  cmd->add_option("--span", s.span, "Position span of random families");
  cmd->add_option("--center-kind", s.center_kind, "Override the center kind")
      ->check(CLI::IsMember({"one_center", "centroid", "center_of_mass", "one_median"}));
  cmd->add_flag("--worst-case", s.worst_case, "Relabel so moving objects get the largest ids");
}

void add_output(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--out", o.out, "Output path ('-' for stdout)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

instances::FamilySpec family_spec(const SourceOptions& s, const std::string& name, std::size_t n) {
  instances::FamilySpec f;
  f.name = name;
  f.n = n;
  f.v = s.v;
  f.L = s.L;
  f.seed = s.seed;
  f.span = s.span;
  if (!s.center_kind.empty()) f.kind = center_kind_from_string(s.center_kind);
  return f;
}

Instance finish(Instance inst, const SourceOptions& s) {
  if (!s.center_kind.empty() && !s.instance.empty()) {
    inst.center_kind = *center_kind_from_string(s.center_kind);
    require_valid(inst);
  }
  return s.worst_case ? instances::movers_last(inst) : inst;
}

Instance load_source(const SourceOptions& s) {
  if (!s.instance.empty()) return finish(io::load_instance(s.instance), s);
  if (s.family.empty()) throw InputError("need exactly one of --instance or --family");
  return finish(instances::make_family(family_spec(s, s.family, s.n)), s);
}

/// Writes to a file, or stdout for "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

std::vector<std::size_t> to_zero_based(const std::vector<std::size_t>& ids) {
  std::vector<std::size_t> out;
  for (std::size_t id : ids) {
    if (id == 0) throw InputError("object ids are 1-based");
    out.push_back(id - 1);
  }
  return out;
}

Json ids_json(const std::vector<std::size_t>& ids) {
  Json out = Json::array();
  for (std::size_t id : ids) out.push_back(id + 1);
  return out;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenCmd {
  SourceOptions src;
  std::string out = "-";

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen", "Write a generated instance file");
    add_source(cmd, src);
    cmd->add_option("--out", out, "Output path ('-' for stdout)");
    cmd->callback([this] { emit(out, io::serialize_instance(load_source(src))); });
  }
};

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SchedulerOptions {
  std::string scheduler = "round_robin";
  std::vector<std::size_t> period;
  std::int64_t opt_horizon = 0;

  void attach(CLI::App* cmd) {
    std::vector<std::string> names;
    for (auto k : {SchedulerKind::round_robin, SchedulerKind::static_four_query, SchedulerKind::grouped_log,
                   SchedulerKind::alternating_extremes, SchedulerKind::scripted, SchedulerKind::opt_search}) {
      names.emplace_back(to_string(k));
    }
    cmd->add_option("--scheduler", scheduler, "Query strategy")->check(CLI::IsMember(names));
    cmd->add_option("--period", period, "Scripted period, comma-separated 1-based ids")->delimiter(',');
    cmd->add_option("--opt-horizon", opt_horizon, "Search horizon for opt_search (default: --horizon)");
  }

  SchedulerSpec spec(std::int64_t horizon) const {
    SchedulerSpec s;
    s.kind = *scheduler_kind_from_string(scheduler);
    s.period = to_zero_based(period);
    s.opt_horizon = opt_horizon > 0 ? opt_horizon : horizon;
    s.budget = budget_from_env(0);
    if (s.kind == SchedulerKind::scripted && s.period.empty()) throw InputError("scripted scheduler needs --period");
    return s;
  }
};

struct SimulateCmd {
  SourceOptions src;
  OutputOptions out;
  SchedulerOptions sched;
  std::int64_t horizon = 0;
  std::size_t samples = 0;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "Run a scheduler and record region sizes");
    add_source(cmd, src);
    add_output(cmd, out);
    sched.attach(cmd);
    cmd->add_option("--horizon", horizon, "Number of steps")->required()->check(CLI::NonNegativeNumber);
    cmd->add_option("--samples", samples, "Sampled lower bounds for 1-center/1-median in d >= 2");
    cmd->callback([this] { execute(); });
  }

  void execute() {
    Instance inst = load_source(src);
    const SchedulerSpec spec = sched.spec(horizon);
    if (spec.kind == SchedulerKind::static_four_query) inst.queries_per_step = 4;
    auto scheduler = make_scheduler(spec, inst);
    MeasurementSeries series;
    if (has_exact_region(inst.center_kind, inst.dim)) {
      series = run(inst, *scheduler, horizon, src.seed);
    } else {
      if (samples < 2) throw InputError("no exact region for this center in d >= 2; pass --samples N (N >= 2)");
      series = run_sampled(inst, *scheduler, horizon, samples, src.seed);
    }
    for (const auto& w : series.warnings) std::cerr << "warning: " << w << "\n";
    if (out.format == "csv") {
      std::ostringstream os;
      io::write_csv(os, series);
      emit(out.out, os.str());
      std::cerr << "max_size " << io::format_double(series.max_size) << "  post_warmup_max "
                << io::format_double(series.post_warmup_max) << "\n";
    } else {
      Json doc = io::summary_json(series);
      doc["scheduler"] = std::string(to_string(spec.kind));
      doc["center_kind"] = std::string(to_string(inst.center_kind));
      doc["exact"] = samples == 0 || has_exact_region(inst.center_kind, inst.dim);
      Json steps = Json::array();
      for (const auto& s : series.steps) {
        steps.push_back({{"t", s.t}, {"center_size", s.center_size}, {"queried", ids_json(s.queried)},
                         {"object_sizes", s.object_sizes}});
      }
      doc["steps"] = steps;
      emit(out.out, dump(doc));
    }
  }
};

// ---------------------------------------------------------------------------
// pinwheel
// ---------------------------------------------------------------------------

Json multiset_json(const pinwheel::WindowMultiset& m) {
  Json out = Json::array();
  for (std::size_t k = 0; k < m.size(); ++k) out.push_back({{"id", m.ids[k] + 1}, {"window", m.windows[k]}});
  return out;
}

std::string windows_text(const pinwheel::WindowMultiset& m) {
  std::string s = "{";
  for (std::size_t k = 0; k < m.size(); ++k) s += (k ? "," : "") + std::to_string(m.windows[k]);
  return s + "}";
}

struct PinwheelCmd {
  std::vector<pinwheel::Window> windows;
  OutputOptions out;
  std::string action;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("pinwheel", "Pinwheel toolkit on a comma-separated window list");
    cmd->require_subcommand(1);
    const std::pair<const char*, const char*> actions[] = {
        {"density", "Exact density as a reduced fraction"},
        {"check", "Exact schedulability verdict"},
        {"partition", "Split a density <= 2 multiset into three schedulable parts"},
        {"schedule", "Print one period of a witness schedule"},
    };
    for (const auto& [name, help] : actions) {
      auto* sub = cmd->add_subcommand(name, help);
      sub->add_option("windows", windows, "Windows, e.g. 2,4,4")->delimiter(',')->required();
      add_output(sub, out);
      sub->callback([this, name] {
        action = name;
        execute();
      });
    }
  }

  void execute() {
    const auto ms = pinwheel::WindowMultiset::from_windows(windows);
    ms.validate();
    const auto budget = budget_from_env(pinwheel::kDefaultSearchBudget);
    const bool json = out.format == "json";
    std::ostringstream text;
    Json doc;
    doc["windows"] = windows;
    doc["density"] = pinwheel::to_string(pinwheel::density(ms));
    text << "density " << pinwheel::to_string(pinwheel::density(ms)) << "\n";

    if (action == "check" || action == "schedule") {
      const auto res = pinwheel::is_schedulable_exact(ms, budget);
      doc["schedulable"] = res.schedulable;
      doc["states_explored"] = res.states_explored;
      text << "schedulable " << (res.schedulable ? "yes" : "no") << "\n";
      if (res.schedulable) {
        doc["witness"] = pinwheel::format_period(*res.witness);
        doc["verified"] = pinwheel::verify_schedule(*res.witness, ms);
        text << "witness " << pinwheel::format_period(*res.witness) << "\n";
      }
      emit(out.out, json ? dump(doc) : text.str());
      if (action == "schedule" && !res.schedulable) throw DomainError("no pinwheel schedule exists");
      return;
    }
    if (action == "partition") {
      const auto parts = pinwheel::partition_three(ms);
      Json jparts = Json::array();
      for (std::size_t p = 0; p < parts.size(); ++p) {
        const auto res = pinwheel::is_schedulable_exact(parts[p], budget);
        if (!res.schedulable) throw DomainError("part " + std::to_string(p + 1) + " is not schedulable");
        jparts.push_back({{"items", multiset_json(parts[p])},
                          {"density", pinwheel::to_string(pinwheel::density(parts[p]))},
                          {"witness", pinwheel::format_period(*res.witness)}});
        text << "part " << p + 1 << " " << windows_text(parts[p]) << " density "
             << pinwheel::to_string(pinwheel::density(parts[p])) << " witness " << pinwheel::format_period(*res.witness)
             << "\n";
      }
      doc["parts"] = jparts;
    }
    emit(out.out, json ? dump(doc) : text.str());
  }
};

// ---------------------------------------------------------------------------
// static1c
// ---------------------------------------------------------------------------

struct Static1cCmd {
  std::vector<double> positions;
  double v = 1.0;
  OutputOptions out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("static1c", "Build the four-query static 1-center strategy");
    cmd->add_option("--positions", positions, "Comma-separated positions on the line")->delimiter(',')->required();
    cmd->add_option("--v", v, "Maximum speed");
    add_output(cmd, out);
    cmd->callback([this] { execute(); });
  }

  void execute() {
    const auto s = pinwheel::build_static_strategy(positions, v, budget_from_env(pinwheel::kDefaultSearchBudget));
    Json doc;
    doc["b"] = s.b;
    doc["size_bound"] = s.size_bound();
    doc["windows"] = s.windows;
    Json channels = Json::array();
    std::ostringstream text;
    text << "b " << io::format_double(s.b) << "\n";
    text << "size_bound " << io::format_double(s.size_bound()) << "\n";
    text << "windows";
    for (auto w : s.windows) text << ' ' << w;
    text << "\n";
    for (std::size_t c = 0; c < 3; ++c) {
      channels.push_back({{"items", multiset_json(s.parts[c])}, {"period", pinwheel::format_period(s.channels[c])}});
      text << "channel " << c + 1 << " " << windows_text(s.parts[c]) << " period "
           << pinwheel::format_period(s.channels[c]) << "\n";
    }
    doc["channels"] = channels;
    doc["alternation"] = {s.low_extreme + 1, s.high_extreme + 1};
    text << "channel 4 alternates " << s.low_extreme + 1 << " " << s.high_extreme + 1 << "\n";
    emit(out.out, out.format == "json" ? dump(doc) : text.str());
  }
};

// ---------------------------------------------------------------------------
// opt
// ---------------------------------------------------------------------------

struct OptCmd {
  SourceOptions src;
  OutputOptions out;
  std::int64_t horizon = 0;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("opt", "Exhaustive offline optimum over a finite horizon");
    add_source(cmd, src);
    add_output(cmd, out);
    cmd->add_option("--horizon", horizon, "Number of steps")->required()->check(CLI::NonNegativeNumber);
    cmd->callback([this] { execute(); });
  }

  void execute() {
    const Instance inst = load_source(src);
    const auto budget = budget_from_env(kDefaultOptBudget);
    const auto res = opt_search(inst, horizon, budget);
    // The finite-horizon value can only grow with T; report whether the last
    // step still changed it.
    const double prev = horizon > 0 ? opt_search(inst, horizon - 1, budget).value : 0.0;
    const bool stable = std::abs(res.value - prev) <= kTolerance * std::max(1.0, res.value);
    Json doc;
    doc["horizon"] = horizon;
    doc["value"] = res.value;
    doc["value_at_previous_horizon"] = prev;
    doc["stable"] = stable;
    doc["states"] = res.states;
    Json sched = Json::array();
    for (const auto& d : res.schedule) sched.push_back(ids_json(d.ids));
    doc["schedule"] = sched;
    if (out.format == "json") {
      emit(out.out, dump(doc));
      return;
    }
    std::ostringstream os;
    os << "t,queried\n";
    for (const auto& d : res.schedule) {
      os << d.step << ',';
      for (std::size_t k = 0; k < d.ids.size(); ++k) os << (k ? " " : "") << d.ids[k] + 1;
      os << '\n';
    }
    emit(out.out, os.str());
    std::cerr << "value " << io::format_double(res.value) << " at T=" << horizon
              << (stable ? "" : " (still growing with T)") << "\n";
  }
};

// ---------------------------------------------------------------------------
// compete
// ---------------------------------------------------------------------------

struct CompeteCmd {
  SourceOptions src;
  OutputOptions out;
  std::vector<std::size_t> n_values;
  std::vector<std::string> schedulers{"round_robin"};
  std::string reference = "auto";
  std::int64_t horizon = 0;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("compete", "Competitive-ratio table over a family");
    cmd->add_option("--family", src.family, "Generator family")
        ->required()
        ->check(CLI::IsMember(instances::family_names()));
    cmd->add_option("--n", n_values, "Comma-separated n values")->delimiter(',')->required();
    cmd->add_option("--v", src.v, "Maximum speed");
    cmd->add_option("--L", src.L, "Length scale");
    cmd->add_option("--seed", src.seed, "Random seed");
    cmd->add_option("--span", src.span, "Position span of random families");
    cmd->add_flag("--worst-case", src.worst_case, "Relabel so moving objects get the largest ids");
    cmd->add_option("--scheduler", schedulers, "Comma-separated schedulers")->delimiter(',');
    cmd->add_option("--reference", reference, "Reference strategy")
        ->check(CLI::IsMember({"auto", "movers", "opt"}));
    cmd->add_option("--horizon", horizon, "Number of steps")->required()->check(CLI::NonNegativeNumber);
    add_output(cmd, out);
    cmd->callback([this] { execute(); });
  }

  void execute() {
    std::vector<SchedulerSpec> specs;
    for (const auto& name : schedulers) {
      auto kind = scheduler_kind_from_string(name);
      if (!kind || *kind == SchedulerKind::scripted) throw InputError("compete: unsupported scheduler '" + name + "'");
      SchedulerSpec s;
      s.kind = *kind;
      s.opt_horizon = horizon;
      s.budget = budget_from_env(0);
      specs.push_back(s);
    }
    const SourceOptions src_copy = src;
    auto family = [src_copy](std::size_t n) {
      return finish(instances::make_family(family_spec(src_copy, src_copy.family, n)), src_copy);
    };
    const std::string ref = reference;
    const std::int64_t T = horizon;
    auto reference_spec = [ref, T](const Instance& inst) {
      SchedulerSpec s;
      const bool has_movers = !instances::mover_ids(inst).empty();
      if (ref == "movers" || (ref == "auto" && has_movers)) {
        s.kind = SchedulerKind::scripted;
        s.period = instances::mover_reference_period(inst, true);
      } else {
        s.kind = SchedulerKind::opt_search;
        s.opt_horizon = T;
        s.budget = budget_from_env(0);
      }
      return s;
    };
    const auto rows = compete(family, specs, reference_spec, horizon, n_values);
    if (out.format == "json") {
      emit(out.out, dump(io::rows_json(rows)));
    } else {
      std::ostringstream os;
      io::write_csv(os, rows);
      emit(out.out, os.str());
    }
  }
};

// ---------------------------------------------------------------------------
// demo
// ---------------------------------------------------------------------------

struct DemoCmd {
  SourceOptions src;
  OutputOptions out;
  std::size_t samples = 2000;
  std::int64_t horizon = 0;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("demo", "Sampled lower bounds on the planar lower-bound instances");
    cmd->add_option("--family", src.family, "unbounded_1center_2d, unbounded_1median_2d or strip_1center_2d")
        ->required()
        ->check(CLI::IsMember({"unbounded_1center_2d", "unbounded_1median_2d", "strip_1center_2d"}));
    cmd->add_option("--n", src.n, "Objects (strip family)");
    cmd->add_option("--v", src.v, "Maximum speed");
    cmd->add_option("--L", src.L, "Length scale");
    cmd->add_option("--seed", src.seed, "Sampler seed");
    cmd->add_option("--samples", samples, "Uniform realizations per evaluation")->check(CLI::Range(2, 10000000));
    cmd->add_option("--horizon", horizon, "Strip family: round-robin steps (default n)");
    add_output(cmd, out);
    cmd->callback([this] { execute(); });
  }

  void execute() {
    if (src.family == "strip_1center_2d") {
      const Instance inst = instances::make_family(family_spec(src, src.family, std::max<std::size_t>(src.n, 28)));
      RoundRobinScheduler rr(inst.size(), 1);
      const auto series = run_sampled(inst, rr, horizon > 0 ? horizon : static_cast<std::int64_t>(inst.size()),
                                      samples, src.seed);
      if (out.format == "json") {
        Json doc = io::summary_json(series);
        doc["family"] = src.family;
        doc["G"] = inst.meta.params.at("G");
        Json lb = Json::array();
        for (const auto& s : series.steps) lb.push_back(s.center_size);
        doc["lower_bounds"] = lb;
        emit(out.out, dump(doc));
      } else {
        std::ostringstream os;
        os << "t,lower_bound\n";
        for (const auto& s : series.steps) os << s.t << ',' << io::format_double(s.center_size) << '\n';
        emit(out.out, os.str());
      }
      return;
    }
    const Instance inst = instances::make_family(family_spec(src, src.family, src.n));
    const auto bounds = first_query_lower_bounds(inst, samples, src.seed);
    if (out.format == "json") {
      Json doc;
      doc["family"] = src.family;
      doc["L"] = src.L;
      doc["v"] = src.v;
      Json rows = Json::array();
      for (std::size_t i = 0; i < bounds.size(); ++i) rows.push_back({{"first_query", i + 1}, {"lower_bound", bounds[i]}});
      doc["rows"] = rows;
      doc["all_at_least_L"] = std::all_of(bounds.begin(), bounds.end(), [&](double b) { return b >= src.L - kTolerance; });
      emit(out.out, dump(doc));
    } else {
      std::ostringstream os;
      os << "first_query,lower_bound\n";
      for (std::size_t i = 0; i < bounds.size(); ++i) os << i + 1 << ',' << io::format_double(bounds[i]) << '\n';
      emit(out.out, os.str());
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query scheduling for uncertain centers of moving objects"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  GenCmd gen;
  SimulateCmd simulate;
  PinwheelCmd pinwheel_cmd;
  Static1cCmd static1c;
  OptCmd opt;
  CompeteCmd compete_cmd;
  DemoCmd demo;
  gen.attach(app);
  simulate.attach(app);
  pinwheel_cmd.attach(app);
  static1c.attach(app);
  opt.attach(app);
  compete_cmd.attach(app);
  demo.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
