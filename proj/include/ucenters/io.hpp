#pragma once

// Instance files (JSON) and measurement output (CSV, JSON summaries).

#include <charconv>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "ucenters/core.hpp"
#include "ucenters/simulator.hpp"

namespace ucenters::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Instance documents
// ---------------------------------------------------------------------------

inline Json to_json(const Instance& inst) {
  Json doc;
  doc["dim"] = inst.dim;
  doc["queries_per_step"] = inst.queries_per_step;
  doc["center_kind"] = std::string(to_string(inst.center_kind));
  if (!inst.meta.family.empty()) doc["family"] = inst.meta.family;
  if (!inst.meta.params.empty()) {
    Json params = Json::object();
    for (const auto& [k, v] : inst.meta.params) params[k] = v;
    doc["params"] = params;
  }
  Json objects = Json::array();
  for (const auto& obj : inst.objects) {
    Json o;
    o["weight"] = obj.weight;
    o["max_speed"] = obj.max_speed;
    Json wps = Json::array();
    for (const auto& w : obj.trajectory.waypoints()) {
      Json coords = Json::array();
      for (double c : w.position.coords()) coords.push_back(c);
      wps.push_back(Json::array({w.time, coords}));
    }
    o["waypoints"] = wps;
    objects.push_back(o);
  }
  doc["objects"] = objects;
  return doc;
}

namespace detail {

[[noreturn]] inline void fail_at(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

inline double number_at(const Json& j, const std::string& where) {
  if (!j.is_number()) fail_at(where, "expected a number");
  return j.get<double>();
}

inline std::size_t count_at(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail_at(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail_at(where, std::string("missing field '") + key + "'");
  return *it;
}

/// Line and column (both 1-based) of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

/// Builds an instance from a parsed document. Errors name the JSON pointer of
/// the offending value. Does not validate invariants.
inline Instance from_json(const Json& doc) {
  using detail::field;
  if (!doc.is_object()) detail::fail_at("/", "expected an object");
  Instance inst;
  inst.dim = detail::count_at(field(doc, "dim", "/"), "/dim");
  inst.queries_per_step = doc.contains("queries_per_step")
                              ? detail::count_at(doc["queries_per_step"], "/queries_per_step")
                              : 1;
  const Json& kind = field(doc, "center_kind", "/");
  if (!kind.is_string()) detail::fail_at("/center_kind", "expected a string");
  auto parsed = center_kind_from_string(kind.get<std::string>());
  if (!parsed) detail::fail_at("/center_kind", "unknown center kind '" + kind.get<std::string>() + "'");
  inst.center_kind = *parsed;
  if (doc.contains("family")) {
    if (!doc["family"].is_string()) detail::fail_at("/family", "expected a string");
    inst.meta.family = doc["family"].get<std::string>();
  }
  if (doc.contains("params")) {
    const Json& params = doc["params"];
    if (!params.is_object()) detail::fail_at("/params", "expected an object");
    for (const auto& [k, v] : params.items()) inst.meta.params[k] = detail::number_at(v, "/params/" + k);
  }
  const Json& objects = field(doc, "objects", "/");
  if (!objects.is_array()) detail::fail_at("/objects", "expected an array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string at = "/objects/" + std::to_string(i);
    const Json& o = objects[i];
    if (!o.is_object()) detail::fail_at(at, "expected an object");
    MovingObject obj;
    obj.weight = o.contains("weight") ? detail::number_at(o["weight"], at + "/weight") : 1.0;
    obj.max_speed = detail::number_at(field(o, "max_speed", at), at + "/max_speed");
    const Json& wps = field(o, "waypoints", at);
    if (!wps.is_array()) detail::fail_at(at + "/waypoints", "expected an array");
    std::vector<Waypoint> waypoints;
    for (std::size_t j = 0; j < wps.size(); ++j) {
      const std::string wat = at + "/waypoints/" + std::to_string(j);
      const Json& w = wps[j];
      if (!w.is_array() || w.size() != 2 || !w[1].is_array()) detail::fail_at(wat, "expected [time, [coords...]]");
      Waypoint wp;
      wp.time = detail::number_at(w[0], wat + "/0");
      std::vector<double> coords;
      for (std::size_t k = 0; k < w[1].size(); ++k) coords.push_back(detail::number_at(w[1][k], wat + "/1/" + std::to_string(k)));
      wp.position = Point(std::move(coords));
      waypoints.push_back(std::move(wp));
    }
    obj.trajectory = Trajectory(std::move(waypoints));
    inst.objects.push_back(std::move(obj));
  }
  return inst;
}

/// Parses and validates an instance document. Syntax errors carry line:column.
inline Instance parse_instance(const std::string& text, const std::string& origin = "<input>") {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = detail::line_col(text, offset);
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
  Instance inst;
  try {
    inst = from_json(doc);
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  }
  const auto violations = validate_instance(inst);
  if (!violations.empty()) {
    std::string msg = origin + ": invalid instance:";
    for (const auto& v : violations) msg += "\n  " + describe(v);
    throw InputError(msg);
  }
  return inst;
}

inline std::string serialize_instance(const Instance& inst) { return to_json(inst).dump(2) + "\n"; }

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_instance(text, path);
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << serialize_instance(inst);
}

// ---------------------------------------------------------------------------
// Measurement output
// ---------------------------------------------------------------------------

/// Columns t, center_size, obj_1_size..obj_n_size. T = 0 yields the header only.
inline void write_csv(std::ostream& os, const MeasurementSeries& series) {
  os << "t,center_size";
  for (std::size_t i = 1; i <= series.n; ++i) os << ",obj_" << i << "_size";
  os << '\n';
  for (const auto& step : series.steps) {
    os << step.t << ',' << format_double(step.center_size);
    for (double s : step.object_sizes) os << ',' << format_double(s);
    os << '\n';
  }
}

inline Json summary_json(const MeasurementSeries& series) {
  Json doc;
  doc["n"] = series.n;
  doc["horizon"] = series.steps.size();
  doc["max_size"] = series.max_size;
  doc["post_warmup_max"] = series.post_warmup_max;
  doc["warnings"] = series.warnings;
  return doc;
}

inline Json rows_json(const std::vector<CompeteRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["n"] = r.n;
    row["scheduler"] = r.scheduler;
    row["max_size"] = r.max_size;
    row["reference_size"] = r.reference_size;
    if (std::isfinite(r.ratio)) {
      row["ratio"] = r.ratio;
    } else {
      row["ratio"] = "inf";
    }
    out.push_back(row);
  }
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<CompeteRow>& rows) {
  os << "n,scheduler,max_size,reference_size,ratio\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.scheduler << ',' << format_double(r.max_size) << ',' << format_double(r.reference_size)
       << ',' << format_double(r.ratio) << '\n';
  }
}

}  // namespace ucenters::io
