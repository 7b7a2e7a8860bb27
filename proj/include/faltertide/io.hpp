#pragma once

// JSON model, trace, reparam and report files.
//
// Model:
//   {"domain": ["0", "1"], "flexible": ["x"],
//    "functions": {"succ": {"arity": 1, "table": ["1", "0"]}},
//    "relations": {"lt": {"arity": 2, "table": [[false, true], [false, false]]}},
//    "rigid": {"c": "1"}}
// Trace:
//   {"variables": ["x"], "prefix": [{"state": {"x": "0"}, "duration": "1/2"}], "cycle": [...]}
//   ("segments" is accepted for "prefix"; durations default to 1.)
// Reparam:
//   {"offset": "0", "knots": [["1", "2"]], "final_slope": "1/2"}

#include "faltertide/interp.hpp"
#include "faltertide/rational.hpp"
#include "faltertide/reparam.hpp"
#include "faltertide/syntax.hpp"
#include "faltertide/traces.hpp"
#include "faltertide/verdict.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace faltertide {

using json = nlohmann::json;

/// Malformed input file; the message names the offending JSON location.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

inline json load_json(const std::string& path) { return parse_json(read_file(path), path); }

namespace detail {

[[noreturn]] inline void bad(const std::string& where, const std::string& msg) { throw InputError(where + ": " + msg); }

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::string str_of(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

inline Value element_of(const Interpretation& I, const json& j, const std::string& where) {
  std::string name = j.is_number_integer() ? std::to_string(j.get<long long>()) : str_of(j, where);
  auto v = I.element(name);
  if (!v) bad(where, "'" + name + "' is not a domain element");
  return *v;
}

template <class Leaf>
void flatten(const json& j, std::size_t depth, std::size_t width, const std::string& where, Leaf&& leaf) {
  if (depth == 0) {
    leaf(j, where);
    return;
  }
  if (!j.is_array() || j.size() != width) bad(where, "expected an array of " + std::to_string(width) + " entries");
  for (std::size_t i = 0; i < width; ++i) flatten(j[i], depth - 1, width, where + "/" + std::to_string(i), leaf);
}

inline std::size_t arity_of(const json& spec, const std::string& where) {
  const json& a = field(spec, "arity", where);
  if (!a.is_number_unsigned()) bad(where + "/arity", "expected a nonnegative integer");
  return a.get<std::size_t>();
}

}  // namespace detail

inline Rat rat_from_json(const json& j, const std::string& where = "") {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (!j.is_string()) detail::bad(where, "expected a rational \"p/q\"");
  try {
    return Rat::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    detail::bad(where, e.what());
  }
}

inline json to_json(const Rat& r) { return r.str(); }

// ---------------------------------------------------------------------------
// Models

inline Model model_from_json(const json& j, const std::string& where = "") {
  std::vector<std::string> domain;
  const json& d = detail::field(j, "domain", where);
  if (!d.is_array()) detail::bad(where + "/domain", "expected an array");
  for (std::size_t i = 0; i < d.size(); ++i) domain.push_back(detail::str_of(d[i], where + "/domain/" + std::to_string(i)));
  if (domain.empty()) detail::bad(where + "/domain", "domain must be nonempty");

  Interpretation names;  // element lookup while reading tables
  try {
    names = Interpretation(domain, {}, {});
  } catch (const std::invalid_argument& e) {
    detail::bad(where + "/domain", e.what());
  }
  std::map<std::string, FunctionTable> functions;
  std::map<std::string, RelationTable> relations;
  if (j.contains("functions")) {
    for (const auto& [name, spec] : j["functions"].items()) {
      std::string at = where + "/functions/" + name;
      FunctionTable f{detail::arity_of(spec, at), {}};
      detail::flatten(detail::field(spec, "table", at), f.arity, domain.size(), at + "/table",
                      [&](const json& leaf, const std::string& w) { f.table.push_back(detail::element_of(names, leaf, w)); });
      functions[name] = std::move(f);
    }
  }
  if (j.contains("relations")) {
    for (const auto& [name, spec] : j["relations"].items()) {
      std::string at = where + "/relations/" + name;
      RelationTable r{detail::arity_of(spec, at), {}};
      detail::flatten(detail::field(spec, "table", at), r.arity, domain.size(), at + "/table",
                      [&](const json& leaf, const std::string& w) {
                        if (!leaf.is_boolean()) detail::bad(w, "expected true or false");
                        r.table.push_back(leaf.get<bool>());
                      });
      relations[name] = std::move(r);
    }
  }
  Model m;
  try {
    m.interp = Interpretation(std::move(domain), std::move(functions), std::move(relations));
  } catch (const std::invalid_argument& e) {
    detail::bad(where, e.what());
  }
  std::vector<std::string> flex;
  if (j.contains("flexible")) {
    for (std::size_t i = 0; i < j["flexible"].size(); ++i)
      flex.push_back(detail::str_of(j["flexible"][i], where + "/flexible/" + std::to_string(i)));
  }
  try {
    m.flexible = make_layout(std::move(flex));
  } catch (const std::exception& e) {
    detail::bad(where + "/flexible", e.what());
  }
  if (j.contains("rigid")) {
    for (const auto& [name, v] : j["rigid"].items()) m.rigid[name] = detail::element_of(m.interp, v, where + "/rigid/" + name);
  }
  return m;
}

inline Model load_model(const std::string& path) { return model_from_json(load_json(path), path + ":"); }

inline json to_json(const Model& m) {
  const Interpretation& I = m.interp;
  json out;
  out["domain"] = I.domain();
  out["flexible"] = *m.flexible;
  auto nest = [&](auto const& table, std::size_t arity, auto leaf) {
    std::size_t k = 0;
    auto rec = [&](auto& self, std::size_t depth) -> json {
      if (depth == 0) return leaf(table[k++]);
      json arr = json::array();
      for (std::size_t i = 0; i < I.domain_size(); ++i) arr.push_back(self(self, depth - 1));
      return arr;
    };
    return rec(rec, arity);
  };
  out["functions"] = json::object();
  for (const auto& [name, f] : I.functions()) {
    out["functions"][name] = {{"arity", f.arity}, {"table", nest(f.table, f.arity, [&](Value v) { return json(I.name(v)); })}};
  }
  out["relations"] = json::object();
  for (const auto& [name, r] : I.relations()) {
    out["relations"][name] = {{"arity", r.arity}, {"table", nest(r.table, r.arity, [](bool b) { return json(b); })}};
  }
  out["rigid"] = json::object();
  for (const auto& [name, v] : m.rigid) out["rigid"][name] = I.name(v);
  return out;
}

// ---------------------------------------------------------------------------
// Traces

namespace detail {

inline Layout layout_of(const json& j, const std::string& where) {
  const json& vars = field(j, "variables", where);
  if (!vars.is_array()) bad(where + "/variables", "expected an array");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < vars.size(); ++i) names.push_back(str_of(vars[i], where + "/variables/" + std::to_string(i)));
  try {
    return make_layout(std::move(names));
  } catch (const std::exception& e) {
    bad(where + "/variables", e.what());
  }
}

inline State state_of(const Interpretation& I, const Layout& layout, const json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  if (j.size() != layout->size()) bad(where, "state must assign exactly the declared variables");
  std::vector<Value> values;
  for (const auto& v : *layout) {
    auto it = j.find(v);
    if (it == j.end()) bad(where, "missing variable '" + v + "'");
    values.push_back(element_of(I, *it, where + "/" + v));
  }
  return State(layout, std::move(values));
}

inline const json& prefix_field(const json& j) {
  static const json empty = json::array();
  if (j.contains("prefix")) return j["prefix"];
  if (j.contains("segments")) return j["segments"];
  return empty;
}

template <class Each>
void each_entry(const json& part, const std::string& where, Each&& each) {
  if (!part.is_array()) bad(where, "expected an array");
  for (std::size_t i = 0; i < part.size(); ++i) each(part[i], where + "/" + std::to_string(i));
}

}  // namespace detail

inline DiscreteBehavior behavior_from_json(const json& j, const Interpretation& I, const std::string& where = "") {
  Layout layout = detail::layout_of(j, where);
  std::vector<State> pre, cyc;
  auto read = [&](std::vector<State>& out) {
    return [&](const json& e, const std::string& w) {
      out.push_back(detail::state_of(I, layout, detail::field(e, "state", w), w + "/state"));
    };
  };
  detail::each_entry(detail::prefix_field(j), where + "/prefix", read(pre));
  detail::each_entry(detail::field(j, "cycle", where), where + "/cycle", read(cyc));
  if (cyc.empty()) detail::bad(where + "/cycle", "cycle must be nonempty");
  return DiscreteBehavior(layout, std::move(pre), std::move(cyc));
}

inline ContTrace trace_from_json(const json& j, const Interpretation& I, const std::string& where = "") {
  Layout layout = detail::layout_of(j, where);
  std::vector<Segment> pre, cyc;
  auto read = [&](std::vector<Segment>& out) {
    return [&](const json& e, const std::string& w) {
      State s = detail::state_of(I, layout, detail::field(e, "state", w), w + "/state");
      Rat len = e.contains("duration") ? rat_from_json(e["duration"], w + "/duration") : Rat(1);
      if (len.sign() <= 0) detail::bad(w + "/duration", "duration must be positive");
      out.push_back({std::move(s), std::move(len)});
    };
  };
  detail::each_entry(detail::prefix_field(j), where + "/prefix", read(pre));
  detail::each_entry(detail::field(j, "cycle", where), where + "/cycle", read(cyc));
  if (cyc.empty()) detail::bad(where + "/cycle", "cycle must be nonempty");
  return ContTrace(layout, std::move(pre), std::move(cyc));
}

inline DiscreteBehavior load_behavior(const std::string& path, const Interpretation& I) {
  return behavior_from_json(load_json(path), I, path + ":");
}

inline ContTrace load_trace(const std::string& path, const Interpretation& I) {
  return trace_from_json(load_json(path), I, path + ":");
}

inline json to_json(const Interpretation& I, const State& s) {
  json out = json::object();
  for (std::size_t i = 0; i < s.layout()->size(); ++i) out[(*s.layout())[i]] = I.name(s.values()[i]);
  return out;
}

inline json to_json(const Interpretation& I, const DiscreteBehavior& rho) {
  json out{{"variables", *rho.layout()}, {"prefix", json::array()}, {"cycle", json::array()}};
  for (const auto& s : rho.prefix()) out["prefix"].push_back({{"state", to_json(I, s)}});
  for (const auto& s : rho.cycle()) out["cycle"].push_back({{"state", to_json(I, s)}});
  return out;
}

inline json to_json(const Interpretation& I, const ContTrace& tau) {
  json out{{"variables", *tau.layout()}, {"prefix", json::array()}, {"cycle", json::array()}};
  for (const auto& s : tau.segments()) out["prefix"].push_back({{"state", to_json(I, s.value)}, {"duration", s.length.str()}});
  for (const auto& s : tau.cycle()) out["cycle"].push_back({{"state", to_json(I, s.value)}, {"duration", s.length.str()}});
  return out;
}

// ---------------------------------------------------------------------------
// Reparams

inline Reparam reparam_from_json(const json& j, const std::string& where = "") {
  Rat offset = j.contains("offset") ? rat_from_json(j["offset"], where + "/offset") : Rat(0);
  Rat slope = j.contains("final_slope") ? rat_from_json(j["final_slope"], where + "/final_slope") : Rat(1);
  std::vector<Knot> knots;
  if (j.contains("knots")) {
    detail::each_entry(j["knots"], where + "/knots", [&](const json& k, const std::string& w) {
      if (!k.is_array() || k.size() != 2) detail::bad(w, "expected [x, y]");
      knots.push_back({rat_from_json(k[0], w + "/0"), rat_from_json(k[1], w + "/1")});
    });
  }
  try {
    return Reparam(offset, knots, slope);
  } catch (const std::invalid_argument& e) {
    detail::bad(where, e.what());
  }
}

inline json to_json(const Reparam& f) {
  json knots = json::array();
  for (const auto& k : f.knots()) knots.push_back({k.x.str(), k.y.str()});
  return {{"offset", f.offset().str()}, {"knots", knots}, {"final_slope", f.final_slope().str()}};
}

// ---------------------------------------------------------------------------
// Verdict reports and witness replay files

inline json to_json(const Interpretation& I, const RigidEnv& theta) {
  json out = json::object();
  for (const auto& [n, v] : theta) out[n] = I.name(v);
  return out;
}

inline RigidEnv rigid_env_from_json(const json& j, const Interpretation& I, const std::string& where = "") {
  RigidEnv out;
  if (!j.is_object()) detail::bad(where, "expected an object");
  for (const auto& [n, v] : j.items()) out[n] = detail::element_of(I, v, where + "/" + n);
  return out;
}

inline json to_json(const Interpretation& I, const FlexWitness& w) {
  json out{{"variable", w.variable}, {"body", print(w.body)}, {"theta", to_json(I, w.theta)}};
  if (w.behavior) {
    out["semantics"] = "disc";
    out["behavior"] = to_json(I, *w.behavior);
    out["position"] = w.position;
  }
  if (w.trace) {
    out["semantics"] = "cont";
    out["trace"] = to_json(I, *w.trace);
    out["time"] = w.time.str();
  }
  return out;
}

/// Reads a flexible witness back; the body is parsed over the extended behavior's variables.
inline FlexWitness flex_witness_from_json(const json& j, const Model& m, const std::string& where = "") {
  FlexWitness w;
  w.variable = detail::str_of(detail::field(j, "variable", where), where + "/variable");
  w.theta = rigid_env_from_json(detail::field(j, "theta", where), m.interp, where + "/theta");
  Layout layout;
  if (j.contains("behavior")) {
    w.behavior = behavior_from_json(j["behavior"], m.interp, where + "/behavior");
    const json& pos = detail::field(j, "position", where);
    if (!pos.is_number_unsigned()) detail::bad(where + "/position", "expected a nonnegative integer");
    w.position = pos.get<std::size_t>();
    if (w.position >= w.behavior->size()) detail::bad(where + "/position", "position outside the behavior");
    layout = w.behavior->layout();
  } else if (j.contains("trace")) {
    w.trace = trace_from_json(j["trace"], m.interp, where + "/trace");
    w.time = rat_from_json(detail::field(j, "time", where), where + "/time");
    if (w.time.sign() < 0) detail::bad(where + "/time", "time must be nonnegative");
    layout = w.trace->layout();
  } else {
    detail::bad(where, "witness carries neither a behavior nor a trace");
  }
  Model ext = m;
  ext.flexible = layout;
  Signature sig = ext.signature();
  for (const auto& [n, v] : w.theta) sig.rigid.insert(n);
  w.body = parse(detail::str_of(detail::field(j, "body", where), where + "/body"), sig);
  return w;
}

inline json to_json(const Interpretation& I, const Verdict& v) {
  json out{{"verdict", to_string(v.kind)},
           {"exit_code", exit_code(v.kind)},
           {"bounded", v.bounded},
           {"branches", v.branches},
           {"truncated", v.truncated}};
  if (v.witness) {
    json w{{"explanation", v.witness->explanation}};
    if (v.witness->position) w["position"] = *v.witness->position;
    if (v.witness->time) w["time"] = v.witness->time->str();
    if (v.witness->flex) w["flex"] = to_json(I, *v.witness->flex);
    out["witness"] = std::move(w);
  }
  return out;
}

}  // namespace faltertide
