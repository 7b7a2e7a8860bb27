#pragma once

// Command-line front end. `run` parses arguments and dispatches to a command;
// every command returns the process exit status.
//
// Exit status: 0 true / success, 1 false / check failed, 2 true within the
// flexible-quantifier bound, 3 input error, 4 false within the bound.

#include "faltertide/continuous_sem.hpp"
#include "faltertide/discrete_sem.hpp"
#include "faltertide/hol/library.hpp"
#include "faltertide/hol/sexp.hpp"
#include "faltertide/io.hpp"
#include "faltertide/random.hpp"
#include "faltertide/syntax.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace faltertide::cli {

inline constexpr int kExitInput = 3;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct RunConfig {
  std::string model_path;
  std::string formula;
  std::string formula_path;
  std::string corpus_path;
  std::vector<std::string> traces;
  std::string semantics = "disc";
  std::size_t flex_bound = 1;
  std::size_t budget = 4096;
  std::size_t samples = 0;
  std::size_t trials = 20;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "text";
  std::string witness_path;
  std::string out_dir;
  bool surface = false;

  FlexBound bound() const { return {flex_bound, budget}; }
  bool json() const { return format == "json"; }
};

struct CorpusItem {
  std::size_t line;
  std::string text;
};

/// One formula per line; blank lines and `\*` comment lines are skipped.
inline std::vector<CorpusItem> read_corpus(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<CorpusItem> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line.compare(b, 2, "\\*") == 0) continue;
    out.push_back({n, line});
  }
  return out;
}

/// Trace paths; a directory contributes its *.json files in name order.
inline std::vector<std::string> expand_paths(const std::vector<std::string>& paths) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.path().extension() == ".json") found.push_back(e.path().string());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

namespace detail {

struct Env {
  Model model;
  Signature sig;
};

inline Env load_env(const RunConfig& cfg) {
  Env e{load_model(cfg.model_path), {}};
  e.sig = e.model.signature();
  return e;
}

/// Parses, reporting errors as origin:line:col with lines counted from `first_line`.
inline Formula parse_at(const std::string& text, const Signature& sig, const std::string& origin, bool surface = false,
                        std::size_t first_line = 1) {
  try {
    return surface ? parse_surface(text, sig) : parse(text, sig);
  } catch (const ParseError& e) {
    std::string msg = e.what();
    msg = msg.substr(msg.find(": ") + 2);
    throw InputError(origin + ":" + std::to_string(e.line() + first_line - 1) + ":" + std::to_string(e.column()) + ": " +
                     msg);
  }
}

inline Formula single_formula(const RunConfig& cfg, const Signature& sig, bool surface = false) {
  if (cfg.formula.empty() == cfg.formula_path.empty()) throw InputError("give exactly one of --formula or --formula-file");
  if (!cfg.formula.empty()) return parse_at(cfg.formula, sig, "<formula>", surface);
  return parse_at(read_file(cfg.formula_path), sig, cfg.formula_path, surface);
}

struct Item {
  std::string id;
  Formula formula;
};

inline std::vector<Item> formulas(const RunConfig& cfg, const Signature& sig) {
  std::vector<Item> out;
  if (!cfg.corpus_path.empty()) {
    for (const auto& c : read_corpus(cfg.corpus_path)) {
      out.push_back({cfg.corpus_path + ":" + std::to_string(c.line), parse_at(c.text, sig, cfg.corpus_path, false, c.line)});
    }
    if (out.empty()) throw InputError(cfg.corpus_path + ": corpus is empty");
    return out;
  }
  out.push_back({"formula", single_formula(cfg, sig)});
  return out;
}

inline void require_flex_free(const std::vector<Item>& items) {
  for (const auto& it : items) {
    if (has_flexible_quantifier(it.formula)) throw InputError(it.id + ": formula uses a flexible quantifier");
  }
}

inline std::vector<std::string> trace_paths(const RunConfig& cfg) {
  auto paths = expand_paths(cfg.traces);
  if (paths.empty()) throw InputError("no traces given");
  return paths;
}

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

inline void write_json(const std::string& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw InputError(path + ": cannot write file");
  f << j.dump(2) << "\n";
}

inline void print_verdict(std::ostream& out, const Verdict& v) {
  out << "verdict: " << to_string(v.kind) << "\n";
  if (v.bounded) out << "branches: " << v.branches << (v.truncated ? " (budget exhausted)" : "") << "\n";
  if (!v.witness) return;
  if (v.witness->position) out << "position: " << *v.witness->position << "\n";
  if (v.witness->time) out << "time: " << v.witness->time->str() << "\n";
  for (const auto& line : v.witness->explanation) out << "  " << line << "\n";
}

/// Everything needed to recompute a verdict: formula, bindings, trace, bound.
inline json replay_file(const RunConfig& cfg, const Interpretation& I, const Formula& f, const RigidEnv& theta,
                        const json& trace, const Verdict& v) {
  json out{{"semantics", cfg.semantics},
           {"formula", print(f)},
           {"theta", to_json(I, theta)},
           {"flex_bound", cfg.flex_bound},
           {"budget", cfg.budget},
           {"report", to_json(I, v)}};
  out[cfg.semantics == "disc" ? "behavior" : "trace"] = trace;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

inline int cmd_parse(const RunConfig& cfg, std::ostream& out) {
  auto env = detail::load_env(cfg);
  Formula f = detail::single_formula(cfg, env.sig, cfg.surface);
  if (cfg.json()) {
    out << json{{"formula", print(f)}, {"core", print(desugar(f))}, {"size", formula_size(f)}}.dump(2) << "\n";
  } else {
    out << print(f) << "\n";
  }
  return 0;
}

inline int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  auto env = detail::load_env(cfg);
  const Interpretation& I = env.model.interp;
  Formula f = detail::single_formula(cfg, env.sig);
  if (cfg.traces.size() != 1) throw InputError("give exactly one --trace");
  const bool disc = cfg.semantics == "disc";
  auto start = std::chrono::steady_clock::now();
  Verdict v;
  json trace;
  bool coherent = true;
  if (disc) {
    DiscreteBehavior rho = load_behavior(cfg.traces[0], I);
    v = eval_disc(I, f, env.model.rigid, rho, cfg.bound());
    trace = to_json(I, rho);
  } else {
    ContTrace tau = load_trace(cfg.traces[0], I);
    v = sat_cont(I, f, env.model.rigid, tau, cfg.bound());
    trace = to_json(I, tau);
    if (cfg.samples > 0) {
      std::mt19937_64 rng(cfg.seed);
      Rat horizon = tau.canonical().threshold() + Rat(2) * tau.canonical().period();
      long limit = static_cast<long>(horizon.floor().to_double()) + 1;
      std::vector<Rat> samples;
      for (std::size_t k = 0; k < cfg.samples; ++k) samples.push_back(random_rat(rng, limit, 8));
      coherent = coherence_check(I, f, env.model.rigid, tau, samples, cfg.bound());
    }
  }
  double ms = detail::elapsed_ms(start);
  if (!v.holds() && !cfg.witness_path.empty())
    detail::write_json(cfg.witness_path, detail::replay_file(cfg, I, f, env.model.rigid, trace, v));
  if (cfg.json()) {
    json r = to_json(I, v);
    r["formula"] = print(f);
    r["semantics"] = cfg.semantics;
    r["elapsed_ms"] = ms;
    if (cfg.samples > 0) r["coherent"] = coherent;
    out << r.dump(2) << "\n";
  } else {
    detail::print_verdict(out, v);
    if (cfg.samples > 0) out << "coherence: " << (coherent ? "ok" : "VIOLATED") << " (" << cfg.samples << " samples)\n";
  }
  return coherent ? exit_code(v.kind) : 1;
}

inline int cmd_denote(const RunConfig& cfg, std::ostream& out) {
  auto env = detail::load_env(cfg);
  const Interpretation& I = env.model.interp;
  Formula f = detail::single_formula(cfg, env.sig);
  if (cfg.traces.size() != 1) throw InputError("give exactly one --trace");
  ContTrace tau = load_trace(cfg.traces[0], I);
  Denotation d = denote(I, f, env.model.rigid, tau, cfg.bound());
  if (cfg.json()) {
    json r{{"denotation", d.set.str()}, {"exact", d.exact}};
    if (!d.exact) r["certain"] = d.certain.str();
    out << r.dump(2) << "\n";
  } else {
    out << d.set.str() << "\n";
    if (!d.exact) out << "certain: " << d.certain.str() << "\n";
  }
  return d.exact ? 0 : 2;
}

inline int cmd_equiv(const RunConfig& cfg, std::ostream& out) {
  auto env = detail::load_env(cfg);
  const Interpretation& I = env.model.interp;
  if (cfg.traces.size() != 2) throw InputError("give exactly two traces");
  bool same;
  if (cfg.semantics == "disc") {
    auto a = load_behavior(cfg.traces[0], I), b = load_behavior(cfg.traces[1], I);
    require_same_variables(a.layout(), b.layout());
    same = stutter_equiv_disc(a, b);
  } else {
    auto a = load_trace(cfg.traces[0], I), b = load_trace(cfg.traces[1], I);
    same = stutter_equiv_cont(a, b);
  }
  if (cfg.json()) {
    out << json{{"equivalent", same}, {"semantics", cfg.semantics}}.dump(2) << "\n";
  } else {
    out << (same ? "stutter-equivalent" : "not stutter-equivalent") << "\n";
  }
  return same ? 0 : 1;
}

inline int cmd_invariance(const RunConfig& cfg, std::ostream& out) {
  auto env = detail::load_env(cfg);
  const Interpretation& I = env.model.interp;
  auto items = detail::formulas(cfg, env.sig);
  detail::require_flex_free(items);
  auto paths = detail::trace_paths(cfg);
  std::mt19937_64 rng(cfg.seed);
  json violations = json::array();
  std::size_t checks = 0;
  auto start = std::chrono::steady_clock::now();
  for (const auto& path : paths) {
    if (cfg.semantics == "disc") {
      DiscreteBehavior rho = load_behavior(path, I);
      for (const auto& it : items) {
        bool expected = eval_disc(I, it.formula, env.model.rigid, rho).holds();
        for (std::size_t k = 0; k < cfg.trials; ++k, ++checks) {
          DiscreteBehavior r2 = random_stutter_expansion(rho, rng);
          if (eval_disc(I, it.formula, env.model.rigid, r2).holds() != expected)
            violations.push_back({{"formula", it.id}, {"trace", path}, {"trial", k}, {"behavior", to_json(I, r2)}});
        }
      }
    } else {
      ContTrace tau = load_trace(path, I);
      for (const auto& it : items) {
        TimeSet base = denote(I, it.formula, env.model.rigid, tau).set;
        for (std::size_t k = 0; k < cfg.trials; ++k, ++checks) {
          Reparam s = random_stutter(rng);
          TimeSet moved = denote(I, it.formula, env.model.rigid, apply_reparam(tau, s)).set;
          if (!equals(moved, preimage(s, base)))
            violations.push_back({{"formula", it.id}, {"trace", path}, {"trial", k}, {"reparam", to_json(s)}});
        }
      }
    }
  }
  if (cfg.json()) {
    out << json{{"semantics", cfg.semantics},
                {"seed", cfg.seed},
                {"checks", checks},
                {"violations", violations},
                {"elapsed_ms", detail::elapsed_ms(start)}}
               .dump(2)
        << "\n";
  } else {
    for (const auto& v : violations)
      out << "violation: " << v["formula"].get<std::string>() << " on " << v["trace"].get<std::string>() << " trial "
          << v["trial"].get<std::size_t>() << "\n";
    out << "invariance: " << checks << " checks, " << violations.size() << " violations (seed " << cfg.seed << ")\n";
  }
  return violations.empty() ? 0 : 1;
}

inline int cmd_agreement(const RunConfig& cfg, std::ostream& out) {
  auto env = detail::load_env(cfg);
  const Interpretation& I = env.model.interp;
  if (cfg.corpus_path.empty()) throw InputError("--corpus is required");
  auto items = detail::formulas(cfg, env.sig);
  detail::require_flex_free(items);
  auto paths = detail::trace_paths(cfg);
  json disagreements = json::array();
  std::size_t pairs = 0;
  auto start = std::chrono::steady_clock::now();
  for (const auto& path : paths) {
    DiscreteBehavior rho = load_behavior(path, I);
    ContTrace tau = embed_discrete(rho);
    for (const auto& it : items) {
      ++pairs;
      bool d = eval_disc(I, it.formula, env.model.rigid, rho).holds();
      bool c = sat_cont(I, it.formula, env.model.rigid, tau).holds();
      if (d != c)
        disagreements.push_back({{"formula", it.id}, {"text", print(it.formula)}, {"trace", path}, {"disc", d}, {"cont", c}});
    }
  }
  if (cfg.json()) {
    out << json{{"pairs", pairs}, {"disagreements", disagreements}, {"elapsed_ms", detail::elapsed_ms(start)}}.dump(2)
        << "\n";
  } else {
    for (const auto& d : disagreements)
      out << "disagree: " << d["formula"].get<std::string>() << " on " << d["trace"].get<std::string>()
          << ": disc=" << d["disc"] << " cont=" << d["cont"] << "\n";
    out << "agreement: " << pairs << " pairs, " << disagreements.size() << " disagreements\n";
  }
  return disagreements.empty() ? 0 : 1;
}

inline int cmd_hol_check(const std::string& path, const RunConfig& cfg, std::ostream& out) {
  std::vector<hol::Derivation> ds;
  try {
    ds = hol::parse_derivations(read_file(path));
  } catch (const hol::SexpError& e) {
    throw InputError(path + ":" + e.what());
  }
  if (ds.empty()) throw InputError(path + ": no derivations");
  json results = json::array();
  bool all = true;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto r = hol::check(ds[i]);
    all = all && r.ok;
    std::string where;
    for (auto p : r.path) where += "/" + std::to_string(p);
    if (cfg.json()) {
      json j{{"index", i}, {"ok", r.ok}, {"conclusion", hol::to_sexp(ds[i].conclusion)}};
      if (!r.ok) j.update({{"node", where.empty() ? "/" : where}, {"rule", r.rule}, {"reason", r.reason}});
      results.push_back(std::move(j));
    } else if (r.ok) {
      out << "ok " << i << ": " << hol::to_sexp(ds[i].conclusion) << "\n";
    } else {
      out << "rejected " << i << ": at " << (where.empty() ? "/" : where) << " (" << r.rule << "): " << r.reason << "\n";
    }
  }
  if (cfg.json()) out << json{{"file", path}, {"results", results}}.dump(2) << "\n";
  return all ? 0 : 1;
}

inline int cmd_hol_library(const RunConfig& cfg, std::ostream& out) {
  for (const auto& e : hol::library()) {
    std::string text = "; " + e.name + "\n" + hol::to_sexp(e.derivation) + "\n";
    if (cfg.out_dir.empty()) {
      out << text << "\n";
    } else {
      std::string path = cfg.out_dir + "/" + e.name + ".sexp";
      std::ofstream f(path);
      if (!f) throw InputError(path + ": cannot write file");
      f << text;
      out << path << "\n";
    }
  }
  return 0;
}

/// Recomputes a saved refutation; succeeds when the verdict report is reproduced
/// and any flexible witness still falsifies its body.
inline int cmd_replay(const std::string& path, RunConfig cfg, std::ostream& out) {
  auto env = detail::load_env(cfg);
  const Interpretation& I = env.model.interp;
  json w = load_json(path);
  std::string where = path + ":";
  cfg.semantics = faltertide::detail::str_of(faltertide::detail::field(w, "semantics", where), where + "/semantics");
  cfg.flex_bound = faltertide::detail::field(w, "flex_bound", where).get<std::size_t>();
  cfg.budget = faltertide::detail::field(w, "budget", where).get<std::size_t>();
  RigidEnv theta = rigid_env_from_json(faltertide::detail::field(w, "theta", where), I, where + "/theta");
  Signature sig = env.sig;
  for (const auto& [n, v] : theta) sig.rigid.insert(n);
  Formula f = detail::parse_at(faltertide::detail::str_of(faltertide::detail::field(w, "formula", where), where + "/formula"), sig, path);
  Verdict v;
  if (cfg.semantics == "disc") {
    v = eval_disc(I, f, theta, behavior_from_json(faltertide::detail::field(w, "behavior", where), I, where + "/behavior"), cfg.bound());
  } else {
    v = sat_cont(I, f, theta, trace_from_json(faltertide::detail::field(w, "trace", where), I, where + "/trace"), cfg.bound());
  }
  bool reproduced = to_json(I, v) == faltertide::detail::field(w, "report", where);
  bool flex_ok = true;
  if (v.witness && v.witness->flex) {
    const FlexWitness& fw = *v.witness->flex;
    flex_ok = cfg.semantics == "disc" ? replay_disc(I, fw, cfg.bound()) : replay_cont(I, fw, cfg.bound());
  }
  out << "verdict: " << to_string(v.kind) << "\n";
  out << "report: " << (reproduced ? "reproduced" : "DIFFERS") << "\n";
  if (v.witness && v.witness->flex) out << "flexible witness: " << (flex_ok ? "falsifies body" : "DOES NOT falsify body") << "\n";
  return reproduced && flex_ok && !v.holds() ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"faltertide: TLA evaluation over discrete and continuous time, and a higher-order logic kernel"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string hol_path, replay_path;

  auto model = [&](CLI::App* c) { c->add_option("-m,--model", cfg.model_path, "model file (JSON)")->required(); };
  auto formula = [&](CLI::App* c) {
    c->add_option("-f,--formula", cfg.formula, "formula text");
    c->add_option("-F,--formula-file", cfg.formula_path, "formula file");
  };
  auto bound = [&](CLI::App* c) {
    c->add_option("-k,--flex-bound", cfg.flex_bound, "extra stutter copies per step for flexible quantifiers")
        ->envname("FALTERTIDE_FLEX_BOUND");
    c->add_option("--budget", cfg.budget, "branches per flexible quantifier")->check(CLI::PositiveNumber);
  };
  auto format = [&](CLI::App* c) {
    c->add_option("--format", cfg.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };
  auto seed = [&](CLI::App* c) { c->add_option("--seed", cfg.seed, "random seed")->envname("FALTERTIDE_SEED"); };
  auto traces = [&](CLI::App* c, const char* help) { c->add_option("-t,--trace", cfg.traces, help); };

  auto* p = app.add_subcommand("parse", "parse and pretty-print a formula");
  model(p), formula(p), format(p);
  p->add_flag("--surface", cfg.surface, "keep derived operators");

  auto* ed = app.add_subcommand("eval-disc", "evaluate a formula on a discrete lasso");
  model(ed), formula(ed), bound(ed), format(ed), traces(ed, "behavior file (JSON)");
  ed->add_option("-w,--witness", cfg.witness_path, "write a replay file when the verdict is false");

  auto* ec = app.add_subcommand("eval-cont", "evaluate a formula on a continuous trace");
  model(ec), formula(ec), bound(ec), format(ec), seed(ec), traces(ec, "trace file (JSON)");
  ec->add_option("-w,--witness", cfg.witness_path, "write a replay file when the verdict is false");
  ec->add_option("-s,--samples", cfg.samples, "check denotation/suffix coherence at this many random times");

  auto* dn = app.add_subcommand("denote", "print the set of times at which a formula holds");
  model(dn), formula(dn), bound(dn), format(dn), traces(dn, "trace file (JSON)");

  auto* eq = app.add_subcommand("equiv", "decide stuttering equivalence of two traces");
  model(eq), format(eq);
  eq->add_option("traces", cfg.traces, "two trace files")->expected(2);
  eq->add_option("--mode", cfg.semantics, "disc or cont")->check(CLI::IsMember({"disc", "cont"}));

  auto* iv = app.add_subcommand("invariance", "randomized stuttering-invariance trials");
  model(iv), formula(iv), format(iv), seed(iv), traces(iv, "trace files or directories");
  iv->add_option("-c,--corpus", cfg.corpus_path, "formula corpus, one per line");
  iv->add_option("--mode", cfg.semantics, "disc or cont")->check(CLI::IsMember({"disc", "cont"}));
  iv->add_option("--trials", cfg.trials, "trials per formula and trace");

  auto* ag = app.add_subcommand("agreement", "compare discrete and continuous verdicts over a corpus");
  model(ag), format(ag), traces(ag, "lasso files or directories");
  ag->add_option("-c,--corpus", cfg.corpus_path, "formula corpus, one per line");

  auto* hc = app.add_subcommand("hol-check", "check higher-order logic derivations");
  hc->add_option("file", hol_path, "derivation file (S-expressions)")->required();
  format(hc);

  auto* hl = app.add_subcommand("hol-library", "print the built-in derivation library");
  hl->add_option("--out", cfg.out_dir, "write one file per derivation into this directory");

  auto* rp = app.add_subcommand("replay", "recompute a saved refutation");
  model(rp);
  rp->add_option("witness", replay_path, "replay file written by --witness")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*p) return cmd_parse(cfg, out);
    if (*ed) return cfg.semantics = "disc", cmd_eval(cfg, out);
    if (*ec) return cfg.semantics = "cont", cmd_eval(cfg, out);
    if (*dn) return cmd_denote(cfg, out);
    if (*eq) return cmd_equiv(cfg, out);
    if (*iv) return cmd_invariance(cfg, out);
    if (*ag) return cmd_agreement(cfg, out);
    if (*hc) return cmd_hol_check(hol_path, cfg, out);
    if (*hl) return cmd_hol_library(cfg, out);
    if (*rp) return cmd_replay(replay_path, cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace faltertide::cli
