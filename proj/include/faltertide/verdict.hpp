#pragma once

// Outcomes of evaluation, with counterexample data for refutations.

#include "faltertide/ast.hpp"
#include "faltertide/interp.hpp"
#include "faltertide/rational.hpp"
#include "faltertide/traces.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace faltertide {

/// Finitization of flexible quantification. Each quantifier node explores at
/// most `branch_budget` (stutter expansion, value stream) pairs, shallowest
/// expansions first, so raising either limit never loses a refutation.
struct FlexBound {
  std::size_t max_stutter_expansion = 1;
  std::size_t branch_budget = 4096;
};

enum class VerdictKind { True, False, TrueWithinBound, FalseWitnessed, FalseWithinBound };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::True: return "True";
    case VerdictKind::False: return "False";
    case VerdictKind::TrueWithinBound: return "TrueWithinBound";
    case VerdictKind::FalseWitnessed: return "FalseWitnessed";
    case VerdictKind::FalseWithinBound: return "FalseWithinBound";
  }
  return "?";
}

/// Exit status of the command-line tool for a verdict.
inline int exit_code(VerdictKind k) {
  switch (k) {
    case VerdictKind::True: return 0;
    case VerdictKind::False:
    case VerdictKind::FalseWitnessed: return 1;
    case VerdictKind::TrueWithinBound: return 2;
    case VerdictKind::FalseWithinBound: return 4;
  }
  return 3;
}

/// A concrete choice for a flexible quantifier that falsifies its body.
struct FlexWitness {
  std::string variable;
  Formula body;
  RigidEnv theta;
  std::optional<DiscreteBehavior> behavior;  // discrete: extended, expanded behavior
  std::size_t position = 0;
  std::optional<ContTrace> trace;            // continuous: extended trace
  Rat time{0};
};

struct Witness {
  std::vector<std::string> explanation;
  std::optional<std::size_t> position;  // first violating step
  std::optional<Rat> time;              // earliest violating instant
  std::optional<FlexWitness> flex;
};

struct Verdict {
  VerdictKind kind = VerdictKind::True;
  std::optional<Witness> witness;
  bool bounded = false;  // a flexible quantifier was enumerated
  std::size_t branches = 0;
  bool truncated = false;  // some quantifier hit its branch budget

  bool holds() const { return kind == VerdictKind::True || kind == VerdictKind::TrueWithinBound; }
};

inline std::string state_str(const Interpretation& I, const State& s) {
  std::string out = "{";
  const auto& names = *s.layout();
  for (std::size_t i = 0; i < names.size(); ++i) {
    out += (i ? ", " : "") + names[i] + "=" + I.name(s.values()[i]);
  }
  return out + "}";
}

namespace detail {

/// Truth value plus whether bounded enumeration could still flip it.
struct Truth {
  bool value = true;
  bool certain = true;
  friend bool operator==(const Truth&, const Truth&) = default;
};

inline Truth truth_and(Truth a, Truth b) {
  return {a.value && b.value, (a.certain && b.certain) || (!a.value && a.certain) || (!b.value && b.certain)};
}

inline Verdict make_verdict(Truth t, bool bounded) {
  Verdict v;
  v.bounded = bounded;
  if (t.value) {
    v.kind = bounded ? VerdictKind::TrueWithinBound : VerdictKind::True;
  } else {
    v.kind = t.certain ? VerdictKind::False : VerdictKind::FalseWithinBound;
  }
  return v;
}

inline void check_closed(const Formula& f, const RigidEnv& theta, const Layout& layout) {
  FreeVars fv = free_vars(f);
  for (const auto& r : fv.rigid) {
    if (!theta.count(r)) throw EvalError("unbound rigid variable '" + r + "'");
  }
  for (const auto& x : fv.flexible) {
    if (!std::binary_search(layout->begin(), layout->end(), x))
      throw EvalError("flexible variable '" + x + "' is not a variable of the trace");
  }
}

struct Enumeration {
  std::size_t branches = 0;
  bool truncated = false;
  bool stopped = false;
};

/// Visits (extra, values) pairs: extra[i] in [0, max_extra] copies added to
/// slot i, values a stream over the sum of (extra[i] + 1) refined slots. Slot
/// refinements are visited by increasing max(extra), then lexicographically;
/// streams lexicographically. `visit` returns false to stop early.
template <class Visit>
Enumeration enumerate_refinements(std::size_t slots, std::size_t max_extra, std::size_t domain_size,
                                  std::size_t budget, Visit&& visit) {
  Enumeration out;
  std::vector<std::size_t> extra(slots, 0);
  for (std::size_t level = 0; level <= max_extra; ++level) {
    std::fill(extra.begin(), extra.end(), 0);
    for (;;) {
      bool at_level = level == 0 || *std::max_element(extra.begin(), extra.end()) == level;
      if (at_level) {
        std::size_t n = 0;
        for (auto e : extra) n += e + 1;
        std::vector<std::uint32_t> values(n, 0);
        for (;;) {
          if (out.branches == budget) {
            out.truncated = true;
            return out;
          }
          ++out.branches;
          if (!visit(static_cast<const std::vector<std::size_t>&>(extra), static_cast<const std::vector<std::uint32_t>&>(values))) {
            out.stopped = true;
            return out;
          }
          std::size_t k = n;
          while (k > 0 && values[k - 1] + 1 == domain_size) values[--k] = 0;
          if (k == 0) break;
          ++values[k - 1];
        }
      }
      if (level == 0 || slots == 0) break;
      std::size_t k = slots;
      while (k > 0 && extra[k - 1] == level) extra[--k] = 0;
      if (k == 0) break;
      ++extra[k - 1];
    }
  }
  return out;
}

}  // namespace detail

}  // namespace faltertide
