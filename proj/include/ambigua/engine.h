#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ambigua/model.h"
#include "ambigua/reduce.h"

namespace ambigua {

// A discourse-interpretation rule: trigger : context : justification /
// rewrite, additions. Without a rewrite the trigger stays in place.
struct Rule {
  std::string name;
  Expr trigger;
  std::optional<Expr> context;
  std::optional<Expr> just;
  std::optional<Expr> rewrite;
  std::vector<Expr> add;

  // Justification alpha-equivalent to the rewrite.
  bool normal() const;
};

// Every metavariable of the rule occurs in its trigger (SchemaError).
void validate_rule(const Rule& r);

std::vector<Rule> rules_from_json_text(const std::string& text, const Signature& sig);
std::vector<Rule> load_rules(const std::string& path, const Signature& sig);

// Where a trigger instance sits: a member of the set, or one conjunct of a
// top-level conjunction (conjunct = -1 for the whole member).
struct RuleBinding {
  Bindings vars;
  std::size_t member = 0;
  int conjunct = -1;
};

// Sorted by canonical key, no alpha-duplicates.
std::vector<Expr> canonical_set(std::vector<Expr> ws);
// Conjuncts of a (possibly nested) conjunction, left to right.
std::vector<Expr> conjuncts(const Expr& w);
// Member of ws, or conjunct of a member, alpha-equivalent to e.
bool holds(const std::vector<Expr>& ws, const Expr& e);

std::vector<RuleBinding> match_trigger(const Rule& r, const std::vector<Expr>& ws);
// Throws Blocked when the negated justification is present.
std::vector<Expr> apply_rule(const Rule& r, const RuleBinding& b, const std::vector<Expr>& ws);

bool check_cdi(const std::vector<Expr>& ws);
bool is_anti_random(const Rule& r, const Model& m);

// Replaces the unanchored parameter p by t throughout.
std::vector<Expr> anchor_param(const std::vector<Expr>& ws, const Expr& p, const Expr& t);

struct TraceStep {
  enum class Kind { Rule, Resolve, Anchor } kind;
  std::string label;   // rule name, or the normalized wff
  std::string detail;  // binding, reading, or equation
};

struct Extension {
  std::vector<Expr> wffs;
  std::vector<TraceStep> trace;
  bool cdi = true;
  std::optional<bool> consistent;  // empty without a model
};

enum class AntiRandomPolicy { Reject, Warn };

struct EngineOptions {
  std::size_t max_steps = 10000;
  AntiRandomPolicy anti_random = AntiRandomPolicy::Reject;
};

struct Theory {
  std::vector<Rule> rules;
  std::vector<Expr> uf;
  const Model* model = nullptr;
};

struct ExtensionReport {
  std::vector<Extension> extensions;
  std::vector<std::string> warnings;
  std::size_t steps = 0;
};

// Resolves S logical forms with a single reading and anchors parameters
// given by equations; returns the new set and appends to the trace.
std::vector<Expr> normalize_wffs(const std::vector<Expr>& ws, std::vector<TraceStep>& trace);

ExtensionReport extensions(const Theory& t, const EngineOptions& opts = {});
std::size_t perceived_ambiguity(const Theory& t, const EngineOptions& opts = {});

}  // namespace ambigua
