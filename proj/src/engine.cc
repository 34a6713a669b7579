#include "ambigua/engine.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ambigua/cooper.h"
#include "ambigua/denote.h"
#include "ambigua/error.h"
#include "ambigua/syntax.h"
#include "json.hpp"

namespace ambigua {

using nlohmann::json;

bool Rule::normal() const { return just && rewrite && alpha_eq(*just, *rewrite); }

void validate_rule(const Rule& r) {
  const auto in_trigger = metavar_names(r.trigger);
  auto check = [&](const Expr& e, const char* field) {
    for (const auto& m : metavar_names(e))
      if (!in_trigger.count(m))
        throw SchemaError("rule " + r.name + ": metavariable ?" + m + " in " + field + " does not occur in the trigger");
  };
  if (r.context) check(*r.context, "context");
  if (r.just) check(*r.just, "justification");
  if (r.rewrite) check(*r.rewrite, "rewrite");
  for (const auto& a : r.add) check(a, "additions");
}

std::vector<Rule> rules_from_json_text(const std::string& text, const Signature& sig) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("rules file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rules") || !j["rules"].is_array())
    throw SchemaError("rules file needs a 'rules' array");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "rules") throw SchemaError("rules file: unknown field '" + it.key() + "'");
  std::vector<Rule> out;
  std::set<std::string> names;
  for (const auto& r : j["rules"]) {
    if (!r.is_object()) throw SchemaError("each rule must be an object");
    for (auto it = r.begin(); it != r.end(); ++it) {
      static const std::set<std::string> keys = {"name", "trigger", "context", "just", "rewrite", "add"};
      if (!keys.count(it.key())) throw SchemaError("rule: unknown field '" + it.key() + "'");
    }
    if (!r.contains("name") || !r["name"].is_string() || r["name"].get<std::string>().empty())
      throw SchemaError("rule needs a non-empty 'name'");
    const std::string name = r["name"].get<std::string>();
    if (!names.insert(name).second) throw SchemaError("duplicate rule name " + name);
    auto field = [&](const char* key) -> std::optional<std::string> {
      if (!r.contains(key) || r[key].is_null()) return std::nullopt;
      if (!r[key].is_string()) throw SchemaError("rule " + name + ": '" + key + "' must be a string");
      std::string s = r[key].get<std::string>();
      if (s.find_first_not_of(" \t\n") == std::string::npos) return std::nullopt;
      return s;
    };
    auto trigger = field("trigger");
    if (!trigger) throw SchemaError("rule " + name + " needs a trigger");
    std::vector<std::string> adds;
    if (r.contains("add")) {
      if (!r["add"].is_array()) throw SchemaError("rule " + name + ": 'add' must be an array");
      for (const auto& a : r["add"]) {
        if (!a.is_string()) throw SchemaError("rule " + name + ": additions must be strings");
        adds.push_back(a.get<std::string>());
      }
    }
    // All fields are read as one conjunction so metavariables share types.
    const auto context = field("context"), just = field("just"), rewrite = field("rewrite");
    std::vector<std::string> parts{*trigger};
    for (const auto& f : {context, just, rewrite})
      if (f) parts.push_back(*f);
    parts.insert(parts.end(), adds.begin(), adds.end());
    std::vector<Expr> read;
    try {
      if (parts.size() == 1) {
        read.push_back(parse_expr(parts[0], Type::T(), sig));
      } else {
        std::string text2 = "(and";
        for (const auto& p : parts) text2 += " " + p;
        text2 += ")";
        Expr cur = parse_expr(text2, Type::T(), sig);
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
          read.push_back(cur.lhs());
          cur = cur.rhs();
        }
        read.push_back(cur);
      }
    } catch (const Error& e) {
      throw SchemaError("rule " + name + ": " + e.what());
    }
    Rule rule{name, read[0], std::nullopt, std::nullopt, std::nullopt, {}};
    std::size_t i = 1;
    if (context) rule.context = read[i++];
    if (just) rule.just = read[i++];
    if (rewrite) rule.rewrite = read[i++];
    for (; i < read.size(); ++i) rule.add.push_back(read[i]);
    validate_rule(rule);
    out.push_back(std::move(rule));
  }
  return out;
}

std::vector<Rule> load_rules(const std::string& path, const Signature& sig) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open rules file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return rules_from_json_text(ss.str(), sig);
}

std::vector<Expr> canonical_set(std::vector<Expr> ws) {
  std::vector<std::pair<std::string, Expr>> keyed;
  for (auto& w : ws) keyed.emplace_back(canonical_key(w), std::move(w));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Expr> out;
  for (std::size_t i = 0; i < keyed.size(); ++i)
    if (i == 0 || keyed[i].first != keyed[i - 1].first) out.push_back(keyed[i].second);
  return out;
}

std::vector<Expr> conjuncts(const Expr& w) {
  if (!w.is(Expr::Kind::And)) return {w};
  auto l = conjuncts(w.lhs());
  auto r = conjuncts(w.rhs());
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

bool holds(const std::vector<Expr>& ws, const Expr& e) {
  for (const auto& w : ws) {
    if (alpha_eq(w, e)) return true;
    if (w.is(Expr::Kind::And))
      for (const auto& c : conjuncts(w))
        if (alpha_eq(c, e)) return true;
  }
  return false;
}

namespace {

std::optional<Expr> negated_just(const Rule& r, const Bindings& b) {
  if (!r.just) return std::nullopt;
  return Expr::Not(beta_reduce(instantiate(*r.just, b)));
}

Expr replace_conjunct(const Expr& w, int& index, const Expr& with) {
  if (!w.is(Expr::Kind::And)) return index-- == 0 ? with : w;
  Expr l = replace_conjunct(w.lhs(), index, with);
  Expr r = replace_conjunct(w.rhs(), index, with);
  return Expr::And(l, r);
}

std::string binding_str(const Bindings& b) {
  std::string s;
  for (const auto& [k, v] : b) s += (s.empty() ? "" : ", ") + ("?" + k) + "=" + print(v);
  return s;
}

std::string set_key(const std::vector<Expr>& ws) {
  std::string s;
  for (const auto& w : ws) s += canonical_key(w) + "\n";
  return s;
}

bool mentions_unanchored(const Expr& e) {
  if (e.is(Expr::Kind::Param) && !e.anchored()) return true;
  return std::any_of(e.kids().begin(), e.kids().end(), mentions_unanchored);
}

}  // namespace

std::vector<RuleBinding> match_trigger(const Rule& r, const std::vector<Expr>& ws) {
  std::vector<RuleBinding> out;
  auto try_at = [&](const Expr& target, std::size_t member, int conj) {
    Bindings b;
    if (!match(r.trigger, target, b)) return;
    if (r.context && !holds(ws, beta_reduce(instantiate(*r.context, b)))) return;
    out.push_back({std::move(b), member, conj});
  };
  for (std::size_t i = 0; i < ws.size(); ++i) {
    try_at(ws[i], i, -1);
    if (ws[i].is(Expr::Kind::And)) {
      const auto cs = conjuncts(ws[i]);
      for (std::size_t c = 0; c < cs.size(); ++c) try_at(cs[c], i, static_cast<int>(c));
    }
  }
  return out;
}

std::vector<Expr> apply_rule(const Rule& r, const RuleBinding& b, const std::vector<Expr>& ws) {
  if (auto nd = negated_just(r, b.vars); nd && holds(ws, *nd))
    throw Blocked("rule " + r.name + " is blocked by " + print(*nd));
  std::vector<Expr> out = ws;
  if (r.rewrite) {
    const Expr sigma = beta_reduce(instantiate(*r.rewrite, b.vars));
    Expr& target = out.at(b.member);
    if (b.conjunct < 0) {
      target = sigma;
    } else {
      int idx = b.conjunct;
      target = replace_conjunct(target, idx, sigma);
    }
  }
  for (const auto& a : r.add) out.push_back(beta_reduce(instantiate(a, b.vars)));
  return canonical_set(std::move(out));
}

bool check_cdi(const std::vector<Expr>& ws) {
  return std::none_of(ws.begin(), ws.end(), [](const Expr& w) { return is_h_ambiguous(w); });
}

bool is_anti_random(const Rule& r, const Model& m) {
  if (!r.context) return false;
  // Metavariables become free variables, so the sense tables range over
  // every binding at once.
  SubstMap sub;
  std::function<void(const Expr&)> collect = [&](const Expr& e) {
    if (e.is(Expr::Kind::MetaVar)) sub.emplace(AtomKey::of(e), Expr::Var("?" + e.name(), e.type()));
    for (const auto& k : e.kids()) collect(k);
  };
  collect(*r.context);
  const Expr beta = beta_reduce(substitute_many(*r.context, sub));
  Evaluator ev(m);
  const std::size_t ns = ev.situations();
  for (const auto& s : ev.denote(beta).senses)
    for (std::size_t g = 0; g * ns < s.table.size(); ++g)
      for (auto d : m.discourse) {
        const Value& v = s.table[g * ns + d];
        if (v.undefined() || v.as_atom() != 1) return true;
      }
  return false;
}

std::vector<Expr> anchor_param(const std::vector<Expr>& ws, const Expr& p, const Expr& t) {
  if (!p.is(Expr::Kind::Param) || p.anchored()) throw TypeMismatch("only an unanchored parameter can be anchored");
  if (!t.type().is_e()) throw TypeMismatch("a parameter is anchored to a term of type e, not " + t.type().str());
  if (mentions_unanchored(t)) throw UnanchoredAnchor("cannot anchor " + print(p) + " to " + print(t));
  std::vector<Expr> out;
  for (const auto& w : ws) out.push_back(substitute_many(w, SubstMap{{AtomKey::of(p), t}}));
  return canonical_set(std::move(out));
}

std::vector<Expr> normalize_wffs(const std::vector<Expr>& ws0, std::vector<TraceStep>& trace) {
  std::vector<Expr> ws = canonical_set(ws0);
  for (bool changed = true; changed;) {
    changed = false;
    // parameters anchored by equations
    for (std::size_t i = 0; i < ws.size() && !changed; ++i) {
      const Expr& w = ws[i];
      if (!w.is(Expr::Kind::Eq)) continue;
      for (int side = 0; side < 2 && !changed; ++side) {
        const Expr& p = side == 0 ? w.lhs() : w.rhs();
        const Expr& t = side == 0 ? w.rhs() : w.lhs();
        if (!p.is(Expr::Kind::Param) || p.anchored() || mentions_unanchored(t) || contains_kind(t, Expr::Kind::LF))
          continue;
        std::vector<Expr> rest = ws;
        rest.erase(rest.begin() + static_cast<long>(i));
        trace.push_back({TraceStep::Kind::Anchor, print(p), print(w)});
        ws = anchor_param(rest, p, t);
        changed = true;
      }
    }
    // S logical forms without scope ambiguity
    std::function<Expr(const Expr&)> resolve = [&](const Expr& e) -> Expr {
      if (e.is(Expr::Kind::LF)) {
        if (e.category() != Category::S) return e;
        try {
          auto rs = readings(e);
          if (rs.size() == 1) {
            trace.push_back({TraceStep::Kind::Resolve, print(e), print(rs[0])});
            return rs[0];
          }
        } catch (const Error&) {
        }
        return e;
      }
      if (e.kids().empty()) return e;
      std::vector<Expr> kids;
      bool diff = false;
      for (const auto& k : e.kids()) {
        kids.push_back(resolve(k));
        diff = diff || !kids.back().same_node(k);
      }
      return diff ? e.with_kids(std::move(kids)) : e;
    };
    std::vector<Expr> next;
    bool diff = false;
    for (const auto& w : ws) {
      next.push_back(resolve(w));
      diff = diff || !next.back().same_node(w);
    }
    if (diff) {
      ws = canonical_set(std::move(next));
      changed = true;
    }
  }
  return ws;
}

ExtensionReport extensions(const Theory& t, const EngineOptions& opts) {
  ExtensionReport report;
  for (const auto& w : t.uf)
    if (!w.type().is_t()) throw TypeMismatch("theory member " + print(w) + " is not a wff");
  std::vector<const Rule*> rules;
  for (const auto& r : t.rules) rules.push_back(&r);
  std::sort(rules.begin(), rules.end(), [](const Rule* a, const Rule* b) { return a->name < b->name; });
  std::vector<std::string> violations;
  for (const Rule* r : rules) {
    const bool ok = t.model ? is_anti_random(*r, *t.model) : r->context.has_value();
    if (!ok) violations.push_back(r->name);
  }
  if (!violations.empty()) {
    std::string names;
    for (const auto& v : violations) names += (names.empty() ? "" : ", ") + v;
    if (opts.anti_random == AntiRandomPolicy::Reject)
      throw AntiRandomViolation("rules without a non-trivial context: " + names);
    for (const auto& v : violations) report.warnings.push_back("rule " + v + " has a trivial context");
  }

  struct State {
    std::vector<Expr> ws;
    std::vector<Expr> obligations;  // negated justifications of applied rules
    std::vector<TraceStep> trace;
  };
  std::set<std::string> visited;
  std::vector<State> quiescent;
  std::function<void(const State&)> dfs = [&](const State& s) {
    const std::string key = set_key(s.ws) + "|" + set_key(s.obligations);
    if (!visited.insert(key).second) return;
    const std::string here = set_key(s.ws);
    bool moved = false;
    for (const Rule* r : rules) {
      for (const auto& b : match_trigger(*r, s.ws)) {
        auto nd = negated_just(*r, b.vars);
        if (nd && holds(s.ws, *nd)) continue;
        State next{apply_rule(*r, b, s.ws), s.obligations, s.trace};
        next.trace.push_back({TraceStep::Kind::Rule, r->name, binding_str(b.vars)});
        next.ws = normalize_wffs(next.ws, next.trace);
        if (set_key(next.ws) == here) continue;
        if (++report.steps > opts.max_steps)
          throw NonTermination("more than " + std::to_string(opts.max_steps) + " rule applications");
        if (nd) next.obligations = canonical_set([&] {
          auto o = next.obligations;
          o.push_back(*nd);
          return o;
        }());
        moved = true;
        dfs(next);
      }
    }
    if (!moved) quiescent.push_back(s);
  };
  State start{{}, {}, {}};
  start.ws = normalize_wffs(t.uf, start.trace);
  dfs(start);

  std::set<std::string> seen;
  for (auto& q : quiescent) {
    bool justified = true;
    for (const auto& nd : q.obligations) justified = justified && !holds(q.ws, nd);
    if (!justified || !check_cdi(q.ws)) continue;
    if (!seen.insert(set_key(q.ws)).second) continue;
    Extension e{q.ws, q.trace, true, std::nullopt};
    if (t.model) {
      try {
        e.consistent = is_consistent(e.wffs, *t.model);
      } catch (const UninterpretedConstant& err) {
        report.warnings.push_back(std::string("consistency not checked: ") + err.what());
      }
    }
    report.extensions.push_back(std::move(e));
  }
  std::sort(report.extensions.begin(), report.extensions.end(),
            [](const Extension& a, const Extension& b) { return set_key(a.wffs) < set_key(b.wffs); });
  return report;
}

std::size_t perceived_ambiguity(const Theory& t, const EngineOptions& opts) {
  return extensions(t, opts).extensions.size();
}

}  // namespace ambigua
