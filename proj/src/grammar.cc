#include "ambigua/grammar.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "ambigua/error.h"
#include "ambigua/reduce.h"
#include "json.hpp"

namespace ambigua {

namespace detail {
extern const char* const kBuiltinLexicon;
}

using nlohmann::json;

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Category category_field(const json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": category must be a string");
  auto c = category_from_name(j.get<std::string>());
  if (!c) throw SchemaError(where + ": unknown category " + j.get<std::string>());
  return *c;
}

bool allowed_rule(const GrammarRule& r) {
  using C = Category;
  const auto& x = r.rhs;
  switch (r.lhs) {
    case C::S: return x == std::vector<C>{C::NP, C::VP};
    case C::NP:
      return x == std::vector<C>{C::PN} || x == std::vector<C>{C::PRO} || x == std::vector<C>{C::Det, C::N};
    case C::VP:
      return x == std::vector<C>{C::IV} || x == std::vector<C>{C::TV, C::NP} ||
             x == std::vector<C>{C::DTV, C::NP, C::NP};
    default: return false;
  }
}

std::string rule_str(const GrammarRule& r) {
  std::string s(category_name(r.lhs));
  s += " ->";
  for (auto c : r.rhs) s += " " + std::string(category_name(c));
  return s;
}

}  // namespace

std::vector<GrammarRule> Grammar::default_rules() {
  using C = Category;
  return {{C::S, {C::NP, C::VP}}, {C::NP, {C::PN}},          {C::NP, {C::Det, C::N}},
          {C::NP, {C::PRO}},      {C::VP, {C::IV}},          {C::VP, {C::TV, C::NP}},
          {C::VP, {C::DTV, C::NP, C::NP}}};
}

Grammar Grammar::from_json_text(const std::string& text, const Signature& base) {
  Grammar g;
  g.signature = Signature::builtin();
  g.signature.merge(base);
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
    g.rules = default_rules();
    return g;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("lexicon is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("lexicon: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "lexicon" && it.key() != "rules" && it.key() != "underspecified")
      throw SchemaError("lexicon: unknown field '" + it.key() + "'");

  struct Raw {
    std::string surface, sem;
    Category cat;
  };
  std::vector<Raw> raw;
  if (j.contains("lexicon")) {
    if (!j["lexicon"].is_array()) throw SchemaError("lexicon: 'lexicon' must be an array");
    for (const auto& e : j["lexicon"]) {
      if (!e.is_object()) throw SchemaError("lexicon: entries must be objects");
      for (auto it = e.begin(); it != e.end(); ++it)
        if (it.key() != "surface" && it.key() != "cat" && it.key() != "sem")
          throw SchemaError("lexicon entry: unknown field '" + it.key() + "'");
      if (!e.contains("surface") || !e["surface"].is_string() || !e.contains("cat") || !e.contains("sem") ||
          !e["sem"].is_string())
        throw SchemaError("lexicon entry needs string 'surface', 'cat' and 'sem'");
      const std::string surface = lower(e["surface"].get<std::string>());
      if (surface.empty() || surface.find_first_of(" \t\n") != std::string::npos)
        throw SchemaError("lexicon entry: surface must be a single word");
      const Category cat = category_field(e["cat"], "lexicon entry " + surface);
      if (!is_lexical(cat)) throw SchemaError("lexicon entry " + surface + ": category is not lexical");
      raw.push_back({surface, e["sem"].get<std::string>(), cat});
    }
  }
  if (j.contains("rules")) {
    if (!j["rules"].is_array()) throw SchemaError("lexicon: 'rules' must be an array");
    for (const auto& r : j["rules"]) {
      if (!r.is_object() || !r.contains("lhs") || !r.contains("rhs") || !r["rhs"].is_array())
        throw SchemaError("grammar rule needs 'lhs' and an 'rhs' array");
      GrammarRule rule{category_field(r["lhs"], "grammar rule"), {}};
      for (const auto& c : r["rhs"]) rule.rhs.push_back(category_field(c, "grammar rule"));
      if (!allowed_rule(rule)) throw SchemaError("grammar rule " + rule_str(rule) + " builds no logical form");
      g.rules.push_back(std::move(rule));
    }
  } else {
    g.rules = default_rules();
  }

  // First pass infers the types of constants; the second reads every entry
  // against the completed signature so underspecification flags stick.
  Signature learned;
  for (const auto& r : raw) parse_expr(r.sem, lexical_type(r.cat), g.signature, &learned);
  for (const auto& [n, info] : learned.entries())
    if (!g.signature.find(n)) g.signature.declare(n, info.type);
  if (j.contains("underspecified")) {
    if (!j["underspecified"].is_array()) throw SchemaError("lexicon: 'underspecified' must be an array");
    for (const auto& n : j["underspecified"]) {
      if (!n.is_string()) throw SchemaError("lexicon: 'underspecified' lists constant names");
      g.signature.mark_underspecified(n.get<std::string>());
    }
  }
  for (const auto& r : raw) {
    Expr sem = parse_expr(r.sem, lexical_type(r.cat), g.signature);
    if (sem.type() != lexical_type(r.cat))
      throw TypeMismatch("lexicon entry " + r.surface + ": " + std::string(category_name(r.cat)) +
                         " translation has type " + sem.type().str());
    if (!free_vars(sem).empty()) throw TypeMismatch("lexicon entry " + r.surface + " has free variables");
    if (r.cat == Category::PRO && (!sem.is(Expr::Kind::Param) || sem.anchored()))
      throw TypeMismatch("lexicon entry " + r.surface + ": a pronoun translates as an unanchored parameter");
    g.lexicon.push_back({r.surface, r.cat, sem});
  }
  return g;
}

Grammar Grammar::load(const std::string& path, const Signature& base) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open lexicon file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), base);
}

const std::string& Grammar::builtin_json() {
  static const std::string text = detail::kBuiltinLexicon;
  return text;
}

Grammar Grammar::builtin(const Signature& base) { return from_json_text(builtin_json(), base); }

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> out;
  std::istringstream in{std::string(sentence)};
  std::string w;
  while (in >> w) out.push_back(lower(w));
  return out;
}

std::vector<Expr> Grammar::parse(std::string_view sentence) const { return parse(tokenize(sentence)); }

std::vector<Expr> Grammar::parse(const std::vector<std::string>& tokens) const {
  const std::size_t n = tokens.size();
  if (n == 0) return {};
  // chart[i][len-1]: constituents spanning tokens i .. i+len-1
  std::vector<std::vector<std::vector<Expr>>> chart(n, std::vector<std::vector<Expr>>(n));
  auto add = [](std::vector<Expr>& cell, const Expr& e) {
    for (const auto& x : cell)
      if (identical(x, e)) return false;
    cell.push_back(e);
    return true;
  };
  auto unary_closure = [&](std::vector<Expr>& cell) {
    for (std::size_t i = 0; i < cell.size(); ++i) {
      for (const auto& r : rules) {
        if (r.rhs.size() != 1 || cell[i].category() != r.rhs[0]) continue;
        add(cell, Expr::LF(r.lhs, {cell[i]}));
      }
    }
  };
  int pronouns = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    bool minted = false;
    for (const auto& e : lexicon) {
      if (e.surface != tokens[i]) continue;
      found = true;
      Expr sem = e.sem;
      if (e.cat == Category::PRO) {
        if (!minted) ++pronouns;
        minted = true;
        sem = Expr::Param(sem.name() + std::to_string(pronouns));
      }
      add(chart[i][0], Expr::LF(e.cat, {sem}));
    }
    if (!found) throw UnknownToken("no lexical entry for '" + tokens[i] + "'");
    unary_closure(chart[i][0]);
  }
  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      auto& cell = chart[i][len - 1];
      for (const auto& r : rules) {
        if (r.rhs.size() < 2) continue;
        // enumerate ways to cut [i, i+len) into r.rhs.size() non-empty pieces
        std::vector<Expr> picked;
        std::function<void(std::size_t, std::size_t)> go = [&](std::size_t part, std::size_t from) {
          if (part == r.rhs.size()) {
            if (from == i + len) add(cell, Expr::LF(r.lhs, picked));
            return;
          }
          const std::size_t rest = r.rhs.size() - part - 1;
          for (std::size_t to = from + 1; to + rest <= i + len; ++to) {
            if (part + 1 == r.rhs.size() && to != i + len) continue;
            for (const auto& c : chart[from][to - from - 1]) {
              if (c.category() != r.rhs[part]) continue;
              picked.push_back(c);
              go(part + 1, to);
              picked.pop_back();
            }
          }
        };
        go(0, i);
      }
      unary_closure(cell);
    }
  }
  std::vector<Expr> out;
  for (const auto& c : chart[0][n - 1])
    if (c.category() == Category::S) out.push_back(c);
  return out;
}

Expr sentence_wff(const Expr& lf) {
  if (!lf.is(Expr::Kind::LF) || lf.category() != Category::S)
    throw WrongCategory("a sentence wff needs an S logical form");
  return lf;
}

std::vector<Category> leaf_categories(const Expr& lf) {
  std::vector<Category> out;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (!e.is(Expr::Kind::LF)) return;
    if (is_lexical(e.category())) {
      out.push_back(e.category());
      return;
    }
    for (const auto& k : e.kids()) walk(k);
  };
  walk(lf);
  return out;
}

}  // namespace ambigua
