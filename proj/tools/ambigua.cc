// ambigua: parse, readings, extensions, check-rules.
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ambigua/cooper.h"
#include "ambigua/denote.h"
#include "ambigua/engine.h"
#include "ambigua/error.h"
#include "ambigua/grammar.h"
#include "ambigua/syntax.h"
#include "json.hpp"

#ifndef AMBIGUA_VERSION
#define AMBIGUA_VERSION "0.0.0"
#endif

using namespace ambigua;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kNoParse = 1, kError = 2, kAmbiguous = 3, kNoExtension = 4 };

struct Config {
  std::string lexicon, model, rules, uf;
  std::vector<std::string> wffs;
  std::string sentence;
  bool json = false;
  bool strict = false;
  bool dedup = false;
  std::size_t max_steps = 10000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

// Everything a subcommand needs, loaded up front so bad files fail early.
struct Inputs {
  std::optional<Model> model;
  Grammar grammar;
  json provenance = json::object();
};

Inputs load_inputs(const Config& c) {
  Inputs in;
  Signature base;
  if (!c.model.empty()) {
    const std::string text = read_file(c.model);
    in.model = Model::from_json_text(text);
    base = in.model->signature();
    in.provenance["model"] = {{"path", c.model}, {"sha256", sha256(text)}};
  }
  const std::string lex = c.lexicon.empty() ? Grammar::builtin_json() : read_file(c.lexicon);
  in.grammar = Grammar::from_json_text(lex, base);
  in.provenance["lexicon"] = {{"path", c.lexicon.empty() ? "<builtin>" : c.lexicon}, {"sha256", sha256(lex)}};
  return in;
}

json header(const char* command, const Inputs& in) {
  return {{"tool", "ambigua"}, {"version", AMBIGUA_VERSION}, {"command", command}, {"inputs", in.provenance}};
}

void emit(const Config& c, const json& report, const std::string& text) {
  if (c.json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << text;
}

int cmd_parse(const Config& c) {
  Inputs in = load_inputs(c);
  const auto trees = in.grammar.parse(c.sentence);
  json j = header("parse", in);
  j["sentence"] = c.sentence;
  j["parses"] = json::array();
  std::string text;
  for (const auto& t : trees) {
    j["parses"].push_back({{"tree", brackets(t)}, {"lf", print(t)}});
    text += brackets(t) + "\n";
  }
  j["count"] = trees.size();
  emit(c, j, text);
  return trees.empty() ? kNoParse : kOk;
}

int cmd_readings(const Config& c) {
  Inputs in = load_inputs(c);
  if (c.dedup && !in.model) throw SchemaError("--denotational-dedup needs --model");
  const auto trees = in.grammar.parse(c.sentence);
  std::vector<Expr> all;
  for (const auto& t : trees)
    for (const auto& r : c.dedup ? readings(t, *in.model) : readings(t)) {
      bool dup = false;
      for (const auto& x : all) dup = dup || alpha_eq(x, r);
      if (!dup) all.push_back(r);
    }
  json j = header("readings", in);
  j["sentence"] = c.sentence;
  j["parses"] = trees.size();
  j["readings"] = json::array();
  std::ostringstream text;
  std::optional<Evaluator> ev;
  if (in.model) ev.emplace(*in.model);
  for (const auto& r : all) {
    json item = {{"wff", print(r)}};
    text << print(r);
    if (ev) {
      const auto n = ev->denote(r).size();
      item["senses"] = n;
      text << "  ; " << n << (n == 1 ? " sense" : " senses");
    }
    text << "\n";
    j["readings"].push_back(item);
  }
  j["count"] = all.size();
  text << all.size() << (all.size() == 1 ? " reading\n" : " readings\n");
  emit(c, j, text.str());
  return all.empty() ? kNoParse : kOk;
}

std::vector<Expr> read_wff_file(const std::string& path, const Signature& sig) {
  std::vector<Expr> out;
  std::istringstream lines(read_file(path));
  std::string line;
  while (std::getline(lines, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == ';') continue;
    out.push_back(parse_expr(line, Type::T(), sig));
  }
  return out;
}

const char* trace_kind(TraceStep::Kind k) {
  switch (k) {
    case TraceStep::Kind::Rule: return "rule";
    case TraceStep::Kind::Resolve: return "resolve";
    case TraceStep::Kind::Anchor: return "anchor";
  }
  return "?";
}

int cmd_extensions(const Config& c) {
  Inputs in = load_inputs(c);
  if (c.rules.empty()) throw SchemaError("extensions needs --rules");
  const std::string rules_text = read_file(c.rules);
  in.provenance["rules"] = {{"path", c.rules}, {"sha256", sha256(rules_text)}};
  const Signature& sig = in.grammar.signature;
  Theory t{rules_from_json_text(rules_text, sig), {}, in.model ? &*in.model : nullptr};
  if (!c.sentence.empty()) {
    const auto trees = in.grammar.parse(c.sentence);
    if (trees.empty()) {
      std::cerr << "no parse for \"" << c.sentence << "\"\n";
      return kNoParse;
    }
    for (const auto& tr : trees) t.uf.push_back(sentence_wff(tr));
  }
  if (!c.uf.empty()) {
    in.provenance["uf"] = {{"path", c.uf}, {"sha256", sha256(read_file(c.uf))}};
    for (auto& w : read_wff_file(c.uf, sig)) t.uf.push_back(w);
  }
  for (const auto& w : c.wffs) t.uf.push_back(parse_expr(w, Type::T(), sig));
  if (t.uf.empty()) throw SchemaError("extensions needs a sentence, --uf or --wff");

  EngineOptions opts{c.max_steps, c.strict ? AntiRandomPolicy::Reject : AntiRandomPolicy::Warn};
  const auto report = extensions(t, opts);

  json j = header("extensions", in);
  j["uf"] = json::array();
  for (const auto& w : t.uf) j["uf"].push_back(print(w));
  j["warnings"] = report.warnings;
  j["steps"] = report.steps;
  j["extensions"] = json::array();
  std::ostringstream text;
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (std::size_t i = 0; i < report.extensions.size(); ++i) {
    const auto& e = report.extensions[i];
    json x = {{"wffs", json::array()}, {"trace", json::array()}, {"cdi", e.cdi}};
    x["consistent"] = e.consistent ? json(*e.consistent) : json(nullptr);
    text << "extension " << i + 1;
    if (e.consistent) text << (*e.consistent ? " (consistent)" : " (INCONSISTENT)");
    text << "\n";
    for (const auto& w : e.wffs) {
      x["wffs"].push_back(print(w));
      text << "  " << print(w) << "\n";
    }
    for (const auto& s : e.trace) {
      x["trace"].push_back({{"kind", trace_kind(s.kind)}, {"label", s.label}, {"detail", s.detail}});
      text << "    " << trace_kind(s.kind) << " " << s.label << "  " << s.detail << "\n";
    }
    j["extensions"].push_back(x);
  }
  const auto n = report.extensions.size();
  j["perceived_ambiguity"] = n;
  text << n << (n == 1 ? " extension" : " extensions");
  if (n > 1) text << ": ambiguous, ask for clarification";
  if (n == 0) text << ": no interpretation";
  text << "\n";
  emit(c, j, text.str());
  return n == 1 ? kOk : n > 1 ? kAmbiguous : kNoExtension;
}

int cmd_check_rules(const Config& c) {
  Inputs in = load_inputs(c);
  if (c.rules.empty()) throw SchemaError("check-rules needs --rules");
  const std::string rules_text = read_file(c.rules);
  in.provenance["rules"] = {{"path", c.rules}, {"sha256", sha256(rules_text)}};
  const auto rules = rules_from_json_text(rules_text, in.grammar.signature);
  json j = header("check-rules", in);
  j["rules"] = json::array();
  std::ostringstream text;
  bool ok = true;
  for (const auto& r : rules) {
    const bool ar = in.model ? is_anti_random(r, *in.model) : r.context.has_value();
    ok = ok && ar;
    j["rules"].push_back({{"name", r.name}, {"anti_random", ar}, {"normal", r.normal()}});
    text << r.name << ": " << (ar ? "ok" : "trivial context") << (r.normal() ? ", normal" : "") << "\n";
  }
  j["ok"] = ok;
  emit(c, j, text.str());
  return ok ? kOk : kError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underspecified readings and default disambiguation"};
  app.set_version_flag("--version", AMBIGUA_VERSION);
  app.require_subcommand(1);
  Config c;
  app.add_option("--lexicon", c.lexicon, "Lexicon JSON (default: built-in)")->check(CLI::ExistingFile);
  app.add_option("--model", c.model, "Model JSON")->check(CLI::ExistingFile);
  app.add_option("--rules", c.rules, "Rules JSON")->check(CLI::ExistingFile);
  app.add_flag("--json", c.json, "Machine-readable output");
  app.add_option("--max-steps", c.max_steps, "Rule-application budget");
  app.add_flag("--strict-anti-random", c.strict, "Reject rules with a trivial context");
  app.add_flag("--denotational-dedup", c.dedup, "Merge readings with equal denotations");

  auto* parse = app.add_subcommand("parse", "Print logical-form trees");
  parse->add_option("sentence", c.sentence)->required();
  auto* rd = app.add_subcommand("readings", "List the readings of a sentence");
  rd->add_option("sentence", c.sentence)->required();
  auto* ex = app.add_subcommand("extensions", "Disambiguate with default rules");
  ex->add_option("sentence", c.sentence);
  ex->add_option("--uf", c.uf, "File with one wff per line")->check(CLI::ExistingFile);
  ex->add_option("--wff", c.wffs, "Extra wff (repeatable)");
  auto* cr = app.add_subcommand("check-rules", "Validate a rules file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }
  try {
    if (*parse) return cmd_parse(c);
    if (*rd) return cmd_readings(c);
    if (*ex) return cmd_extensions(c);
    if (*cr) return cmd_check_rules(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
