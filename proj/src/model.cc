#include "ambigua/model.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ambigua/error.h"
#include "json.hpp"

namespace ambigua {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw SchemaError("model" + (where.empty() ? "" : " " + where) + ": " + msg);
}

std::string req_string(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(req_string(x, where));
  return out;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      bad(where, "unknown field '" + it.key() + "'");
  }
}

}  // namespace

Model Model::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("", "top level must be an object");
  only_keys(j, {"universe", "situations", "constants", "discourse"}, "");
  Model m;
  if (!j.contains("universe")) bad("", "missing 'universe'");
  m.universe = string_list(j["universe"], "universe");
  if (!j.contains("situations") || !j["situations"].is_array()) bad("", "missing 'situations' array");
  for (const auto& s : j["situations"]) {
    if (!s.is_object()) bad("situations", "each situation must be an object");
    only_keys(s, {"id", "constituents", "facts"}, "situation");
    Situation sit;
    if (!s.contains("id")) bad("situation", "missing 'id'");
    sit.id = req_string(s["id"], "situation id");
    const std::string where = "situation " + sit.id;
    if (s.contains("constituents"))
      for (auto& c : string_list(s["constituents"], where + " constituents")) sit.constituents.insert(c);
    if (s.contains("facts")) {
      if (!s["facts"].is_object()) bad(where, "'facts' must be an object");
      for (auto it = s["facts"].begin(); it != s["facts"].end(); ++it) {
        if (!it.value().is_array()) bad(where, "facts of " + it.key() + " must be an array of tuples");
        auto& rows = sit.facts[it.key()];
        for (const auto& t : it.value()) rows.insert(string_list(t, where + " fact " + it.key()));
      }
    }
    m.situations.push_back(std::move(sit));
  }
  if (j.contains("constants")) {
    if (!j["constants"].is_object()) bad("", "'constants' must be an object");
    for (auto it = j["constants"].begin(); it != j["constants"].end(); ++it) {
      const json& c = it.value();
      const std::string where = "constant " + it.key();
      if (!c.is_object()) bad(where, "must be an object");
      only_keys(c, {"senses", "entity", "arity"}, where);
      ConstDecl d;
      if (c.contains("arity")) {
        if (!c["arity"].is_number_integer() || c["arity"].get<int>() < 0) bad(where, "bad arity");
        d.arity = c["arity"].get<int>();
      }
      if (c.contains("senses") && c.contains("entity")) bad(where, "both 'senses' and 'entity'");
      if (c.contains("senses")) {
        d.kind = ConstDecl::Kind::Ambiguous;
        d.senses = string_list(c["senses"], where + " senses");
      } else if (c.contains("entity")) {
        d.kind = ConstDecl::Kind::Entity;
        d.entity = req_string(c["entity"], where + " entity");
      } else if (d.arity < 0) {
        bad(where, "needs 'senses', 'entity' or 'arity'");
      }
      m.constants[it.key()] = std::move(d);
    }
  }
  if (j.contains("discourse")) {
    const json& d = j["discourse"];
    if (!d.is_object()) bad("discourse", "must be an object");
    only_keys(d, {"situations"}, "discourse");
    if (d.contains("situations")) {
      for (const auto& id : string_list(d["situations"], "discourse situations")) {
        auto pos = std::find_if(m.situations.begin(), m.situations.end(),
                                [&](const Situation& s) { return s.id == id; });
        if (pos == m.situations.end()) bad("discourse", "unknown situation " + id);
        m.discourse.push_back(static_cast<std::size_t>(pos - m.situations.begin()));
      }
      if (m.discourse.empty()) bad("discourse", "needs at least one situation");
    }
  }
  m.validate();
  return m;
}

Model Model::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void Model::validate() {
  if (universe.empty()) bad("", "universe is empty");
  if (situations.empty()) bad("", "no situations");
  std::set<std::string> u(universe.begin(), universe.end());
  if (u.size() != universe.size()) bad("universe", "duplicate entity");
  std::set<std::string> ids;
  for (const auto& s : situations) {
    if (!ids.insert(s.id).second) bad("", "duplicate situation id " + s.id);
    for (const auto& c : s.constituents)
      if (!u.count(c)) bad("situation " + s.id, "constituent " + c + " is not in the universe");
    for (const auto& [rel, rows] : s.facts) {
      for (const auto& t : rows) {
        for (const auto& a : t)
          if (!u.count(a)) bad("situation " + s.id, "fact " + rel + " mentions unknown entity " + a);
        ConstDecl& d = constants[rel];
        if (d.kind != ConstDecl::Kind::Relation) bad("constant " + rel, "has facts but is not a relation");
        if (d.arity < 0) d.arity = static_cast<int>(t.size());
        if (d.arity != static_cast<int>(t.size()))
          bad("situation " + s.id, "fact " + rel + " has inconsistent arity");
      }
    }
  }
  for (auto& [name, d] : constants) {
    if (d.kind == ConstDecl::Kind::Entity && !u.count(d.entity))
      bad("constant " + name, "denotes unknown entity " + d.entity);
    if (d.kind != ConstDecl::Kind::Ambiguous) continue;
    if (d.senses.size() < 2) bad("constant " + name, "an underspecified constant needs at least two senses");
    int arity = d.arity;
    for (const auto& s : d.senses) {
      auto it = constants.find(s);
      if (it == constants.end() || it->second.arity < 0) continue;
      if (it->second.kind != ConstDecl::Kind::Relation) bad("constant " + name, "sense " + s + " is not a relation");
      if (arity >= 0 && arity != it->second.arity) bad("constant " + name, "senses differ in arity");
      arity = it->second.arity;
    }
    if (arity < 0) bad("constant " + name, "cannot determine arity; add 'arity'");
    d.arity = arity;
    for (const auto& s : d.senses) {
      ConstDecl& sd = constants[s];
      if (sd.kind != ConstDecl::Kind::Relation) bad("constant " + name, "sense " + s + " is not a relation");
      if (sd.arity < 0) sd.arity = arity;
    }
  }
  for (const auto& [name, d] : constants) {
    if (d.kind == ConstDecl::Kind::Ambiguous)
      for (const auto& s : d.senses)
        if (constants.at(s).kind == ConstDecl::Kind::Ambiguous)
          bad("constant " + name, "sense " + s + " is itself underspecified");
  }
  if (discourse.empty())
    for (std::size_t i = 0; i < situations.size(); ++i) discourse.push_back(i);
}

int Model::entity_index(const std::string& id) const {
  auto it = std::find(universe.begin(), universe.end(), id);
  return it == universe.end() ? -1 : static_cast<int>(it - universe.begin());
}

std::size_t Model::situation_index(const std::string& id) const {
  for (std::size_t i = 0; i < situations.size(); ++i)
    if (situations[i].id == id) return i;
  throw SchemaError("unknown situation " + id);
}

std::vector<std::string> Model::discourse_constituents() const {
  std::set<std::string> out;
  for (auto i : discourse) out.insert(situations[i].constituents.begin(), situations[i].constituents.end());
  return {out.begin(), out.end()};
}

Signature Model::signature() const {
  Signature s = Signature::builtin();
  for (const auto& e : universe) s.declare(e, Type::E());
  for (const auto& [name, d] : constants) {
    switch (d.kind) {
      case ConstDecl::Kind::Entity: s.declare(name, Type::E()); break;
      case ConstDecl::Kind::Relation: s.declare(name, Type::Relation(d.arity)); break;
      case ConstDecl::Kind::Ambiguous: s.declare(name, Type::Relation(d.arity), true); break;
    }
  }
  return s;
}

const ConstDecl* Model::find(const std::string& name) const {
  auto it = constants.find(name);
  return it == constants.end() ? nullptr : &it->second;
}

}  // namespace ambigua
