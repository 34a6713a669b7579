#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ambigua/syntax.h"

namespace ambigua {

using Tuple = std::vector<std::string>;

struct Situation {
  std::string id;
  std::set<std::string> constituents;
  // Relation name -> tuples, arguments listed in application order:
  // saw(f)(d) holds iff ["f","d"] is listed under "saw".
  std::map<std::string, std::set<Tuple>> facts;
};

struct ConstDecl {
  enum class Kind { Relation, Entity, Ambiguous };
  Kind kind = Kind::Relation;
  int arity = -1;                   // Relation, Ambiguous
  std::string entity;               // Entity
  std::vector<std::string> senses;  // Ambiguous: names of the precisifications
};

// A finite model: universe, situations with constituents and facts, and the
// interpretation of constants. The discourse situation is a designated subset
// of the situations.
class Model {
 public:
  std::vector<std::string> universe;
  std::vector<Situation> situations;
  std::map<std::string, ConstDecl> constants;
  std::vector<std::size_t> discourse;  // indices into situations

  static Model from_json_text(const std::string& text);
  static Model load(const std::string& path);

  // Fills in relation declarations from facts, checks references, sets the
  // default discourse to all situations. Throws SchemaError.
  void validate();

  int entity_index(const std::string& id) const;
  std::size_t situation_index(const std::string& id) const;
  // Constituents of the discourse situations, sorted and unique.
  std::vector<std::string> discourse_constituents() const;
  // Types and underspecification flags of every constant the model interprets.
  Signature signature() const;
  // Known relation with this name (declared or appearing in facts).
  const ConstDecl* find(const std::string& name) const;
};

}  // namespace ambigua
