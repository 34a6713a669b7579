#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ambigua/type.h"

namespace ambigua {

enum class Category { S, NP, VP, Det, N, PN, IV, TV, DTV, PRO };

std::string_view category_name(Category c);
std::optional<Category> category_from_name(std::string_view name);
bool is_lexical(Category c);
// Type carried by a lexical category's translation.
Type lexical_type(Category c);

enum class Determiner { Every, A };

std::string_view determiner_constant(Determiner d);

// Variables are identified by a base name plus a freshness index; index 0
// prints as the bare name, index n > 0 as "name#n".
struct VarId {
  std::string name;
  int index = 0;

  std::string str() const;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

// Immutable typed term of the underspecified language. Constructors check
// types and throw TypeMismatch, so every Expr built through them is
// well-typed (pattern metavariables of type Any excepted).
class Expr {
 public:
  enum class Kind { Const, Var, MetaVar, Param, App, Lambda, Not, And, Quant, Eq, LF };

  static Expr Const(std::string name, Type type, bool underspecified = false);
  static Expr Var(std::string name, Type type, int index = 0);
  static Expr Var(const VarId& id, Type type) { return Var(id.name, std::move(type), id.index); }
  static Expr MetaVar(std::string name, Type type = Type::Any());
  static Expr Param(std::string name, std::optional<Expr> anchor = std::nullopt);
  static Expr App(const Expr& fun, const Expr& arg);
  static Expr Apply(const Expr& fun, std::span<const Expr> args);
  static Expr Apply(const Expr& fun, std::initializer_list<Expr> args);
  static Expr Lambda(const Expr& var, const Expr& body);
  static Expr Not(const Expr& e);
  static Expr And(const Expr& a, const Expr& b);
  static Expr Quant(Determiner det, const Expr& var, const Expr& restrictor, const Expr& scope);
  static Expr Eq(const Expr& a, const Expr& b);
  static Expr LF(Category cat, std::vector<Expr> children);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }
  const Type& type() const { return node_->type; }

  // Const, Var, MetaVar, Param.
  const std::string& name() const { return node_->name; }
  // Var only.
  int index() const { return node_->index; }
  VarId var_id() const { return {node_->name, node_->index}; }
  // Const only.
  bool underspecified() const { return node_->flag; }
  // Param only.
  bool anchored() const { return is(Kind::Param) && !node_->kids.empty(); }
  const Expr& anchor() const { return node_->kids.at(0); }

  const Expr& fun() const { return node_->kids.at(0); }
  const Expr& arg() const { return node_->kids.at(1); }
  // Lambda and Quant binder.
  const Expr& bound_var() const { return node_->kids.at(0); }
  const Expr& body() const { return node_->kids.at(1); }
  Determiner det() const { return node_->det; }
  const Expr& restrictor() const { return node_->kids.at(1); }
  const Expr& scope() const { return node_->kids.at(2); }
  const Expr& operand() const { return node_->kids.at(0); }
  const Expr& lhs() const { return node_->kids.at(0); }
  const Expr& rhs() const { return node_->kids.at(1); }
  Category category() const { return node_->cat; }

  // Immediate subterms in a fixed order (binder variable first for Lambda
  // and Quant, anchor for an anchored Param).
  std::span<const Expr> kids() const { return node_->kids; }
  // Same node kind and attributes with new subterms; re-checks types.
  Expr with_kids(std::vector<Expr> kids) const;

  bool same_node(const Expr& o) const { return node_ == o.node_; }

 private:
  struct Node {
    Kind kind;
    Type type;
    std::string name;
    int index = 0;
    bool flag = false;
    Determiner det = Determiner::Every;
    Category cat = Category::S;
    std::vector<Expr> kids;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node n);

  std::shared_ptr<const Node> node_;
};

// Exact structural identity, variable names included.
bool identical(const Expr& a, const Expr& b);

std::map<VarId, Type> free_vars(const Expr& e);
bool occurs_free(const VarId& v, const Expr& e);
// Every variable name occurring anywhere (free or bound).
void collect_var_ids(const Expr& e, std::set<VarId>& out);
std::set<std::string> metavar_names(const Expr& e);
bool contains_kind(const Expr& e, Expr::Kind k);

// A variable named `base` whose index exceeds every index of `base` in
// `avoid`. Deterministic: the same inputs always give the same name.
Expr fresh_var(const std::string& base, const Type& type, const std::set<VarId>& avoid);

// Constants every/a of type <<e,t>,<<e,t>,t>>.
Expr determiner_const(Determiner d);

}  // namespace ambigua
