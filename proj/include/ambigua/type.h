#pragma once

#include <memory>
#include <string>

namespace ambigua {

// Semantic types: e, t and <a,b>. `Any` is only produced for pattern
// metavariables whose type cannot be inferred; it never appears in a
// well-typed ground expression.
class Type {
 public:
  enum class Kind { E, T, Fn, Any };

  static Type E();
  static Type T();
  static Type Any();
  static Type Fn(const Type& arg, const Type& res);

  // <e,t>, <<e,t>,t>, <<e,t>,<e,t>>, and e^n -> t.
  static Type Pred();
  static Type Quantifier();
  static Type Modifier();
  static Type Relation(int arity);
  static Type Determiner();

  Type() : Type(E()) {}

  Kind kind() const { return node_->kind; }
  bool is_e() const { return kind() == Kind::E; }
  bool is_t() const { return kind() == Kind::T; }
  bool is_fn() const { return kind() == Kind::Fn; }
  bool is_any() const { return kind() == Kind::Any; }

  // Precondition: is_fn().
  const Type& arg() const;
  const Type& res() const;

  // n if this is e -> ... -> e -> t with n arguments (n >= 0), else -1.
  int relation_arity() const;
  bool contains_any() const;

  // Structural equality; Any matches nothing but Any.
  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
  friend bool operator<(const Type& a, const Type& b);

  // Equal, or one side is Any.
  bool compatible(const Type& other) const;

  // e, t, (-> e t)
  std::string str() const;

 private:
  struct Node {
    Kind kind;
    std::shared_ptr<const Type> arg, res;
  };
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace ambigua
