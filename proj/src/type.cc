#include "ambigua/type.h"

#include <cassert>

namespace ambigua {

Type Type::E() {
  static const Type t(std::make_shared<const Node>(Node{Kind::E, nullptr, nullptr}));
  return t;
}

Type Type::T() {
  static const Type t(std::make_shared<const Node>(Node{Kind::T, nullptr, nullptr}));
  return t;
}

Type Type::Any() {
  static const Type t(std::make_shared<const Node>(Node{Kind::Any, nullptr, nullptr}));
  return t;
}

Type Type::Fn(const Type& arg, const Type& res) {
  return Type(std::make_shared<const Node>(
      Node{Kind::Fn, std::make_shared<const Type>(arg), std::make_shared<const Type>(res)}));
}

Type Type::Pred() { return Fn(E(), T()); }
Type Type::Quantifier() { return Fn(Pred(), T()); }
Type Type::Modifier() { return Fn(Pred(), Pred()); }
Type Type::Determiner() { return Fn(Pred(), Quantifier()); }

Type Type::Relation(int arity) {
  Type t = T();
  for (int i = 0; i < arity; ++i) t = Fn(E(), t);
  return t;
}

const Type& Type::arg() const {
  assert(is_fn());
  return *node_->arg;
}

const Type& Type::res() const {
  assert(is_fn());
  return *node_->res;
}

int Type::relation_arity() const {
  int n = 0;
  const Type* cur = this;
  while (cur->is_fn()) {
    if (!cur->arg().is_e()) return -1;
    ++n;
    cur = &cur->res();
  }
  return cur->is_t() ? n : -1;
}

bool Type::contains_any() const {
  if (is_any()) return true;
  if (is_fn()) return arg().contains_any() || res().contains_any();
  return false;
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() != Type::Kind::Fn) return true;
  return a.arg() == b.arg() && a.res() == b.res();
}

bool operator<(const Type& a, const Type& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.kind() != Type::Kind::Fn) return false;
  if (a.arg() != b.arg()) return a.arg() < b.arg();
  return a.res() < b.res();
}

bool Type::compatible(const Type& other) const {
  if (is_any() || other.is_any()) return true;
  if (kind() != other.kind()) return false;
  if (!is_fn()) return true;
  return arg().compatible(other.arg()) && res().compatible(other.res());
}

std::string Type::str() const {
  switch (kind()) {
    case Kind::E: return "e";
    case Kind::T: return "t";
    case Kind::Any: return "?";
    case Kind::Fn: break;
  }
  return "(-> " + arg().str() + " " + res().str() + ")";
}

}  // namespace ambigua
