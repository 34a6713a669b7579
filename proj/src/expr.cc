#include "ambigua/expr.h"

#include <algorithm>

#include "ambigua/error.h"

namespace ambigua {

namespace {

constexpr std::pair<Category, std::string_view> kCategoryNames[] = {
    {Category::S, "S"},   {Category::NP, "NP"}, {Category::VP, "VP"},   {Category::Det, "Det"},
    {Category::N, "N"},   {Category::PN, "PN"}, {Category::IV, "IV"},   {Category::TV, "TV"},
    {Category::DTV, "DTV"}, {Category::PRO, "PRO"},
};

bool is_lf(const Expr& e, Category c) { return e.is(Expr::Kind::LF) && e.category() == c; }
bool is_meta(const Expr& e) { return e.is(Expr::Kind::MetaVar); }

// One slot of an LF signature: metavariables fill any slot.
bool fits(const Expr& child, Category c) { return is_meta(child) || is_lf(child, c); }

bool entity_term(const Expr& e) {
  return !e.is(Expr::Kind::LF) && e.type().compatible(Type::E());
}

std::string shape(Category cat, const std::vector<Expr>& kids) {
  std::string s = "[" + std::string(category_name(cat));
  for (const auto& k : kids) {
    s += " ";
    s += k.is(Expr::Kind::LF) ? std::string(category_name(k.category())) : k.type().str();
  }
  return s + "]";
}

Type lf_type(Category cat, const std::vector<Expr>& kids) {
  auto bad = [&]() -> TypeMismatch {
    return TypeMismatch("logical form " + shape(cat, kids) + " does not match the grammar");
  };
  if (is_lexical(cat)) {
    if (kids.size() != 1 || kids[0].is(Expr::Kind::LF)) throw bad();
    const Type want = lexical_type(cat);
    if (!kids[0].type().compatible(want)) {
      throw TypeMismatch(std::string(category_name(cat)) + " translation has type " +
                         kids[0].type().str() + ", expected " + want.str());
    }
    return want;
  }
  switch (cat) {
    case Category::S:
      if (kids.size() == 2 && (fits(kids[0], Category::NP)) && fits(kids[1], Category::VP))
        return Type::T();
      throw bad();
    case Category::NP:
      if (kids.size() == 2 && fits(kids[0], Category::Det) && fits(kids[1], Category::N))
        return Type::Quantifier();
      if (kids.size() == 1) {
        if (is_lf(kids[0], Category::PN) || is_lf(kids[0], Category::PRO) || entity_term(kids[0]))
          return Type::E();
        if (is_meta(kids[0])) return Type::Any();
      }
      throw bad();
    case Category::VP:
      if (kids.size() == 1 && fits(kids[0], Category::IV)) return Type::Pred();
      if (kids.size() == 2 && fits(kids[0], Category::TV) && fits(kids[1], Category::NP))
        return Type::Pred();
      if (kids.size() == 3 && fits(kids[0], Category::DTV) && fits(kids[1], Category::NP) &&
          fits(kids[2], Category::NP))
        return Type::Pred();
      throw bad();
    default:
      throw bad();
  }
}

}  // namespace

std::string_view category_name(Category c) {
  for (const auto& [cat, name] : kCategoryNames)
    if (cat == c) return name;
  return "?";
}

std::optional<Category> category_from_name(std::string_view name) {
  for (const auto& [cat, n] : kCategoryNames)
    if (n == name) return cat;
  return std::nullopt;
}

bool is_lexical(Category c) {
  return c != Category::S && c != Category::NP && c != Category::VP;
}

Type lexical_type(Category c) {
  switch (c) {
    case Category::Det: return Type::Determiner();
    case Category::N:
    case Category::IV: return Type::Pred();
    case Category::TV: return Type::Relation(2);
    case Category::DTV: return Type::Relation(3);
    case Category::PN:
    case Category::PRO: return Type::E();
    default: break;
  }
  throw WrongCategory(std::string(category_name(c)) + " is not a lexical category");
}

std::string_view determiner_constant(Determiner d) { return d == Determiner::Every ? "every" : "a"; }

std::string VarId::str() const {
  return index == 0 ? name : name + "#" + std::to_string(index);
}

Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr Expr::Const(std::string name, Type type, bool underspecified) {
  Node n{Kind::Const, std::move(type), std::move(name)};
  n.flag = underspecified;
  return make(std::move(n));
}

Expr Expr::Var(std::string name, Type type, int index) {
  Node n{Kind::Var, std::move(type), std::move(name)};
  n.index = index;
  return make(std::move(n));
}

Expr Expr::MetaVar(std::string name, Type type) {
  return make(Node{Kind::MetaVar, std::move(type), std::move(name)});
}

Expr Expr::Param(std::string name, std::optional<Expr> anchor) {
  Node n{Kind::Param, Type::E(), std::move(name)};
  if (anchor) {
    if (!anchor->type().compatible(Type::E()))
      throw TypeMismatch("parameter anchor must have type e, got " + anchor->type().str());
    n.kids.push_back(*anchor);
  }
  return make(std::move(n));
}

Expr Expr::App(const Expr& fun, const Expr& arg) {
  Type res = Type::Any();
  if (fun.type().is_fn()) {
    if (!fun.type().arg().compatible(arg.type())) {
      throw TypeMismatch("cannot apply function of type " + fun.type().str() +
                         " to argument of type " + arg.type().str());
    }
    res = fun.type().res();
  } else if (!fun.type().is_any()) {
    throw TypeMismatch("cannot apply a term of type " + fun.type().str());
  }
  return make(Node{Kind::App, res, {}, 0, false, Determiner::Every, Category::S, {fun, arg}});
}

Expr Expr::Apply(const Expr& fun, std::span<const Expr> args) {
  Expr cur = fun;
  for (const auto& a : args) cur = App(cur, a);
  return cur;
}

Expr Expr::Apply(const Expr& fun, std::initializer_list<Expr> args) {
  return Apply(fun, std::span<const Expr>(args.begin(), args.size()));
}

Expr Expr::Lambda(const Expr& var, const Expr& body) {
  if (!var.is(Kind::Var)) throw TypeMismatch("lambda binder must be a variable");
  return make(Node{Kind::Lambda, Type::Fn(var.type(), body.type()), {}, 0, false,
                   Determiner::Every, Category::S, {var, body}});
}

Expr Expr::Not(const Expr& e) {
  if (!e.type().compatible(Type::T())) throw TypeMismatch("negation of a term of type " + e.type().str());
  return make(Node{Kind::Not, Type::T(), {}, 0, false, Determiner::Every, Category::S, {e}});
}

Expr Expr::And(const Expr& a, const Expr& b) {
  if (!a.type().compatible(Type::T()) || !b.type().compatible(Type::T()))
    throw TypeMismatch("conjunction of " + a.type().str() + " and " + b.type().str());
  return make(Node{Kind::And, Type::T(), {}, 0, false, Determiner::Every, Category::S, {a, b}});
}

Expr Expr::Quant(Determiner det, const Expr& var, const Expr& restrictor, const Expr& scope) {
  if (!var.is(Kind::Var) || !var.type().is_e())
    throw TypeMismatch("quantified variable must be a variable of type e");
  if (!restrictor.type().compatible(Type::T()) || !scope.type().compatible(Type::T()))
    throw TypeMismatch("quantifier restrictor and scope must have type t");
  return make(Node{Kind::Quant, Type::T(), {}, 0, false, det, Category::S, {var, restrictor, scope}});
}

Expr Expr::Eq(const Expr& a, const Expr& b) {
  if (!a.type().compatible(b.type()))
    throw TypeMismatch("equality between " + a.type().str() + " and " + b.type().str());
  return make(Node{Kind::Eq, Type::T(), {}, 0, false, Determiner::Every, Category::S, {a, b}});
}

Expr Expr::LF(Category cat, std::vector<Expr> children) {
  Type t = lf_type(cat, children);
  return make(Node{Kind::LF, std::move(t), {}, 0, false, Determiner::Every, cat, std::move(children)});
}

Expr Expr::with_kids(std::vector<Expr> kids) const {
  switch (kind()) {
    case Kind::Const:
    case Kind::Var:
    case Kind::MetaVar: return *this;
    case Kind::Param:
      return Param(name(), kids.empty() ? std::nullopt : std::optional<Expr>(kids[0]));
    case Kind::App: return App(kids.at(0), kids.at(1));
    case Kind::Lambda: return Lambda(kids.at(0), kids.at(1));
    case Kind::Not: return Not(kids.at(0));
    case Kind::And: return And(kids.at(0), kids.at(1));
    case Kind::Quant: return Quant(det(), kids.at(0), kids.at(1), kids.at(2));
    case Kind::Eq: return Eq(kids.at(0), kids.at(1));
    case Kind::LF: return LF(category(), std::move(kids));
  }
  return *this;
}

bool identical(const Expr& a, const Expr& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind() || a.type() != b.type()) return false;
  switch (a.kind()) {
    case Expr::Kind::Const:
      return a.name() == b.name() && a.underspecified() == b.underspecified();
    case Expr::Kind::Var: return a.var_id() == b.var_id();
    case Expr::Kind::MetaVar: return a.name() == b.name();
    case Expr::Kind::Param:
      if (a.name() != b.name()) return false;
      break;
    case Expr::Kind::Quant:
      if (a.det() != b.det()) return false;
      break;
    case Expr::Kind::LF:
      if (a.category() != b.category()) return false;
      break;
    default: break;
  }
  if (a.kids().size() != b.kids().size()) return false;
  for (std::size_t i = 0; i < a.kids().size(); ++i)
    if (!identical(a.kids()[i], b.kids()[i])) return false;
  return true;
}

namespace {

void free_vars_rec(const Expr& e, std::set<VarId>& bound, std::map<VarId, Type>& out) {
  switch (e.kind()) {
    case Expr::Kind::Var:
      if (!bound.count(e.var_id())) out.emplace(e.var_id(), e.type());
      return;
    case Expr::Kind::Lambda:
    case Expr::Kind::Quant: {
      const VarId v = e.bound_var().var_id();
      const bool fresh = bound.insert(v).second;
      for (std::size_t i = 1; i < e.kids().size(); ++i) free_vars_rec(e.kids()[i], bound, out);
      if (fresh) bound.erase(v);
      return;
    }
    default:
      for (const auto& k : e.kids()) free_vars_rec(k, bound, out);
  }
}

}  // namespace

std::map<VarId, Type> free_vars(const Expr& e) {
  std::set<VarId> bound;
  std::map<VarId, Type> out;
  free_vars_rec(e, bound, out);
  return out;
}

bool occurs_free(const VarId& v, const Expr& e) { return free_vars(e).count(v) > 0; }

void collect_var_ids(const Expr& e, std::set<VarId>& out) {
  if (e.is(Expr::Kind::Var)) out.insert(e.var_id());
  for (const auto& k : e.kids()) collect_var_ids(k, out);
}

namespace {
void metavars_rec(const Expr& e, std::set<std::string>& out) {
  if (e.is(Expr::Kind::MetaVar)) out.insert(e.name());
  for (const auto& k : e.kids()) metavars_rec(k, out);
}
}  // namespace

std::set<std::string> metavar_names(const Expr& e) {
  std::set<std::string> out;
  metavars_rec(e, out);
  return out;
}

bool contains_kind(const Expr& e, Expr::Kind k) {
  if (e.is(k)) return true;
  return std::any_of(e.kids().begin(), e.kids().end(),
                     [k](const Expr& c) { return contains_kind(c, k); });
}

Expr fresh_var(const std::string& base, const Type& type, const std::set<VarId>& avoid) {
  int idx = -1;
  for (auto it = avoid.lower_bound(VarId{base, 0}); it != avoid.end() && it->name == base; ++it)
    idx = std::max(idx, it->index);
  return Expr::Var(base, type, idx + 1);
}

Expr determiner_const(Determiner d) {
  return Expr::Const(std::string(determiner_constant(d)), Type::Determiner());
}

}  // namespace ambigua
