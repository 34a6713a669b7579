#include "ambigua/syntax.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <vector>

#include "ambigua/error.h"

namespace ambigua {

// ---- signature --------------------------------------------------------------

Signature Signature::builtin() {
  Signature s;
  s.declare("every", Type::Determiner());
  s.declare("a", Type::Determiner());
  return s;
}

Signature Signature::collect(const Expr& e) {
  Signature s = builtin();
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (x.is(Expr::Kind::Const)) s.declare(x.name(), x.type(), x.underspecified());
    for (const auto& k : x.kids()) walk(k);
  };
  walk(e);
  return s;
}

void Signature::declare(const std::string& name, const Type& type, bool underspecified) {
  entries_[name] = ConstInfo{type, underspecified};
}

void Signature::mark_underspecified(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw SchemaError("cannot flag undeclared constant " + name);
  it->second.underspecified = true;
}

void Signature::merge(const Signature& other) {
  for (const auto& [n, info] : other.entries_) {
    auto it = entries_.find(n);
    if (it == entries_.end()) {
      entries_.emplace(n, info);
    } else {
      if (it->second.type != info.type)
        throw TypeMismatch("constant " + n + " declared as " + it->second.type.str() + " and " +
                           info.type.str());
      it->second.underspecified = it->second.underspecified || info.underspecified;
    }
  }
}

const ConstInfo* Signature::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

// ---- s-expressions ----------------------------------------------------------

namespace {

struct Sx {
  bool atom = false;
  std::string text;
  std::vector<Sx> items;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Sx read_one() {
    Sx x = read();
    skip();
    if (i_ < s_.size()) fail("trailing input");
    return x;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg + " at offset " + std::to_string(i_));
  }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  Sx read() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    if (s_[i_] == ')') fail("unexpected ')'");
    Sx x;
    if (s_[i_] == '(') {
      ++i_;
      for (;;) {
        skip();
        if (i_ >= s_.size()) fail("missing ')'");
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        x.items.push_back(read());
      }
      return x;
    }
    x.atom = true;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
           s_[i_] != ')' && s_[i_] != ';')
      x.text += s_[i_++];
    return x;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

std::string show(const Sx& x) {
  if (x.atom) return x.text;
  std::string s = "(";
  for (std::size_t i = 0; i < x.items.size(); ++i) s += (i ? " " : "") + show(x.items[i]);
  return s + ")";
}

Type sx_type(const Sx& x) {
  if (x.atom) {
    if (x.text == "e") return Type::E();
    if (x.text == "t") return Type::T();
    throw SyntaxError("bad type " + x.text);
  }
  if (x.items.size() < 3 || !x.items[0].atom || x.items[0].text != "->")
    throw SyntaxError("bad type " + show(x));
  Type t = sx_type(x.items.back());
  for (std::size_t i = x.items.size() - 1; i-- > 1;) t = Type::Fn(sx_type(x.items[i]), t);
  return t;
}

// ---- type inference ---------------------------------------------------------

struct TyNode;
using Ty = std::shared_ptr<TyNode>;
struct TyNode {
  enum K { E, T, Fn, Var } k;
  Ty a, b, link;
};

Ty mk(TyNode::K k, Ty a = nullptr, Ty b = nullptr) {
  return std::make_shared<TyNode>(TyNode{k, std::move(a), std::move(b), nullptr});
}
Ty fresh() { return mk(TyNode::Var); }

Ty find(Ty t) {
  while (t->k == TyNode::Var && t->link) t = t->link;
  return t;
}

Ty from_type(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::E: return mk(TyNode::E);
    case Type::Kind::T: return mk(TyNode::T);
    case Type::Kind::Any: return fresh();
    case Type::Kind::Fn: return mk(TyNode::Fn, from_type(t.arg()), from_type(t.res()));
  }
  return fresh();
}

Type resolve(const Ty& t0, const Type& dflt) {
  Ty t = find(t0);
  switch (t->k) {
    case TyNode::E: return Type::E();
    case TyNode::T: return Type::T();
    case TyNode::Var: return dflt;
    case TyNode::Fn: return Type::Fn(resolve(t->a, dflt), resolve(t->b, dflt));
  }
  return dflt;
}

bool occurs(const Ty& v, const Ty& t0) {
  Ty t = find(t0);
  if (t == v) return true;
  return t->k == TyNode::Fn && (occurs(v, t->a) || occurs(v, t->b));
}

void unify(const Ty& x0, const Ty& y0, const std::string& where) {
  Ty x = find(x0), y = find(y0);
  if (x == y) return;
  if (x->k == TyNode::Var || y->k == TyNode::Var) {
    if (x->k != TyNode::Var) std::swap(x, y);
    if (occurs(x, y)) throw TypeMismatch("infinite type in " + where);
    x->link = y;
    return;
  }
  if (x->k != y->k)
    throw TypeMismatch("in " + where + ": cannot unify " + resolve(x, Type::Any()).str() + " with " +
                       resolve(y, Type::Any()).str());
  if (x->k == TyNode::Fn) {
    unify(x->a, y->a, where);
    unify(x->b, y->b, where);
  }
}

const std::set<std::string> kReserved = {"app", "lam",   "forall", "exists", "not",
                                         "and", "=",     "param",  "var",    "lf"};

VarId var_id_of(const std::string& atom) {
  auto hash = atom.rfind('#');
  if (hash == std::string::npos || hash == 0) return {atom, 0};
  const std::string idx = atom.substr(hash + 1);
  if (idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit)) return {atom, 0};
  return {atom.substr(0, hash), std::stoi(idx)};
}

// Pre-expression: structure plus a type term, materialized after inference.
struct P {
  Expr::Kind kind;
  std::string name;
  int index = 0;
  Ty ty;
  std::vector<P> kids;
  Determiner det = Determiner::Every;
  Category cat = Category::S;
};

class Reader {
 public:
  Reader(const Signature& sig, Signature* learned) : sig_(sig), learned_(learned) {}

  Expr run(const Sx& x, const Type* expected) {
    P p = build(x);
    if (expected) unify(p.ty, from_type(*expected), "expression expected to have type " + expected->str());
    Expr e = materialize(p);
    if (learned_) {
      for (const auto& [n, t] : consts_) learned_->declare(n, resolve(t, Type::E()));
    }
    return e;
  }

 private:
  P build(const Sx& x) {
    if (x.atom) return atom(x.text);
    if (x.items.empty()) throw SyntaxError("empty list");
    const Sx& head = x.items[0];
    const std::size_t n = x.items.size() - 1;
    auto arity = [&](bool ok) {
      if (!ok) throw SyntaxError("malformed form " + show(x));
    };
    if (head.atom && kReserved.count(head.text) && !bound(head.text)) {
      const std::string& h = head.text;
      if (h == "app") {
        arity(n >= 2);
        return apply(build(x.items[1]), x, 2);
      }
      if (h == "lam") {
        arity((n == 2 || n == 3) && x.items[1].atom);
        P v = binder(x.items[1].text);
        if (n == 3) unify(v.ty, from_type(sx_type(x.items[2])), show(x));
        scope_.emplace_back(VarId{v.name, v.index}, v.ty);
        P body = build(x.items[n]);
        scope_.pop_back();
        P out{Expr::Kind::Lambda};
        out.ty = mk(TyNode::Fn, v.ty, body.ty);
        out.kids = {std::move(v), std::move(body)};
        return out;
      }
      if (h == "forall" || h == "exists") {
        arity(n == 3 && x.items[1].atom);
        P v = binder(x.items[1].text);
        unify(v.ty, mk(TyNode::E), show(x));
        scope_.emplace_back(VarId{v.name, v.index}, v.ty);
        P r = build(x.items[2]);
        P s = build(x.items[3]);
        scope_.pop_back();
        unify(r.ty, mk(TyNode::T), show(x));
        unify(s.ty, mk(TyNode::T), show(x));
        P out{Expr::Kind::Quant};
        out.det = h == "forall" ? Determiner::Every : Determiner::A;
        out.ty = mk(TyNode::T);
        out.kids = {std::move(v), std::move(r), std::move(s)};
        return out;
      }
      if (h == "not") {
        arity(n == 1);
        P a = build(x.items[1]);
        unify(a.ty, mk(TyNode::T), show(x));
        P out{Expr::Kind::Not};
        out.ty = mk(TyNode::T);
        out.kids = {std::move(a)};
        return out;
      }
      if (h == "and") {
        arity(n >= 2);
        std::vector<P> parts;
        for (std::size_t i = 1; i <= n; ++i) {
          parts.push_back(build(x.items[i]));
          unify(parts.back().ty, mk(TyNode::T), show(x));
        }
        P acc = std::move(parts.back());
        for (std::size_t i = parts.size() - 1; i-- > 0;) {
          P out{Expr::Kind::And};
          out.ty = mk(TyNode::T);
          out.kids = {std::move(parts[i]), std::move(acc)};
          acc = std::move(out);
        }
        return acc;
      }
      if (h == "=") {
        arity(n == 2);
        P a = build(x.items[1]);
        P b = build(x.items[2]);
        unify(a.ty, b.ty, show(x));
        P out{Expr::Kind::Eq};
        out.ty = mk(TyNode::T);
        out.kids = {std::move(a), std::move(b)};
        return out;
      }
      if (h == "param") {
        arity((n == 1 || n == 2) && x.items[1].atom);
        P out{Expr::Kind::Param, x.items[1].text};
        out.ty = mk(TyNode::E);
        if (n == 2) {
          P a = build(x.items[2]);
          unify(a.ty, mk(TyNode::E), show(x));
          out.kids.push_back(std::move(a));
        }
        return out;
      }
      if (h == "var") {
        arity((n == 1 || n == 2) && x.items[1].atom);
        VarId id = var_id_of(x.items[1].text);
        auto [it, _] = free_.try_emplace(id, fresh());
        if (n == 2) unify(it->second, from_type(sx_type(x.items[2])), show(x));
        P out{Expr::Kind::Var, id.name, id.index, it->second};
        return out;
      }
      if (h == "lf") {
        arity(n >= 1 && x.items[1].atom);
        auto cat = category_from_name(x.items[1].text);
        if (!cat) throw SyntaxError("unknown category " + x.items[1].text);
        P out{Expr::Kind::LF};
        out.cat = *cat;
        for (std::size_t i = 2; i <= n; ++i) out.kids.push_back(build(x.items[i]));
        out.ty = lf_constraints(out, show(x));
        return out;
      }
    }
    return apply(build(head), x, 1);
  }

  P apply(P f, const Sx& x, std::size_t from) {
    for (std::size_t i = from; i < x.items.size(); ++i) {
      P a = build(x.items[i]);
      Ty r = fresh();
      unify(f.ty, mk(TyNode::Fn, a.ty, r), show(x));
      P out{Expr::Kind::App};
      out.ty = r;
      out.kids = {std::move(f), std::move(a)};
      f = std::move(out);
    }
    return f;
  }

  Ty lf_constraints(const P& p, const std::string& where) {
    auto is_meta = [](const P& k) { return k.kind == Expr::Kind::MetaVar; };
    if (is_lexical(p.cat)) {
      if (p.kids.size() != 1) throw TypeMismatch("malformed logical form " + where);
      Ty t = from_type(lexical_type(p.cat));
      unify(p.kids[0].ty, t, where);
      return t;
    }
    switch (p.cat) {
      case Category::S: return mk(TyNode::T);
      case Category::VP: return from_type(Type::Pred());
      case Category::NP:
        if (p.kids.size() == 2) return from_type(Type::Quantifier());
        if (p.kids.size() == 1 && is_meta(p.kids[0])) return fresh();
        if (p.kids.size() == 1 && p.kids[0].kind != Expr::Kind::LF)
          unify(p.kids[0].ty, mk(TyNode::E), where);
        return mk(TyNode::E);
      default: break;
    }
    return fresh();
  }

  bool bound(const std::string& atom) const {
    VarId id = var_id_of(atom);
    for (const auto& [v, _] : scope_)
      if (v == id) return true;
    return false;
  }

  P binder(const std::string& atom) {
    if (atom.empty() || atom[0] == '?') throw SyntaxError("bad binder " + atom);
    VarId id = var_id_of(atom);
    return P{Expr::Kind::Var, id.name, id.index, fresh()};
  }

  P atom(const std::string& text) {
    if (text[0] == '?') {
      if (text.size() == 1) throw SyntaxError("bare '?'");
      std::string name = text.substr(1);
      auto [it, _] = metas_.try_emplace(name, fresh());
      return P{Expr::Kind::MetaVar, name, 0, it->second};
    }
    VarId id = var_id_of(text);
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == id) return P{Expr::Kind::Var, id.name, id.index, it->second};
    if (const ConstInfo* info = sig_.find(text)) {
      auto [it, inserted] = fixed_.try_emplace(text, nullptr);
      if (inserted) it->second = from_type(info->type);
      return P{Expr::Kind::Const, text, 0, it->second};
    }
    auto [it, _] = consts_.try_emplace(text, fresh());
    return P{Expr::Kind::Const, text, 0, it->second};
  }

  Expr materialize(const P& p) {
    std::vector<Expr> kids;
    auto sub = [&] {
      for (const auto& k : p.kids) kids.push_back(materialize(k));
    };
    switch (p.kind) {
      case Expr::Kind::Const: {
        const ConstInfo* info = sig_.find(p.name);
        return Expr::Const(p.name, resolve(p.ty, Type::E()), info && info->underspecified);
      }
      case Expr::Kind::Var: return Expr::Var(p.name, resolve(p.ty, Type::E()), p.index);
      case Expr::Kind::MetaVar: return Expr::MetaVar(p.name, resolve(p.ty, Type::Any()));
      case Expr::Kind::Param:
        sub();
        return Expr::Param(p.name, kids.empty() ? std::nullopt : std::optional<Expr>(kids[0]));
      case Expr::Kind::App: sub(); return Expr::App(kids[0], kids[1]);
      case Expr::Kind::Lambda: sub(); return Expr::Lambda(kids[0], kids[1]);
      case Expr::Kind::Not: sub(); return Expr::Not(kids[0]);
      case Expr::Kind::And: sub(); return Expr::And(kids[0], kids[1]);
      case Expr::Kind::Quant: sub(); return Expr::Quant(p.det, kids[0], kids[1], kids[2]);
      case Expr::Kind::Eq: sub(); return Expr::Eq(kids[0], kids[1]);
      case Expr::Kind::LF: sub(); return Expr::LF(p.cat, std::move(kids));
    }
    throw SyntaxError("unreachable");
  }

  const Signature& sig_;
  Signature* learned_;
  std::vector<std::pair<VarId, Ty>> scope_;
  std::map<VarId, Ty> free_;
  std::map<std::string, Ty> metas_, consts_, fixed_;
};

// ---- printing ---------------------------------------------------------------

void put(const Expr& e, std::vector<VarId>& bound, std::string& out);

void put_var(const Expr& v, const std::vector<VarId>& bound, std::string& out) {
  const VarId id = v.var_id();
  if (std::find(bound.begin(), bound.end(), id) != bound.end()) {
    out += id.str();
  } else {
    out += "(var " + id.str() + " " + v.type().str() + ")";
  }
}

void put_binder_body(const Expr& e, std::size_t from, std::vector<VarId>& bound, std::string& out) {
  bound.push_back(e.bound_var().var_id());
  for (std::size_t i = from; i < e.kids().size(); ++i) {
    out += " ";
    put(e.kids()[i], bound, out);
  }
  bound.pop_back();
}

void put(const Expr& e, std::vector<VarId>& bound, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Const: out += e.name(); return;
    case Expr::Kind::Var: put_var(e, bound, out); return;
    case Expr::Kind::MetaVar: out += "?" + e.name(); return;
    case Expr::Kind::Param:
      out += "(param " + e.name();
      if (e.anchored()) {
        out += " ";
        put(e.anchor(), bound, out);
      }
      out += ")";
      return;
    case Expr::Kind::App: {
      std::vector<Expr> args;
      Expr h = e;
      while (h.is(Expr::Kind::App)) {
        args.push_back(h.arg());
        h = h.fun();
      }
      out += "(";
      if (h.is(Expr::Kind::Const) && kReserved.count(h.name())) out += "app ";
      put(h, bound, out);
      for (auto it = args.rbegin(); it != args.rend(); ++it) {
        out += " ";
        put(*it, bound, out);
      }
      out += ")";
      return;
    }
    case Expr::Kind::Lambda:
      out += "(lam " + e.bound_var().var_id().str() + " " + e.bound_var().type().str();
      put_binder_body(e, 1, bound, out);
      out += ")";
      return;
    case Expr::Kind::Quant:
      out += e.det() == Determiner::Every ? "(forall " : "(exists ";
      out += e.bound_var().var_id().str();
      put_binder_body(e, 1, bound, out);
      out += ")";
      return;
    case Expr::Kind::Not:
      out += "(not ";
      put(e.operand(), bound, out);
      out += ")";
      return;
    case Expr::Kind::And: {
      out += "(and";
      Expr cur = e;
      while (cur.is(Expr::Kind::And)) {
        out += " ";
        put(cur.lhs(), bound, out);
        cur = cur.rhs();
      }
      out += " ";
      put(cur, bound, out);
      out += ")";
      return;
    }
    case Expr::Kind::Eq:
      out += "(= ";
      put(e.lhs(), bound, out);
      out += " ";
      put(e.rhs(), bound, out);
      out += ")";
      return;
    case Expr::Kind::LF:
      out += "(lf ";
      out += category_name(e.category());
      for (const auto& k : e.kids()) {
        out += " ";
        put(k, bound, out);
      }
      out += ")";
      return;
  }
}

}  // namespace

Type parse_type(std::string_view text) { return sx_type(Lexer(text).read_one()); }

Expr parse_expr(std::string_view text, const Signature& sig, Signature* learned) {
  Sx x = Lexer(text).read_one();
  return Reader(sig, learned).run(x, nullptr);
}

Expr parse_expr(std::string_view text, const Type& expected, const Signature& sig, Signature* learned) {
  Sx x = Lexer(text).read_one();
  return Reader(sig, learned).run(x, &expected);
}

std::string print(const Expr& e) {
  std::vector<VarId> bound;
  std::string out;
  put(e, bound, out);
  return out;
}

std::string brackets(const Expr& e) {
  if (!e.is(Expr::Kind::LF)) return print(e);
  std::string s = "[" + std::string(category_name(e.category()));
  for (const auto& k : e.kids()) s += " " + brackets(k);
  return s + "]";
}

}  // namespace ambigua
