#include "ambigua/reduce.h"

#include <algorithm>

#include "ambigua/error.h"

namespace ambigua {

Type type_of(const Expr& e) { return e.type(); }

Type type_of(const Expr& e, const std::map<VarId, Type>& env) {
  for (const auto& [v, t] : free_vars(e)) {
    auto it = env.find(v);
    if (it == env.end()) throw UnboundVariable("free variable " + v.str() + " is not in scope");
    if (it->second != t)
      throw TypeMismatch("variable " + v.str() + " has type " + t.str() + ", environment says " +
                         it->second.str());
  }
  return e.type();
}

AtomKey AtomKey::of(const Expr& atom) {
  switch (atom.kind()) {
    case Expr::Kind::Var: return {Expr::Kind::Var, atom.var_id()};
    case Expr::Kind::MetaVar: return {Expr::Kind::MetaVar, {atom.name(), 0}};
    case Expr::Kind::Param: return {Expr::Kind::Param, {atom.name(), 0}};
    default: break;
  }
  throw TypeMismatch("only variables, metavariables and parameters can be substituted");
}

namespace {

const Expr* lookup(const Expr& e, const SubstMap& m) {
  std::optional<AtomKey> key;
  if (e.is(Expr::Kind::Var) || e.is(Expr::Kind::MetaVar) ||
      (e.is(Expr::Kind::Param) && !e.anchored()))
    key = AtomKey::of(e);
  if (!key) return nullptr;
  auto it = m.find(*key);
  return it == m.end() ? nullptr : &it->second;
}

// Does e contain a free occurrence of some key of m?
bool mentions(const Expr& e, const SubstMap& m, std::vector<VarId>& bound) {
  if (const Expr* hit = lookup(e, m)) {
    (void)hit;
    if (!e.is(Expr::Kind::Var)) return true;
    return std::find(bound.begin(), bound.end(), e.var_id()) == bound.end();
  }
  if (e.is(Expr::Kind::Lambda) || e.is(Expr::Kind::Quant)) {
    bound.push_back(e.bound_var().var_id());
    bool hit = false;
    for (std::size_t i = 1; i < e.kids().size() && !hit; ++i) hit = mentions(e.kids()[i], m, bound);
    bound.pop_back();
    return hit;
  }
  for (const auto& k : e.kids())
    if (mentions(k, m, bound)) return true;
  return false;
}

Expr subst_rec(const Expr& e, const SubstMap& m, const std::set<VarId>& fvr) {
  if (const Expr* hit = lookup(e, m)) return *hit;
  if (e.kids().empty()) return e;
  if (e.is(Expr::Kind::Lambda) || e.is(Expr::Kind::Quant)) {
    const Expr& x = e.bound_var();
    SubstMap inner = m;
    inner.erase(AtomKey{Expr::Kind::Var, x.var_id()});
    std::vector<VarId> bound;
    bool any = false;
    for (std::size_t i = 1; i < e.kids().size() && !any; ++i) any = mentions(e.kids()[i], inner, bound);
    if (!any) return e;
    Expr binder = x;
    if (fvr.count(x.var_id())) {
      std::set<VarId> avoid = fvr;
      collect_var_ids(e, avoid);
      for (const auto& [k, _] : m)
        if (k.kind == Expr::Kind::Var) avoid.insert(k.id);
      binder = fresh_var(x.name(), x.type(), avoid);
      inner.insert_or_assign(AtomKey{Expr::Kind::Var, x.var_id()}, binder);
    }
    std::vector<Expr> kids{binder};
    for (std::size_t i = 1; i < e.kids().size(); ++i) kids.push_back(subst_rec(e.kids()[i], inner, fvr));
    return e.with_kids(std::move(kids));
  }
  std::vector<Expr> kids;
  bool changed = false;
  for (const auto& k : e.kids()) {
    kids.push_back(subst_rec(k, m, fvr));
    changed = changed || !kids.back().same_node(k);
  }
  return changed ? e.with_kids(std::move(kids)) : e;
}

}  // namespace

Expr substitute_many(const Expr& e, const SubstMap& m) {
  if (m.empty()) return e;
  std::set<VarId> fvr;
  for (const auto& [_, t] : m)
    for (const auto& [v, ty] : free_vars(t)) fvr.insert(v);
  return subst_rec(e, m, fvr);
}

Expr substitute(const Expr& e, const Expr& var, const Expr& value) {
  if (!var.type().compatible(value.type()))
    throw TypeMismatch("cannot substitute a term of type " + value.type().str() + " for " +
                       var.name() + " of type " + var.type().str());
  return substitute_many(e, SubstMap{{AtomKey::of(var), value}});
}

Expr beta_reduce(const Expr& e) {
  if (e.is(Expr::Kind::App)) {
    Expr f = beta_reduce(e.fun());
    Expr a = beta_reduce(e.arg());
    if (f.is(Expr::Kind::Lambda)) return beta_reduce(substitute(f.body(), f.bound_var(), a));
    if (f.same_node(e.fun()) && a.same_node(e.arg())) return e;
    return Expr::App(f, a);
  }
  if (e.kids().empty()) return e;
  std::vector<Expr> kids;
  bool changed = false;
  for (const auto& k : e.kids()) {
    kids.push_back(beta_reduce(k));
    changed = changed || !kids.back().same_node(k);
  }
  return changed ? e.with_kids(std::move(kids)) : e;
}

Expr eta_reduce(const Expr& e) {
  if (e.kids().empty()) return e;
  std::vector<Expr> kids;
  for (const auto& k : e.kids()) kids.push_back(eta_reduce(k));
  Expr r = e.with_kids(std::move(kids));
  if (r.is(Expr::Kind::Lambda) && r.body().is(Expr::Kind::App)) {
    const Expr& app = r.body();
    const Expr& x = r.bound_var();
    if (app.arg().is(Expr::Kind::Var) && app.arg().var_id() == x.var_id() &&
        !occurs_free(x.var_id(), app.fun()))
      return app.fun();
  }
  return r;
}

namespace {
void redexes_rec(const Expr& e, Path& at, std::vector<Path>& out) {
  if (e.is(Expr::Kind::App) && e.fun().is(Expr::Kind::Lambda)) out.push_back(at);
  for (std::size_t i = 0; i < e.kids().size(); ++i) {
    at.push_back(static_cast<int>(i));
    redexes_rec(e.kids()[i], at, out);
    at.pop_back();
  }
}
}  // namespace

std::vector<Path> redexes(const Expr& e) {
  std::vector<Path> out;
  Path at;
  redexes_rec(e, at, out);
  return out;
}

const Expr& subterm(const Expr& e, const Path& at) {
  const Expr* cur = &e;
  for (int i : at) cur = &cur->kids()[static_cast<std::size_t>(i)];
  return *cur;
}

Expr replace_at(const Expr& e, const Path& at, const Expr& with) {
  if (at.empty()) return with;
  std::vector<Expr> kids(e.kids().begin(), e.kids().end());
  const auto i = static_cast<std::size_t>(at[0]);
  kids.at(i) = replace_at(kids[i], Path(at.begin() + 1, at.end()), with);
  return e.with_kids(std::move(kids));
}

Expr contract(const Expr& e, const Path& at) {
  const Expr& r = subterm(e, at);
  if (!r.is(Expr::Kind::App) || !r.fun().is(Expr::Kind::Lambda))
    throw TypeMismatch("no redex at the given position");
  const Expr& f = r.fun();
  return replace_at(e, at, substitute(f.body(), f.bound_var(), r.arg()));
}

namespace {

int depth_of(const std::vector<VarId>& env, const VarId& v) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == v) return static_cast<int>(i);
  return -1;
}

bool alpha_rec(const Expr& a, const Expr& b, std::vector<VarId>& ea, std::vector<VarId>& eb) {
  if (a.kind() != b.kind() || a.type() != b.type()) return false;
  switch (a.kind()) {
    case Expr::Kind::Const: return a.name() == b.name() && a.underspecified() == b.underspecified();
    case Expr::Kind::MetaVar: return a.name() == b.name();
    case Expr::Kind::Var: {
      const int da = depth_of(ea, a.var_id()), db = depth_of(eb, b.var_id());
      if (da < 0 && db < 0) return a.var_id() == b.var_id();
      return da == db;
    }
    case Expr::Kind::Param:
      if (a.name() != b.name() || a.anchored() != b.anchored()) return false;
      return !a.anchored() || alpha_rec(a.anchor(), b.anchor(), ea, eb);
    case Expr::Kind::Lambda:
    case Expr::Kind::Quant: {
      if (a.is(Expr::Kind::Quant) && a.det() != b.det()) return false;
      if (a.bound_var().type() != b.bound_var().type()) return false;
      ea.push_back(a.bound_var().var_id());
      eb.push_back(b.bound_var().var_id());
      bool ok = true;
      for (std::size_t i = 1; i < a.kids().size() && ok; ++i) ok = alpha_rec(a.kids()[i], b.kids()[i], ea, eb);
      ea.pop_back();
      eb.pop_back();
      return ok;
    }
    case Expr::Kind::LF:
      if (a.category() != b.category()) return false;
      break;
    default: break;
  }
  if (a.kids().size() != b.kids().size()) return false;
  for (std::size_t i = 0; i < a.kids().size(); ++i)
    if (!alpha_rec(a.kids()[i], b.kids()[i], ea, eb)) return false;
  return true;
}

void key_rec(const Expr& e, std::vector<VarId>& env, std::string& out) {
  switch (e.kind()) {
    case Expr::Kind::Const:
      out += "c:" + e.name() + (e.underspecified() ? "!" : "") + ":" + e.type().str();
      return;
    case Expr::Kind::MetaVar: out += "?" + e.name() + ":" + e.type().str(); return;
    case Expr::Kind::Var: {
      const int d = depth_of(env, e.var_id());
      out += d < 0 ? "v:" + e.var_id().str() + ":" + e.type().str() : "@" + std::to_string(d);
      return;
    }
    case Expr::Kind::Lambda:
    case Expr::Kind::Quant:
      out += e.is(Expr::Kind::Lambda) ? "(L" : (e.det() == Determiner::Every ? "(A" : "(E");
      out += e.bound_var().type().str();
      env.push_back(e.bound_var().var_id());
      for (std::size_t i = 1; i < e.kids().size(); ++i) {
        out += " ";
        key_rec(e.kids()[i], env, out);
      }
      env.pop_back();
      out += ")";
      return;
    default: break;
  }
  static const char* tags[] = {"", "", "", "(P", "(@", "", "(~", "(&", "", "(=", "(F"};
  out += tags[static_cast<int>(e.kind())];
  if (e.is(Expr::Kind::Param)) out += e.name();
  if (e.is(Expr::Kind::LF)) out += category_name(e.category());
  for (const auto& k : e.kids()) {
    out += " ";
    key_rec(k, env, out);
  }
  out += ")";
}

}  // namespace

bool alpha_eq(const Expr& a, const Expr& b) {
  std::vector<VarId> ea, eb;
  return alpha_rec(a, b, ea, eb);
}

std::string canonical_key(const Expr& e) {
  std::vector<VarId> env;
  std::string out;
  key_rec(e, env, out);
  return out;
}

bool is_h_ambiguous(const Expr& e) {
  if (e.is(Expr::Kind::Const) && e.underspecified()) return true;
  if (e.is(Expr::Kind::Param) && !e.anchored()) return true;
  if (e.is(Expr::Kind::LF)) return true;
  return std::any_of(e.kids().begin(), e.kids().end(), [](const Expr& k) { return is_h_ambiguous(k); });
}

Expr desugar(const Expr& e) {
  if (e.kids().empty()) return e;
  std::vector<Expr> kids;
  for (const auto& k : e.kids()) kids.push_back(desugar(k));
  if (e.is(Expr::Kind::Quant)) {
    const Expr& x = kids[0];
    return Expr::Apply(determiner_const(e.det()), {Expr::Lambda(x, kids[1]), Expr::Lambda(x, kids[2])});
  }
  return e.with_kids(std::move(kids));
}

Expr resugar(const Expr& e) {
  if (e.kids().empty()) return e;
  std::vector<Expr> kids;
  for (const auto& k : e.kids()) kids.push_back(resugar(k));
  Expr r = e.with_kids(std::move(kids));
  if (!r.is(Expr::Kind::App) || !r.fun().is(Expr::Kind::App)) return r;
  const Expr& det = r.fun().fun();
  const Expr& restr = r.fun().arg();
  const Expr& scope = r.arg();
  if (!det.is(Expr::Kind::Const) || det.type() != Type::Determiner() ||
      (det.name() != "every" && det.name() != "a"))
    return r;
  if (!restr.is(Expr::Kind::Lambda) || !scope.is(Expr::Kind::Lambda)) return r;
  const Determiner d = det.name() == "every" ? Determiner::Every : Determiner::A;
  Expr x = restr.bound_var();
  if (x.var_id() == scope.bound_var().var_id()) return Expr::Quant(d, x, restr.body(), scope.body());
  Expr rb = restr.body();
  if (occurs_free(x.var_id(), scope)) {
    std::set<VarId> avoid;
    collect_var_ids(r, avoid);
    Expr z = fresh_var(x.name(), x.type(), avoid);
    rb = substitute(rb, x, z);
    x = z;
  }
  return Expr::Quant(d, x, rb, substitute(scope.body(), scope.bound_var(), x));
}

namespace {

struct MatchEnv {
  std::vector<VarId> pat, term;
};

bool match_rec(const Expr& p, const Expr& t, Bindings& b, MatchEnv& env) {
  switch (p.kind()) {
    case Expr::Kind::MetaVar: {
      if (!p.type().compatible(t.type())) return false;
      for (const auto& [v, _] : free_vars(t))
        if (depth_of(env.term, v) >= 0) return false;
      auto it = b.find(p.name());
      if (it != b.end()) return alpha_eq(it->second, t);
      b.emplace(p.name(), t);
      return true;
    }
    case Expr::Kind::Var: {
      if (!t.is(Expr::Kind::Var)) return false;
      const int dp = depth_of(env.pat, p.var_id()), dt = depth_of(env.term, t.var_id());
      if (dp < 0 && dt < 0) return p.var_id() == t.var_id() && p.type().compatible(t.type());
      return dp == dt;
    }
    case Expr::Kind::Const:
      return t.is(Expr::Kind::Const) && p.name() == t.name() && p.type().compatible(t.type());
    case Expr::Kind::Param:
      if (!t.is(Expr::Kind::Param) || p.name() != t.name() || p.anchored() != t.anchored()) return false;
      return !p.anchored() || match_rec(p.anchor(), t.anchor(), b, env);
    case Expr::Kind::Lambda:
    case Expr::Kind::Quant: {
      if (t.kind() != p.kind()) return false;
      if (p.is(Expr::Kind::Quant) && p.det() != t.det()) return false;
      if (!p.bound_var().type().compatible(t.bound_var().type())) return false;
      env.pat.push_back(p.bound_var().var_id());
      env.term.push_back(t.bound_var().var_id());
      bool ok = true;
      for (std::size_t i = 1; i < p.kids().size() && ok; ++i) ok = match_rec(p.kids()[i], t.kids()[i], b, env);
      env.pat.pop_back();
      env.term.pop_back();
      return ok;
    }
    case Expr::Kind::LF:
      if (!t.is(Expr::Kind::LF) || p.category() != t.category()) return false;
      break;
    default:
      if (t.kind() != p.kind()) return false;
  }
  if (p.kids().size() != t.kids().size()) return false;
  for (std::size_t i = 0; i < p.kids().size(); ++i)
    if (!match_rec(p.kids()[i], t.kids()[i], b, env)) return false;
  return true;
}

Expr rename_binders(const Expr& e, const std::set<VarId>& clash, std::set<VarId>& avoid) {
  if (e.kids().empty()) return e;
  std::vector<Expr> kids(e.kids().begin(), e.kids().end());
  if ((e.is(Expr::Kind::Lambda) || e.is(Expr::Kind::Quant)) && clash.count(kids[0].var_id())) {
    const Expr& x = kids[0];
    Expr z = fresh_var(x.name(), x.type(), avoid);
    avoid.insert(z.var_id());
    for (std::size_t i = 1; i < kids.size(); ++i) kids[i] = substitute(kids[i], x, z);
    kids[0] = z;
  }
  for (std::size_t i = 0; i < kids.size(); ++i) kids[i] = rename_binders(kids[i], clash, avoid);
  return e.with_kids(std::move(kids));
}

}  // namespace

bool match(const Expr& pattern, const Expr& term, Bindings& b) {
  Bindings trial = b;
  MatchEnv env;
  if (!match_rec(pattern, term, trial, env)) return false;
  b = std::move(trial);
  return true;
}

Expr instantiate(const Expr& pattern, const Bindings& b) {
  SubstMap m;
  std::set<VarId> clash;
  for (const auto& name : metavar_names(pattern)) {
    auto it = b.find(name);
    if (it == b.end()) throw UnboundVariable("metavariable ?" + name + " is not bound");
    m.emplace(AtomKey{Expr::Kind::MetaVar, {name, 0}}, it->second);
    collect_var_ids(it->second, clash);
  }
  std::set<VarId> avoid = clash;
  collect_var_ids(pattern, avoid);
  return substitute_many(rename_binders(pattern, clash, avoid), m);
}

}  // namespace ambigua
