#include "ambigua/cooper.h"

#include <set>

#include "ambigua/denote.h"
#include "ambigua/error.h"
#include "ambigua/reduce.h"
#include "ambigua/syntax.h"

namespace ambigua {

StoreSet::StoreSet(std::initializer_list<Sequence> seqs) {
  for (const auto& s : seqs) insert(s);
}

bool alpha_eq(const Sequence& a, const Sequence& b) {
  if (a.store.size() != b.store.size() || !alpha_eq(a.head, b.head)) return false;
  for (std::size_t i = 0; i < a.store.size(); ++i)
    if (!alpha_eq(a.store[i], b.store[i])) return false;
  return true;
}

bool StoreSet::insert(Sequence s) {
  for (const auto& t : seqs_)
    if (alpha_eq(s, t)) return false;
  seqs_.push_back(std::move(s));
  return true;
}

Expr placeholder_binder() {
  const Expr q = Expr::Var("Q", Type::Pred());
  const Expr z = Expr::Var("z", Type::E());
  return Expr::Lambda(q, Expr::Lambda(z, Expr::App(q, z)));
}

namespace {

bool is_gq(const Expr& e) { return e.type() == Type::Quantifier(); }
bool is_binder(const Expr& e) { return alpha_eq(e, placeholder_binder()); }

std::set<VarId> ids_of(std::initializer_list<Expr> es) {
  std::set<VarId> out;
  for (const auto& e : es) collect_var_ids(e, out);
  return out;
}

// n fresh variables of type e avoiding `avoid` (and each other).
std::vector<Expr> fresh_es(const std::string& base, int n, std::set<VarId>& avoid) {
  std::vector<Expr> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(fresh_var(base, Type::E(), avoid));
    avoid.insert(out.back().var_id());
  }
  return out;
}

Expr lambdas(const std::vector<Expr>& vs, Expr body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = Expr::Lambda(*it, body);
  return body;
}

Expr apply_all(Expr f, const std::vector<Expr>& args) {
  for (const auto& a : args) f = Expr::App(f, a);
  return f;
}

std::vector<Expr> cat(std::vector<Expr> a, const std::vector<Expr>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

[[noreturn]] void undefined(const Expr& a, const Expr& b, const char* mode) {
  throw Undefined(std::string("no ") + mode + " clause combines " + a.type().str() + " with " + b.type().str());
}

Expr tapply_vp(const Expr& alpha, const Expr& beta, int open) {
  const int n = alpha.type().relation_arity();
  if (n < 1) undefined(alpha, beta, "VP");
  // The two-place cases are the three displayed clauses; the rest keep the
  // same shape with pending slots in front and open slots behind.
  if (n == 1 && beta.type().is_e()) return Expr::App(alpha, beta);
  const int k = n - 1 - open;
  if (k < 0 || open < 0) undefined(alpha, beta, "VP");
  std::set<VarId> avoid = ids_of({alpha, beta});
  if (n == 2 && k == 0 && is_binder(beta)) {
    const Expr w = fresh_var("w", Type::E(), avoid);
    return Expr::Lambda(w, Expr::App(beta, Expr::App(alpha, w)));
  }
  if (n == 2 && k == 0 && is_gq(beta)) {
    const Expr w = fresh_es("w", 1, avoid)[0];
    const Expr z = fresh_var("z", Type::E(), avoid);
    return Expr::Lambda(w, Expr::App(beta, Expr::Lambda(z, apply_all(alpha, {z, w}))));
  }
  const auto p = fresh_es("p", k, avoid);
  const auto c = fresh_es("c", open, avoid);
  if (beta.type().is_e()) return lambdas(p, apply_all(alpha, cat(p, {beta})));
  if (is_binder(beta)) {
    const Expr w = fresh_var("w", Type::E(), avoid);
    return lambdas(cat(cat(p, {w}), c), apply_all(alpha, cat(cat(p, {w}), c)));
  }
  if (is_gq(beta)) {
    const Expr z = fresh_var("z", Type::E(), avoid);
    return lambdas(cat(p, c), Expr::App(beta, Expr::Lambda(z, apply_all(alpha, cat(cat(p, {z}), c)))));
  }
  undefined(alpha, beta, "VP");
}

Expr tapply_s(const Expr& alpha, const Expr& beta) {
  const int n = beta.type().relation_arity();
  const bool op = is_gq(alpha) || is_binder(alpha);
  if (op && n == 1) return Expr::App(alpha, beta);
  if (op && n == 2) {
    std::set<VarId> avoid = ids_of({alpha, beta});
    const Expr y = fresh_var("y", Type::E(), avoid);
    avoid.insert(y.var_id());
    const Expr x = fresh_var("x", Type::E(), avoid);
    return tapply_vp(Expr::Lambda(y, Expr::Lambda(x, apply_all(beta, {x, y}))), alpha, 1);
  }
  if (alpha.type().is_e() && n == 1) return Expr::App(beta, alpha);
  std::set<VarId> avoid = ids_of({alpha, beta});
  if (op && n >= 3) {
    const auto w = fresh_es("w", n - 1, avoid);
    const Expr z = fresh_var("z", Type::E(), avoid);
    if (is_gq(alpha)) return lambdas(w, Expr::App(alpha, Expr::Lambda(z, apply_all(beta, cat(w, {z})))));
    return lambdas(cat({z}, w), apply_all(beta, cat(w, {z})));
  }
  if (alpha.type().is_e() && n >= 2) {
    const auto w = fresh_es("w", n - 1, avoid);
    return lambdas(w, apply_all(beta, cat(w, {alpha})));
  }
  undefined(alpha, beta, "S");
}

Expr tapply_xp(const Expr& alpha, const Expr& beta) {
  if (alpha.type().is_fn() && alpha.type().arg() == beta.type()) return Expr::App(alpha, beta);
  if (beta.type().is_fn() && beta.type().arg() == alpha.type()) return Expr::App(beta, alpha);
  undefined(alpha, beta, "XP");
}

}  // namespace

Expr tapply(const Expr& alpha, const Expr& beta, Mode mode, int open_slots) {
  switch (mode) {
    case Mode::S: return beta_reduce(tapply_s(alpha, beta));
    case Mode::VP: return beta_reduce(tapply_vp(alpha, beta, open_slots));
    case Mode::XP: return beta_reduce(tapply_xp(alpha, beta));
  }
  throw Undefined("bad mode");
}

StoreSet combine(const StoreSet& x, const StoreSet& y, Mode mode, int open_slots) {
  StoreSet out;
  for (const auto& sx : x) {
    for (const auto& sy : y) {
      Sequence s{sx.head, {}};
      try {
        s.head = tapply(sx.head, sy.head, mode, open_slots);
      } catch (const Undefined&) {
        continue;
      }
      s.store = sy.store;
      s.store.insert(s.store.end(), sx.store.begin(), sx.store.end());
      out.insert(std::move(s));
    }
  }
  if (out.empty()) throw EmptyResult("no pair of sequences combines");
  return out;
}

StoreSet storeaway(const Expr& binder, const StoreSet& x) {
  if (x.size() != 1 || !x[0].store.empty())
    throw BadShape("storeaway needs exactly one single-element sequence, got " + std::to_string(x.size()) +
                   " sequences");
  return StoreSet{x[0], Sequence{binder, {x[0].head}}};
}

Expr discharge(const Sequence& s) {
  Expr acc = s.head;
  for (const auto& op : s.store) acc = tapply(op, acc, Mode::S);
  return acc;
}

namespace {

StoreSet leaf(const Expr& e) { return StoreSet{Sequence{e, {}}}; }

StoreSet cv(const Expr& lf) {
  if (!lf.is(Expr::Kind::LF)) return leaf(lf);
  const auto kids = lf.kids();
  switch (lf.category()) {
    case Category::S: {
      StoreSet pre = combine(cv(kids[0]), cv(kids[1]), Mode::S);
      StoreSet out;
      for (const auto& s : pre) {
        try {
          Expr r = discharge(s);
          if (r.type().is_t()) out.insert(Sequence{r, {}});
        } catch (const Undefined&) {
        }
      }
      if (out.empty()) throw EmptyResult("no sequence discharges completely");
      return out;
    }
    case Category::NP:
      if (kids.size() == 2)
        return storeaway(placeholder_binder(), combine(cv(kids[0]), cv(kids[1]), Mode::XP));
      return cv(kids[0]);
    case Category::VP:
      if (kids.size() == 1) return cv(kids[0]);
      if (kids.size() == 2) return combine(cv(kids[0]), cv(kids[1]), Mode::VP, 1);
    {
      StoreSet out = combine(combine(cv(kids[0]), cv(kids[1]), Mode::VP, 2), cv(kids[2]), Mode::VP, 1);
      // Both objects in store: the relative order of their discharge is
      // free, so add the variant with the two pending slots swapped.
      StoreSet more = out;
      for (const auto& s : out) {
        if (s.store.size() != 2 || s.head.type().relation_arity() != 3) continue;
        std::set<VarId> avoid = ids_of({s.head});
        const auto v = fresh_es("v", 3, avoid);
        more.insert({beta_reduce(lambdas(v, apply_all(s.head, {v[1], v[0], v[2]}))), {s.store[1], s.store[0]}});
      }
      return more;
    }
    default:
      return leaf(kids[0]);
  }
}

}  // namespace

StoreSet cooper_value(const Expr& lf) {
  if (!lf.is(Expr::Kind::LF)) throw WrongCategory("Cooper values are defined on logical forms");
  if (contains_kind(lf, Expr::Kind::MetaVar)) throw TypeMismatch("logical form contains metavariables");
  return cv(lf);
}

std::vector<Expr> readings(const Expr& lf) {
  if (!lf.is(Expr::Kind::LF) || lf.category() != Category::S)
    throw WrongCategory("readings need an S logical form");
  std::vector<Expr> out;
  for (const auto& s : cooper_value(lf)) out.push_back(s.head);
  return out;
}

std::vector<Expr> readings(const Expr& lf, const Model& dedup_by) {
  Evaluator ev(dedup_by);
  std::vector<Expr> out;
  std::vector<Denotation> seen;
  for (const auto& r : readings(lf)) {
    Denotation d = ev.denote(r);
    bool dup = false;
    for (const auto& s : seen) dup = dup || ev.equal(s, d);
    if (dup) continue;
    seen.push_back(std::move(d));
    out.push_back(r);
  }
  return out;
}

}  // namespace ambigua
