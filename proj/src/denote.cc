#include "ambigua/denote.h"

#include <algorithm>

#include "ambigua/cooper.h"
#include "ambigua/error.h"
#include "ambigua/reduce.h"
#include "ambigua/syntax.h"

namespace ambigua {

Value Value::table(std::vector<Value> entries) {
  Value v;
  v.atom_ = kTable;
  v.table_ = std::make_shared<const std::vector<Value>>(std::move(entries));
  return v;
}

bool Value::total() const {
  if (undefined()) return false;
  if (is_atom()) return true;
  return std::all_of(table_->begin(), table_->end(), [](const Value& v) { return v.total(); });
}

bool operator==(const Value& a, const Value& b) {
  if (a.atom_ != b.atom_) return false;
  if (!a.is_table()) return true;
  return a.table_ == b.table_ || *a.table_ == *b.table_;
}

bool operator<(const Value& a, const Value& b) {
  if (a.atom_ != b.atom_) return a.atom_ < b.atom_;
  if (!a.is_table() || a.table_ == b.table_) return false;
  return *a.table_ < *b.table_;
}

bool operator<(const Sense& a, const Sense& b) {
  if (a.vars != b.vars) return a.vars < b.vars;
  return a.table < b.table;
}

namespace {

using VarList = std::vector<std::pair<VarId, Type>>;

void normalize(std::vector<Sense>& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

Value truth(bool b) { return Value::atom(b ? 1 : 0); }

VarList merge_vars(const VarList& a, const VarList& b) {
  VarList out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      if (a[i].second != b[j].second)
        throw TypeMismatch("variable " + a[i].first.str() + " used at types " + a[i].second.str() +
                           " and " + b[j].second.str());
      out.push_back(a[i++]);
      ++j;
    }
  }
  return out;
}

}  // namespace

Evaluator::Evaluator(const Model& m, EvalLimits limits) : m_(m), limits_(limits) {}

const std::vector<Value>& Evaluator::domain(const Type& t) {
  auto it = domains_.find(t);
  if (it != domains_.end()) return it->second;
  std::vector<Value> dom;
  switch (t.kind()) {
    case Type::Kind::E:
      for (std::size_t i = 0; i < m_.universe.size(); ++i) dom.push_back(Value::atom(static_cast<int>(i)));
      break;
    case Type::Kind::T:
      dom = {Value::atom(0), Value::atom(1)};
      break;
    case Type::Kind::Any:
      throw TypeMismatch("cannot evaluate a term of unknown type");
    case Type::Kind::Fn: {
      const std::vector<Value> da = domain(t.arg());
      const std::vector<Value> dr = domain(t.res());
      double size = 1;
      for (std::size_t i = 0; i < da.size(); ++i) {
        size *= static_cast<double>(dr.size());
        if (size > static_cast<double>(limits_.max_domain))
          throw DomainTooLarge("domain of " + t.str() + " exceeds " + std::to_string(limits_.max_domain));
      }
      const auto n = static_cast<std::size_t>(size);
      dom.reserve(n);
      std::vector<std::size_t> digits(da.size(), 0);
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<Value> entries;
        entries.reserve(da.size());
        for (auto d : digits) entries.push_back(dr[d]);
        dom.push_back(Value::table(std::move(entries)));
        for (std::size_t p = 0; p < digits.size(); ++p) {
          if (++digits[p] < dr.size()) break;
          digits[p] = 0;
        }
      }
      break;
    }
  }
  return domains_.emplace(t, std::move(dom)).first->second;
}

long Evaluator::index_of(const Value& v, const Type& t) {
  if (v.undefined()) return -1;
  switch (t.kind()) {
    case Type::Kind::E:
      return v.is_atom() && v.as_atom() < static_cast<int>(m_.universe.size()) ? v.as_atom() : -1;
    case Type::Kind::T:
      return v.is_atom() && v.as_atom() <= 1 ? v.as_atom() : -1;
    case Type::Kind::Fn: {
      if (!v.is_table()) return -1;
      const long radix = static_cast<long>(domain(t.res()).size());
      long idx = 0, mul = 1;
      for (const auto& x : v.entries()) {
        const long d = index_of(x, t.res());
        if (d < 0) return -1;
        idx += d * mul;
        mul *= radix;
      }
      return idx;
    }
    case Type::Kind::Any: break;
  }
  return -1;
}

std::size_t Evaluator::assignments(const VarList& vars) {
  std::size_t n = 1;
  for (const auto& [v, t] : vars) {
    n *= domain(t).size();
    if (n * situations() > limits_.max_cells)
      throw DomainTooLarge("too many assignments to evaluate over");
  }
  return n;
}

namespace {

// For every assignment over `target`, the index of its restriction to `part`.
std::vector<std::size_t> restriction(const VarList& target, const VarList& part,
                                     const std::vector<std::size_t>& sizes, std::size_t n) {
  std::vector<std::size_t> stride(target.size(), 0);
  std::size_t mul = 1;
  for (const auto& pv : part) {
    auto pos = std::find_if(target.begin(), target.end(), [&](const auto& tv) { return tv.first == pv.first; });
    const auto i = static_cast<std::size_t>(pos - target.begin());
    stride[i] = mul;
    mul *= sizes[i];
  }
  std::vector<std::size_t> out(n);
  std::vector<std::size_t> digits(target.size(), 0);
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) idx += digits[i] * stride[i];
    out[g] = idx;
    for (std::size_t p = 0; p < digits.size(); ++p) {
      if (++digits[p] < sizes[p]) break;
      digits[p] = 0;
    }
  }
  return out;
}

}  // namespace

Sense Evaluator::combine(std::span<const Sense* const> parts,
                         const std::function<Value(std::span<const Value>)>& op) {
  VarList vars;
  for (const Sense* p : parts) vars = merge_vars(vars, p->vars);
  const std::size_t n = assignments(vars);
  std::vector<std::size_t> sizes;
  for (const auto& [v, t] : vars) sizes.push_back(domain(t).size());
  std::vector<std::vector<std::size_t>> maps;
  for (const Sense* p : parts) maps.push_back(restriction(vars, p->vars, sizes, n));
  const std::size_t ns = situations();
  Sense out{vars, {}};
  out.table.reserve(n * ns);
  std::vector<Value> args(parts.size());
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t k = 0; k < parts.size(); ++k) args[k] = parts[k]->table[maps[k][g] * ns + s];
      out.table.push_back(op(args));
    }
  }
  return out;
}

Sense Evaluator::extend(const Sense& s, const VarList& vars) {
  Sense shape{vars, {}};
  const std::size_t n = assignments(vars);
  shape.table.assign(n * situations(), Value());
  const Sense* both[] = {&shape, &s};
  return combine(both, [](std::span<const Value> a) { return a[1]; });
}

Sense Evaluator::abstract(const Sense& s, const VarId& x, const Type& xt) {
  const std::size_t dx = domain(xt).size();
  const std::size_t ns = situations();
  auto pos = std::find_if(s.vars.begin(), s.vars.end(), [&](const auto& v) { return v.first == x; });
  if (pos == s.vars.end()) {
    Sense out{s.vars, {}};
    out.table.reserve(s.table.size());
    for (const auto& v : s.table) out.table.push_back(Value::table(std::vector<Value>(dx, v)));
    return out;
  }
  if (pos->second != xt) throw TypeMismatch("binder " + x.str() + " has inconsistent type");
  const auto xi = static_cast<std::size_t>(pos - s.vars.begin());
  VarList rest = s.vars;
  rest.erase(rest.begin() + static_cast<long>(xi));
  std::size_t stride = 1;
  for (std::size_t i = 0; i < xi; ++i) stride *= domain(s.vars[i].second).size();
  const std::size_t n = assignments(rest);
  Sense out{rest, {}};
  out.table.reserve(n * ns);
  for (std::size_t g = 0; g < n; ++g) {
    // g's digits below xi stay, digits above shift up by one place
    const std::size_t low = g % stride, high = g / stride;
    for (std::size_t s2 = 0; s2 < ns; ++s2) {
      std::vector<Value> entries;
      entries.reserve(dx);
      for (std::size_t a = 0; a < dx; ++a) {
        const std::size_t orig = low + stride * (a + dx * high);
        entries.push_back(s.table[orig * ns + s2]);
      }
      out.table.push_back(Value::table(std::move(entries)));
    }
  }
  return out;
}

Value Evaluator::apply(const Value& f, const Value& a, const Type& arg_type) {
  if (!f.is_table()) return Value();
  const long i = index_of(a, arg_type);
  if (i < 0) return Value();
  return f.entries()[static_cast<std::size_t>(i)];
}

Value Evaluator::relation_value(const std::string& rel, int arity, std::size_t sit, std::vector<int>& prefix) {
  if (static_cast<int>(prefix.size()) == arity) {
    Tuple t;
    for (int i : prefix) t.push_back(m_.universe[static_cast<std::size_t>(i)]);
    const auto& facts = m_.situations[sit].facts;
    auto it = facts.find(rel);
    return truth(it != facts.end() && it->second.count(t));
  }
  std::vector<Value> entries;
  for (std::size_t i = 0; i < m_.universe.size(); ++i) {
    prefix.push_back(static_cast<int>(i));
    entries.push_back(relation_value(rel, arity, sit, prefix));
    prefix.pop_back();
  }
  return Value::table(std::move(entries));
}

Value Evaluator::determiner(bool every) {
  const auto& preds = domain(Type::Pred());
  std::vector<Value> outer;
  outer.reserve(preds.size());
  for (const auto& p : preds) {
    std::vector<Value> inner;
    inner.reserve(preds.size());
    for (const auto& q : preds) {
      bool r = every;
      for (std::size_t i = 0; i < p.entries().size(); ++i) {
        const bool pi = p.entries()[i].as_atom() == 1, qi = q.entries()[i].as_atom() == 1;
        if (every && pi && !qi) r = false;
        if (!every && pi && qi) r = true;
      }
      inner.push_back(truth(r));
    }
    outer.push_back(Value::table(std::move(inner)));
  }
  return Value::table(std::move(outer));
}

std::vector<Sense> Evaluator::constant(const Expr& c) {
  const std::string key = c.name() + ":" + c.type().str();
  auto hit = const_cache_.find(key);
  if (hit != const_cache_.end()) return hit->second;
  const std::size_t ns = situations();
  auto constant_sense = [&](const Value& v) { return Sense{{}, std::vector<Value>(ns, v)}; };
  auto relation_sense = [&](const std::string& rel, int arity) {
    Sense s{{}, {}};
    for (std::size_t i = 0; i < ns; ++i) {
      std::vector<int> prefix;
      s.table.push_back(relation_value(rel, arity, i, prefix));
    }
    return s;
  };
  std::vector<Sense> out;
  const ConstDecl* d = m_.find(c.name());
  const int arity = c.type().relation_arity();
  if (d && d->kind != ConstDecl::Kind::Entity) {
    if (arity != d->arity)
      throw TypeMismatch("constant " + c.name() + " used at type " + c.type().str() + " but the model gives it arity " +
                         std::to_string(d->arity));
    if (d->kind == ConstDecl::Kind::Relation) {
      out.push_back(relation_sense(c.name(), arity));
    } else {
      for (const auto& s : d->senses) out.push_back(relation_sense(s, arity));
    }
  } else if (c.type().is_e() && (d || m_.entity_index(c.name()) >= 0)) {
    const int idx = m_.entity_index(d ? d->entity : c.name());
    out.push_back(constant_sense(Value::atom(idx)));
  } else if (!d && c.type() == Type::Determiner() && (c.name() == "every" || c.name() == "a")) {
    out.push_back(constant_sense(determiner(c.name() == "every")));
  } else {
    throw UninterpretedConstant("constant " + c.name() + " of type " + c.type().str() +
                                " is not interpreted by the model");
  }
  normalize(out);
  const_cache_.emplace(key, out);
  return out;
}

std::vector<Sense> Evaluator::eval(const Expr& e) {
  std::vector<Sense> out;
  auto pairwise = [&](const std::vector<Sense>& a, const std::vector<Sense>& b,
                      const std::function<Value(std::span<const Value>)>& op) {
    for (const auto& x : a)
      for (const auto& y : b) {
        const Sense* parts[] = {&x, &y};
        out.push_back(combine(parts, op));
      }
  };
  switch (e.kind()) {
    case Expr::Kind::Const: return constant(e);
    case Expr::Kind::MetaVar: throw TypeMismatch("cannot evaluate metavariable ?" + e.name());
    case Expr::Kind::Var: {
      const auto& dom = domain(e.type());
      Sense s{{{e.var_id(), e.type()}}, {}};
      for (const auto& v : dom)
        for (std::size_t i = 0; i < situations(); ++i) s.table.push_back(v);
      return {s};
    }
    case Expr::Kind::Param: {
      if (e.anchored()) return eval(e.anchor());
      for (const auto& c : m_.discourse_constituents()) {
        Sense s{{}, {}};
        for (const auto& sit : m_.situations)
          s.table.push_back(sit.constituents.count(c) ? Value::atom(m_.entity_index(c)) : Value());
        out.push_back(std::move(s));
      }
      break;
    }
    case Expr::Kind::App: {
      const Type at = e.arg().type();
      pairwise(eval(e.fun()), eval(e.arg()),
               [&](std::span<const Value> v) { return apply(v[0], v[1], at); });
      break;
    }
    case Expr::Kind::Lambda: {
      const Expr& x = e.bound_var();
      for (const auto& s : eval(e.body())) out.push_back(abstract(s, x.var_id(), x.type()));
      break;
    }
    case Expr::Kind::Not:
      for (const auto& s : eval(e.operand())) {
        const Sense* parts[] = {&s};
        out.push_back(combine(parts, [](std::span<const Value> v) {
          return v[0].undefined() ? Value() : truth(v[0].as_atom() == 0);
        }));
      }
      break;
    case Expr::Kind::And:
      pairwise(eval(e.lhs()), eval(e.rhs()), [](std::span<const Value> v) {
        if (v[0].undefined() || v[1].undefined()) return Value();
        return truth(v[0].as_atom() == 1 && v[1].as_atom() == 1);
      });
      break;
    case Expr::Kind::Eq:
      pairwise(eval(e.lhs()), eval(e.rhs()), [](std::span<const Value> v) {
        if (!v[0].total() || !v[1].total()) return Value();
        return truth(v[0] == v[1]);
      });
      break;
    case Expr::Kind::Quant: {
      const Expr& x = e.bound_var();
      std::vector<Sense> r, s;
      for (const auto& a : eval(e.restrictor())) r.push_back(abstract(a, x.var_id(), x.type()));
      for (const auto& a : eval(e.scope())) s.push_back(abstract(a, x.var_id(), x.type()));
      const bool every = e.det() == Determiner::Every;
      pairwise(r, s, [every](std::span<const Value> v) {
        const auto& p = v[0].entries();
        const auto& q = v[1].entries();
        bool res = every;
        for (std::size_t i = 0; i < p.size(); ++i) {
          if (p[i].undefined() || q[i].undefined()) return Value();
          const bool pi = p[i].as_atom() == 1, qi = q[i].as_atom() == 1;
          if (every && pi && !qi) res = false;
          if (!every && pi && qi) res = true;
        }
        return truth(res);
      });
      break;
    }
    case Expr::Kind::LF:
      if (e.category() != Category::S)
        throw WrongCategory("only S logical forms have a denotation, not " + std::string(category_name(e.category())));
      for (const auto& r : readings(e)) {
        auto part = eval(r);
        out.insert(out.end(), part.begin(), part.end());
      }
      break;
  }
  normalize(out);
  return out;
}

Denotation Evaluator::denote(const Expr& e) { return Denotation{e.type(), eval(e)}; }

std::set<Truth> Evaluator::truth_values(const Expr& w, std::size_t situation) {
  if (!w.type().is_t()) throw TypeMismatch("truth values of a term of type " + w.type().str());
  std::set<Truth> out;
  const std::size_t ns = situations();
  for (const auto& s : eval(w)) {
    for (std::size_t g = 0; g * ns < s.table.size(); ++g) {
      const Value& v = s.table[g * ns + situation];
      out.insert(v.undefined() ? Truth::Undefined : v.as_atom() == 1 ? Truth::True : Truth::False);
    }
  }
  return out;
}

bool Evaluator::equal(const Denotation& a, const Denotation& b) {
  if (a.type != b.type) return false;
  VarList vars;
  for (const auto& s : a.senses) vars = merge_vars(vars, s.vars);
  for (const auto& s : b.senses) vars = merge_vars(vars, s.vars);
  auto lift = [&](const Denotation& d) {
    std::vector<Sense> out;
    for (const auto& s : d.senses) out.push_back(s.vars == vars ? s : extend(s, vars));
    normalize(out);
    return out;
  };
  return lift(a) == lift(b);
}

bool Evaluator::is_consistent(std::span<const Expr> ws) {
  for (const auto& w : ws) {
    if (!w.type().is_t()) throw TypeMismatch("consistency of a term of type " + w.type().str());
    if (is_h_ambiguous(w)) throw AmbiguousInput("wff " + print(w) + " is H-type ambiguous");
  }
  if (ws.empty()) return true;
  // Non-ambiguous wffs denote single senses; conjoin them pointwise.
  std::vector<Sense> parts;
  for (const auto& w : ws) {
    auto s = eval(w);
    if (s.size() != 1) throw AmbiguousInput("wff " + print(w) + " has " + std::to_string(s.size()) + " senses");
    parts.push_back(std::move(s[0]));
  }
  std::vector<const Sense*> ptrs;
  for (const auto& p : parts) ptrs.push_back(&p);
  Sense conj = combine(ptrs, [](std::span<const Value> v) {
    for (const auto& x : v)
      if (x.undefined()) return Value();
    for (const auto& x : v)
      if (x.as_atom() == 0) return truth(false);
    return truth(true);
  });
  const std::size_t ns = situations();
  for (std::size_t g = 0; g * ns < conj.table.size(); ++g)
    for (auto s : m_.discourse) {
      const Value& v = conj.table[g * ns + s];
      if (!v.undefined() && v.as_atom() == 1) return true;
    }
  return false;
}

Denotation denote(const Expr& e, const Model& m) { return Evaluator(m).denote(e); }

std::set<Truth> truth_values(const Expr& w, const Model& m, const std::string& situation) {
  return Evaluator(m).truth_values(w, m.situation_index(situation));
}

bool denotation_eq(const Denotation& a, const Denotation& b, const Model& m) { return Evaluator(m).equal(a, b); }

bool is_consistent(std::span<const Expr> ws, const Model& m) { return Evaluator(m).is_consistent(ws); }

}  // namespace ambigua
