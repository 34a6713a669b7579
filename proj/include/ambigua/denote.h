#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <vector>

#include "ambigua/expr.h"
#include "ambigua/model.h"

namespace ambigua {

// A semantic value: undefined, an atom (entity index for e, 0/1 for t), or a
// function table indexed by the argument domain.
class Value {
 public:
  Value() = default;
  static Value atom(int a) { Value v; v.atom_ = a; return v; }
  static Value table(std::vector<Value> entries);

  bool undefined() const { return atom_ == kUndef; }
  bool is_atom() const { return atom_ >= 0; }
  bool is_table() const { return atom_ == kTable; }
  int as_atom() const { return atom_; }
  const std::vector<Value>& entries() const { return *table_; }
  // Undefined nowhere inside.
  bool total() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator<(const Value& a, const Value& b);

 private:
  static constexpr int kUndef = -1, kTable = -2;
  int atom_ = kUndef;
  std::shared_ptr<const std::vector<Value>> table_;
};

enum class Truth { False, True, Undefined };

// One sense: for every assignment to `vars` and every situation of the model,
// a value. Assignments are enumerated in mixed radix with the first variable
// least significant; table index = assignment * |situations| + situation.
struct Sense {
  std::vector<std::pair<VarId, Type>> vars;
  std::vector<Value> table;

  friend bool operator==(const Sense&, const Sense&) = default;
  friend bool operator<(const Sense& a, const Sense& b);
};

struct Denotation {
  Type type;
  std::vector<Sense> senses;  // sorted, unique

  std::size_t size() const { return senses.size(); }
};

struct EvalLimits {
  std::size_t max_domain = 1u << 16;
  std::size_t max_cells = 1u << 22;
};

// Multi-sense evaluator over one model. Caches domains and constant tables;
// not thread-safe, make one per thread.
class Evaluator {
 public:
  explicit Evaluator(const Model& m, EvalLimits limits = {});

  Denotation denote(const Expr& e);
  // { f(g)(s) : f a sense } at one situation; e must be closed.
  std::set<Truth> truth_values(const Expr& w, std::size_t situation);

  // Set equality after extending both sides to the union of their variables.
  bool equal(const Denotation& a, const Denotation& b);
  // AmbiguousInput if a member is H-type ambiguous.
  bool is_consistent(std::span<const Expr> ws);

  const Model& model() const { return m_; }
  const std::vector<Value>& domain(const Type& t);
  // Position of v in domain(t), or -1 if v is not a member (e.g. partial).
  long index_of(const Value& v, const Type& t);
  std::size_t situations() const { return m_.situations.size(); }

  // Pointwise combination over the union of the parts' variables.
  Sense combine(std::span<const Sense* const> parts,
                const std::function<Value(std::span<const Value>)>& op);
  // Lambda-abstraction of one sense over x.
  Sense abstract(const Sense& s, const VarId& x, const Type& xt);
  Sense extend(const Sense& s, const std::vector<std::pair<VarId, Type>>& vars);

 private:
  std::vector<Sense> eval(const Expr& e);
  std::vector<Sense> constant(const Expr& c);
  Value relation_value(const std::string& rel, int arity, std::size_t sit, std::vector<int>& prefix);
  Value apply(const Value& f, const Value& a, const Type& arg_type);
  Value determiner(bool every);
  std::size_t assignments(const std::vector<std::pair<VarId, Type>>& vars);

  const Model& m_;
  EvalLimits limits_;
  std::map<Type, std::vector<Value>> domains_;
  std::map<std::string, std::vector<Sense>> const_cache_;
};

Denotation denote(const Expr& e, const Model& m);
std::set<Truth> truth_values(const Expr& w, const Model& m, const std::string& situation);
bool denotation_eq(const Denotation& a, const Denotation& b, const Model& m);
bool is_consistent(std::span<const Expr> ws, const Model& m);

}  // namespace ambigua
