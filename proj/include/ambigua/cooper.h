#pragma once

#include <vector>

#include "ambigua/expr.h"

namespace ambigua {

class Model;

struct Sequence {
  Expr head;
  std::vector<Expr> store;
};

// Deduplicated by alpha-equivalence of head and store, in insertion order.
class StoreSet {
 public:
  StoreSet() = default;
  StoreSet(std::initializer_list<Sequence> seqs);

  bool insert(Sequence s);
  std::size_t size() const { return seqs_.size(); }
  bool empty() const { return seqs_.empty(); }
  const Sequence& operator[](std::size_t i) const { return seqs_[i]; }
  auto begin() const { return seqs_.begin(); }
  auto end() const { return seqs_.end(); }

 private:
  std::vector<Sequence> seqs_;
};

bool alpha_eq(const Sequence& a, const Sequence& b);

enum class Mode { S, VP, XP };

// The placeholder operator lambda Q. lambda z. Q(z).
Expr placeholder_binder();

// Construct-specific application. In VP mode `open_slots` is the number of
// argument places of alpha still to be filled after this one. Throws
// Undefined when no clause applies.
Expr tapply(const Expr& alpha, const Expr& beta, Mode mode, int open_slots = 1);

StoreSet combine(const StoreSet& x, const StoreSet& y, Mode mode, int open_slots = 1);
StoreSet storeaway(const Expr& binder, const StoreSet& x);
Expr discharge(const Sequence& s);

StoreSet cooper_value(const Expr& lf);

// Fully discharged propositions of an S logical form. With a model,
// readings with equal denotations are merged as well.
std::vector<Expr> readings(const Expr& lf);
std::vector<Expr> readings(const Expr& lf, const Model& dedup_by);

}  // namespace ambigua
