#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ambigua/expr.h"

namespace ambigua {

// Type of e. With an environment, every free variable must be listed there
// with its own type (UnboundVariable / TypeMismatch otherwise).
Type type_of(const Expr& e);
Type type_of(const Expr& e, const std::map<VarId, Type>& env);

// Key for the three kinds of substitutable atoms.
struct AtomKey {
  Expr::Kind kind;  // Var, MetaVar or Param
  VarId id;         // index is 0 for MetaVar and Param

  static AtomKey of(const Expr& atom);
  friend auto operator<=>(const AtomKey&, const AtomKey&) = default;
};

using SubstMap = std::map<AtomKey, Expr>;

// Simultaneous capture-avoiding substitution. Only free occurrences of Var
// keys are replaced; Param keys replace unanchored parameters of that name.
Expr substitute_many(const Expr& e, const SubstMap& m);
Expr substitute(const Expr& e, const Expr& var, const Expr& value);

Expr beta_reduce(const Expr& e);
Expr eta_reduce(const Expr& e);

// Positions of beta redexes as child-index paths, and single-step contraction.
using Path = std::vector<int>;
std::vector<Path> redexes(const Expr& e);
Expr contract(const Expr& e, const Path& at);
const Expr& subterm(const Expr& e, const Path& at);
Expr replace_at(const Expr& e, const Path& at, const Expr& with);

bool alpha_eq(const Expr& a, const Expr& b);
// Equal strings iff alpha_eq.
std::string canonical_key(const Expr& e);

bool is_h_ambiguous(const Expr& e);

// Quant <-> every/a applied to two abstracts.
Expr desugar(const Expr& e);
Expr resugar(const Expr& e);

using Bindings = std::map<std::string, Expr>;

// Matches a pattern with metavariables against a term modulo renaming of
// bound variables. Extends `b` (repeated metavariables must agree up to
// alpha_eq). A metavariable never captures a variable bound inside the term.
bool match(const Expr& pattern, const Expr& term, Bindings& b);
// Pattern with metavariables replaced; requires every metavariable bound.
Expr instantiate(const Expr& pattern, const Bindings& b);

}  // namespace ambigua
