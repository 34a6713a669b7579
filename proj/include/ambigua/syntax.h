#pragma once

#include <map>
#include <string>
#include <string_view>

#include "ambigua/expr.h"

namespace ambigua {

struct ConstInfo {
  Type type;
  bool underspecified = false;
};

// Constant declarations consulted by the reader. Names are free-standing
// atoms; a constant absent from the signature gets its type inferred from
// its use.
class Signature {
 public:
  // every, a.
  static Signature builtin();
  // builtin() plus every constant occurring in e.
  static Signature collect(const Expr& e);

  void declare(const std::string& name, const Type& type, bool underspecified = false);
  void mark_underspecified(const std::string& name);
  void merge(const Signature& other);
  const ConstInfo* find(const std::string& name) const;
  const std::map<std::string, ConstInfo>& entries() const { return entries_; }

 private:
  std::map<std::string, ConstInfo> entries_;
};

Type parse_type(std::string_view text);

// Reads one expression in s-expression syntax. Inferred types of constants
// not in `sig` are added to `learned` when it is non-null.
Expr parse_expr(std::string_view text, const Signature& sig = Signature::builtin(),
                Signature* learned = nullptr);
// Same, with the type of the whole expression known in advance (it guides
// inference; a conflict is a TypeMismatch).
Expr parse_expr(std::string_view text, const Type& expected, const Signature& sig = Signature::builtin(),
                Signature* learned = nullptr);

std::string print(const Expr& e);
// Labelled-bracket rendering of a logical form: [S [NP [PN k]] [VP [IV croak_U]]].
std::string brackets(const Expr& e);

}  // namespace ambigua
