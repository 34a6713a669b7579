#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ambigua/syntax.h"

namespace ambigua {

struct LexEntry {
  std::string surface;  // lower case
  Category cat;
  Expr sem;
};

struct GrammarRule {
  Category lhs;
  std::vector<Category> rhs;
};

// Lexicon plus phrase-structure rules. Each rule builds the logical-form node
// [lhs rhs...]; only the shapes the logical-form language allows are
// accepted.
class Grammar {
 public:
  std::vector<LexEntry> lexicon;
  std::vector<GrammarRule> rules;
  Signature signature;

  static std::vector<GrammarRule> default_rules();
  // Constants in `base` (typically the model's signature) keep their types
  // and underspecification flags.
  static Grammar from_json_text(const std::string& text, const Signature& base = Signature::builtin());
  static Grammar load(const std::string& path, const Signature& base = Signature::builtin());
  // The built-in lexicon for the fragment: Kermit, every, a, dog, frog,
  // croaked, saw, it.
  static Grammar builtin(const Signature& base = Signature::builtin());
  static const std::string& builtin_json();

  // All complete S parses; UnknownToken for a word with no entry.
  std::vector<Expr> parse(const std::vector<std::string>& tokens) const;
  std::vector<Expr> parse(std::string_view sentence) const;
};

std::vector<std::string> tokenize(std::string_view sentence);

// The S logical form as a theory wff (WrongCategory for anything else).
Expr sentence_wff(const Expr& lf);

// Categories of the lexical leaves, left to right.
std::vector<Category> leaf_categories(const Expr& lf);

}  // namespace ambigua
