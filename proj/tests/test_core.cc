#include <random>

#include "ambigua/error.h"
#include "ambigua/reduce.h"
#include "ambigua/syntax.h"
#include "doctest.h"
#include "oracles.h"

using namespace ambigua;

namespace {

const Signature& sig0() {
  static const Signature s = [] {
    Signature s = Signature::builtin();
    for (const char* p : {"croak_1", "croak_2", "dog", "frog"}) s.declare(p, Type::Pred());
    s.declare("saw", Type::Relation(2));
    return s;
  }();
  return s;
}

Expr P(const char* s) { return parse_expr(s, sig0()); }
Expr W(const char* s) { return parse_expr(s, Type::T(), sig0()); }

Model two_entities() {
  return Model::from_json_text(R"({"universe": ["d1", "f1"],
    "situations": [{"id": "s", "constituents": ["d1", "f1"],
      "facts": {"dog": [["d1"]], "frog": [["f1"]], "croak_1": [["d1"]], "saw": [["f1", "d1"]]}},
      {"id": "s2", "facts": {"dog": [["d1"], ["f1"]], "croak_1": [["f1"]]}}]})");
}

// Repeatedly contract a randomly chosen redex.
Expr random_normalize(Expr e, std::mt19937& rng) {
  for (int guard = 0; guard < 10000; ++guard) {
    auto rs = redexes(e);
    if (rs.empty()) return e;
    e = contract(e, rs[std::uniform_int_distribution<std::size_t>(0, rs.size() - 1)(rng)]);
  }
  FAIL("no normal form");
  return e;
}

}  // namespace

TEST_SUITE("lsul-core") {

TEST_CASE("type_of") {
  Signature sig;
  sig.declare("croak_U", Type::Pred(), true);
  CHECK(type_of(parse_expr("croak_U", sig)) == Type::Fn(Type::E(), Type::T()));
  CHECK(type_of(Expr::Var("x", Type::E()), {{VarId{"x"}, Type::E()}}) == Type::E());
  CHECK(type_of(parse_expr("(croak_U k)", sig)).is_t());
  CHECK_THROWS_AS(type_of(Expr::Var("x", Type::E()), {}), UnboundVariable);
  CHECK_THROWS_AS(type_of(Expr::Var("x", Type::E()), {{VarId{"x"}, Type::T()}}), TypeMismatch);
  CHECK_THROWS_AS(Expr::App(Expr::Const("k", Type::E()), Expr::Const("k", Type::E())), TypeMismatch);
  CHECK_THROWS_AS(parse_expr("(croak_U (croak_U k))", sig), TypeMismatch);
}

TEST_CASE("types print and parse") {
  for (const char* t : {"e", "t", "(-> e t)", "(-> (-> e t) (-> (-> e t) t))"})
    CHECK(parse_type(t).str() == t);
  CHECK(parse_type("(-> e e t)") == Type::Relation(2));
  CHECK(Type::Determiner() == Type::Fn(Type::Pred(), Type::Quantifier()));
  CHECK(Type::Relation(3).relation_arity() == 3);
  CHECK(Type::Quantifier().relation_arity() == -1);
}

TEST_CASE("substitute") {
  const Expr x = Expr::Var("x", Type::E()), y = Expr::Var("y", Type::E());
  const Expr k = Expr::Const("k", Type::E());
  CHECK(alpha_eq(substitute(W("(croak_U (var x e))"), x, k), W("(croak_U k)")));

  const Expr lam = P("(lam x e (saw x (var y e)))");
  const Expr out = substitute(lam, y, x);
  CHECK(alpha_eq(out, P("(lam z e (saw z (var x e)))")));
  CHECK(out.bound_var().var_id() != x.var_id());
  CHECK(occurs_free(x.var_id(), out));

  const Expr pv = Expr::Var("P", Type::Pred());
  const Expr body = W("(forall x (dog x) ((var P (-> e t)) x))");
  const Expr r = beta_reduce(substitute(body, pv, P("(lam z (croak_1 z))")));
  CHECK(alpha_eq(r, W("(forall x (dog x) (croak_1 x))")));
  const Model m = two_entities();
  CHECK(oracle::senses(r, m) == oracle::senses(W("(forall x (dog x) (croak_1 x))"), m));
  CHECK(oracle::senses(r, m) == std::set<std::vector<int>>{{1, 0}});
}

TEST_CASE("beta_reduce") {
  const Expr e = W("((lam P (lam Q (exists y (P y) (Q y)))) frog (lam w e (saw w (var x e))))");
  CHECK(alpha_eq(beta_reduce(e), W("(exists y (frog y) (saw y (var x e)))")));
  CHECK(identical(beta_reduce(P("((lam x e x) k)")), P("k")));
  const Expr croak_1 = Expr::Const("croak_1", Type::Pred());
  CHECK(alpha_eq(beta_reduce(Expr::App(P("(lam Q (-> e t) (lam z e (Q z)))"), croak_1)),
                 P("(lam z e (croak_1 z))")));
  CHECK(alpha_eq(eta_reduce(P("(lam z e (croak_1 z))")), croak_1));
}

TEST_CASE("alpha_eq") {
  CHECK(alpha_eq(W("(forall x (dog x) (croak_1 x))"), W("(forall y (dog y) (croak_1 y))")));
  CHECK_FALSE(alpha_eq(W("(croak_1 k)"), W("(croak_2 k)")));
  CHECK_FALSE(alpha_eq(P("(lam x e (lam y e (saw x y)))"), P("(lam x e (lam y e (saw y x)))")));
  CHECK_FALSE(alpha_eq(W("(forall x (dog x) (croak_1 x))"), W("(exists x (dog x) (croak_1 x))")));
  CHECK(canonical_key(W("(forall x (dog x) (croak_1 x))")) == canonical_key(W("(forall y (dog y) (croak_1 y))")));
  // free variables are compared by name
  CHECK_FALSE(alpha_eq(W("(dog (var x e))"), W("(dog (var y e))")));
}

TEST_CASE("is_h_ambiguous") {
  Signature sig;
  sig.declare("croak_U", Type::Pred(), true);
  CHECK(is_h_ambiguous(parse_expr("(croak_U k)", sig)));
  CHECK_FALSE(is_h_ambiguous(W("(and (croak_1 k) (frog k))")));
  CHECK(is_h_ambiguous(W("(croak_1 (param x1))")));
  CHECK_FALSE(is_h_ambiguous(W("(croak_1 (param x1 k))")));
  CHECK(is_h_ambiguous(W("(lf S (lf NP (lf PN k)) (lf VP (lf IV croak_1)))")));
  // monotone under conjunction
  const Expr amb = parse_expr("(croak_U k)", sig);
  CHECK(is_h_ambiguous(Expr::And(amb, W("(frog k)"))));
  CHECK(is_h_ambiguous(Expr::And(W("(frog k)"), amb)));
}

TEST_CASE("text syntax round trip") {
  for (const char* s :
       {"(croak_U k)", "(lam x e (saw x k))", "(forall x (dog x) (exists y (frog y) (saw y x)))", "(param p1)",
        "(param p1 k)", "(= k (param x1))", "(not (and (frog k) (dog k) (croak_1 k)))",
        "(lf S (lf NP (lf PN k)) (lf VP (lf IV croak_U)))", "(var x#2 e)", "(app (lam x e x) k)",
        "(lam P (-> e t) (lam Q (-> e t) (forall x (P x) (Q x))))"}) {
    const Expr e = P(s);
    CHECK(alpha_eq(P(print(e).c_str()), e));
    CHECK(print(P(print(e).c_str())) == print(e));
  }
  CHECK(print(P("(saw k k)")) == "(saw k k)");
  CHECK_THROWS_AS(P("(lam x"), SyntaxError);
  CHECK_THROWS_AS(P("(forall x (dog x))"), SyntaxError);
  CHECK_THROWS_AS(P("(lf XP k)"), SyntaxError);
}

TEST_CASE("match and instantiate") {
  Bindings b;
  const Expr pat = W("(and (croak_U ?x) (frog ?x))");
  CHECK(match(pat, W("(and (croak_U k) (frog k))"), b));
  CHECK(identical(b.at("x"), P("k")));
  Bindings b2;
  CHECK_FALSE(match(pat, W("(and (croak_U k) (frog p))"), b2));
  CHECK(b2.empty());
  // cannot capture a variable bound in the term
  Bindings b3;
  CHECK_FALSE(match(W("(forall x (dog x) (croak_1 ?y))"), W("(forall z (dog z) (croak_1 z))"), b3));
  Bindings b4;
  CHECK(match(W("(forall x (dog x) ?s)"), W("(forall z (dog z) (croak_1 k))"), b4));
  CHECK(alpha_eq(instantiate(W("(exists w (dog w) ?s)"), b4), W("(exists w (dog w) (croak_1 k))")));
  CHECK_THROWS_AS(instantiate(W("(dog ?q)"), {}), UnboundVariable);
}

TEST_CASE("property: beta confluence") {
  std::mt19937 rng(11);
  for (int i = 0; i < 40; ++i) {
    const Model m = Model::from_json_text(oracle::random_model_json(rng));
    oracle::TermGen g{rng, m};
    const Expr t = g.term(Type::T(), 6);
    const Expr nf = beta_reduce(t);
    CHECK(redexes(nf).empty());
    for (int k = 0; k < 3; ++k) CHECK(alpha_eq(random_normalize(t, rng), nf));
  }
}

TEST_CASE("property: quantifier sugar is lossless") {
  std::mt19937 rng(12);
  for (int i = 0; i < 40; ++i) {
    const Model m = Model::from_json_text(oracle::random_model_json(rng));
    oracle::TermGen g{rng, m};
    const Expr t = g.term(Type::T(), 6);
    const Expr d = desugar(t);
    CHECK_FALSE(contains_kind(d, Expr::Kind::Quant));
    CHECK(alpha_eq(resugar(d), t));
    CHECK(alpha_eq(parse_expr(print(t), m.signature()), t));
  }
}

TEST_CASE("property: substitution commutes with reduction") {
  std::mt19937 rng(13);
  for (int i = 0; i < 40; ++i) {
    const Model m = Model::from_json_text(oracle::random_model_json(rng));
    oracle::TermGen g{rng, m};
    const Expr x = g.fresh(Type::E());
    const Expr body = g.term(Type::T(), 5, {x});
    const Expr closed = g.term(Type::E(), 1);
    CHECK(alpha_eq(beta_reduce(substitute(body, x, closed)), beta_reduce(substitute(beta_reduce(body), x, closed))));
  }
}

TEST_CASE("fresh variables are deterministic") {
  std::set<VarId> avoid{{"w", 0}, {"w", 3}};
  CHECK(fresh_var("w", Type::E(), avoid).var_id() == VarId{"w", 4});
  CHECK(fresh_var("z", Type::E(), avoid).var_id() == VarId{"z", 0});
}

}  // TEST_SUITE
