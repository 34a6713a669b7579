// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "ambigua/cooper.h"
#include "ambigua/denote.h"
#include "ambigua/engine.h"
#include "ambigua/error.h"
#include "ambigua/grammar.h"
#include "ambigua/reduce.h"
#include "ambigua/syntax.h"
#include "oracles.h"

using namespace ambigua;

namespace {

// pinned limits
constexpr double kMaxSeconds = 1.0;
constexpr int kRandomModels = 120;
constexpr int kMaxDepth = 6;
constexpr int kTheories = 1000;
// enough for the whole state space of every generated ground theory
constexpr std::size_t kSearchBudget = 1000000;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

int failures = 0;

void report(const char* name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "threw " << e.what();
  }
  std::printf("%s %s  %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.str().c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool has_alpha(const std::vector<Expr>& v, const Expr& e) {
  return std::any_of(v.begin(), v.end(), [&](const Expr& x) { return alpha_eq(x, e); });
}

bool has_seq(const StoreSet& s, const Sequence& q) {
  return std::any_of(s.begin(), s.end(), [&](const Sequence& x) { return alpha_eq(x, q); });
}

std::set<std::string> printed(const std::vector<Expr>& ws) {
  std::set<std::string> s;
  for (const auto& w : ws) s.insert(print(w));
  return s;
}

std::vector<Expr> read_lines(const std::string& path, const Signature& sig) {
  std::vector<Expr> out;
  FILE* f = std::fopen(path.c_str(), "r");
  if (!f) throw SchemaError("cannot open " + path);
  char buf[1024];
  while (std::fgets(buf, sizeof buf, f)) {
    std::string line(buf);
    const auto at = line.find_first_not_of(" \t\r\n");
    if (at == std::string::npos || line[at] == ';') continue;
    out.push_back(parse_expr(line, Type::T(), sig));
  }
  std::fclose(f);
  return out;
}

const std::string D = AMBIGUA_DATA;

void golden_readings(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Grammar g = Grammar::builtin();
  const auto trees = g.parse("every dog saw a frog");
  o.expect(trees.size() == 1, "one parse");
  const auto rs = readings(trees.at(0));
  const double secs = seconds_since(t0);
  const Expr a = parse_expr("(forall x (dog x) (exists y (frog y) (saw y x)))", Type::T(), g.signature);
  const Expr b = parse_expr("(exists y (frog y) (forall x (dog x) (saw y x)))", Type::T(), g.signature);
  o.expect(rs.size() == 2, "exactly 2 readings");
  o.expect(has_alpha(rs, a), "forall-exists reading");
  o.expect(has_alpha(rs, b), "exists-forall reading");
  o.expect(secs < kMaxSeconds, "runtime");
  o.detail << rs.size() << " readings in " << secs << " s";
}

void golden_cooper(Outcome& o) {
  const Grammar g = Grammar::builtin();
  const Signature& sig = g.signature;
  auto X = [&](const char* s) { return parse_expr(s, sig); };
  const Expr lf = g.parse("every dog saw a frog").at(0);
  const Expr subj = lf.kids()[0], vp = lf.kids()[1];
  const Expr a_frog = X("(lam Q (-> e t) (exists y (frog y) (Q y)))");
  const Expr every_dog = X("(lam Q (-> e t) (forall x (dog x) (Q x)))");

  const StoreSet np = cooper_value(vp.kids()[1]);
  o.expect(np.size() == 2, "step 2 size");
  o.expect(has_seq(np, {a_frog, {}}), "step 2 quantifier in place");
  o.expect(has_seq(np, {placeholder_binder(), {a_frog}}), "step 2 quantifier stored");

  const StoreSet v = cooper_value(vp);
  o.expect(v.size() == 2, "step 3 size");
  o.expect(has_seq(v, {X("(lam w e (exists y (frog y) (saw y w)))"), {}}), "step 3 in place");
  o.expect(has_seq(v, {X("(lam w e (lam x e (saw w x)))"), {a_frog}}), "step 3 stored");

  const StoreSet pre = combine(cooper_value(subj), v, Mode::S);
  o.expect(pre.size() == 4, "step 5 size");
  o.expect(has_seq(pre, {X("(forall x (dog x) (exists y (frog y) (saw y x)))"), {}}), "step 5 seq 1");
  o.expect(has_seq(pre, {X("(lam w e (forall x (dog x) (saw w x)))"), {a_frog}}), "step 5 seq 2");
  o.expect(has_seq(pre, {X("(lam z e (exists y (frog y) (saw y z)))"), {every_dog}}), "step 5 seq 3");
  o.expect(has_seq(pre, {X("(lam w e (lam z e (saw z w)))"), {a_frog, every_dog}}), "step 5 seq 4");
  o.detail << "sequences " << np.size() << "/" << v.size() << "/" << pre.size();
}

void golden_croak(Outcome& o) {
  const Model m = Model::load(D + "/frog_model.json");
  const Signature sig = m.signature();
  const Expr c1 = parse_expr("(croak_1 k)", Type::T(), sig);
  const Expr c2 = parse_expr("(croak_2 k)", Type::T(), sig);
  double worst = 0;
  auto timed = [&](const Theory& t) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = extensions(t);
    worst = std::max(worst, seconds_since(t0));
    return r;
  };

  const Theory one{load_rules(D + "/rules/croak_one.json", sig), read_lines(D + "/uf/croak_one.wff", sig), &m};
  const auto r1 = timed(one);
  o.expect(r1.extensions.size() == 1, "one-rule theory: 1 extension");
  o.expect(!r1.extensions.empty() && holds(r1.extensions[0].wffs, c1), "one-rule theory: croak_1(k)");

  const Theory two{load_rules(D + "/rules/croak_two.json", sig), read_lines(D + "/uf/croak_two.wff", sig), &m};
  const auto r2 = timed(two);
  o.expect(r2.extensions.size() == 2, "two-rule theory: 2 extensions");
  int with1 = 0, with2 = 0;
  for (const auto& e : r2.extensions) {
    with1 += holds(e.wffs, c1) && !holds(e.wffs, c2);
    with2 += holds(e.wffs, c2) && !holds(e.wffs, c1);
  }
  o.expect(with1 == 1 && with2 == 1, "one extension per sense");

  Theory blocked = two;
  blocked.uf.push_back(Expr::Not(c1));
  const auto r3 = timed(blocked);
  bool fired = false;
  for (const auto& e : r3.extensions)
    for (const auto& s : e.trace) fired = fired || s.label == "CROAK1-IF-FROG";
  o.expect(!fired, "CROAK1-IF-FROG blocked");
  o.expect(r3.extensions.size() == 1 && holds(r3.extensions[0].wffs, c2), "only the croak_2 extension left");
  o.expect(worst < kMaxSeconds, "runtime");
  o.detail << r1.extensions.size() << "/" << r2.extensions.size() << "/" << r3.extensions.size()
           << " extensions, slowest " << worst << " s";
}

void semantics(Outcome& o) {
  std::mt19937 rng(2024);
  long beta = 0, beta_bad = 0, beta_random_bad = 0, beta_restricted_bad = 0, eta = 0, eta_bad = 0;
  long single = 0, single_bad = 0, products = 0, product_bad = 0;
  std::string example;
  for (int i = 0; i < kRandomModels; ++i) {
    const Model m = Model::from_json_text(oracle::random_model_json(rng));
    Evaluator ev(m);
    oracle::TermGen g{rng, m};
    oracle::TermGen clean{rng, m, false};

    std::vector<std::pair<Expr, Expr>> cases;  // (binder, body), argument
    std::vector<Expr> args;
    for (int k = 0; k < 8; ++k) {
      const Type vt = k % 2 == 0 ? Type::E() : Type::Pred();
      const Expr x = g.fresh(vt);
      cases.push_back({x, g.term(Type::T(), kMaxDepth - 2, {x})});
      args.push_back(g.term(vt, 2));
    }
    // smallest shape with a duplicated ambiguous argument:
    // (lam X. X(a) & ~X(b)) amb_U
    {
      const Expr x = g.fresh(Type::Pred());
      const Expr a = Expr::Const(m.universe.front(), Type::E()), b = Expr::Const(m.universe.back(), Type::E());
      cases.push_back({x, Expr::And(Expr::App(x, a), Expr::Not(Expr::App(x, b)))});
      args.push_back(Expr::Const("amb_U", Type::Pred()));
    }
    for (std::size_t k = 0; k < cases.size(); ++k) {
      const auto& [x, body] = cases[k];
      const Expr& arg = args[k];
      const Expr redex = Expr::App(Expr::Lambda(x, body), arg);
      const bool ok = denotation_eq(ev.denote(redex), ev.denote(substitute(body, x, arg)), m);
      ++beta;
      if (!ok) {
        ++beta_bad;
        beta_random_bad += k < 8;
        if (example.empty()) example = print(redex);
        if (ev.denote(arg).size() == 1 || oracle::free_occurrences(body, x.var_id()) <= 1) ++beta_restricted_bad;
      }
    }

    const Expr f = g.term(i % 2 ? Type::Pred() : Type::Relation(2), kMaxDepth - 2);
    const Expr v = g.fresh(Type::E());
    ++eta;
    eta_bad += !denotation_eq(ev.denote(Expr::Lambda(v, Expr::App(f, v))), ev.denote(f), m);

    const Expr t = clean.term(Type::T(), kMaxDepth);
    std::function<void(const Expr&)> all_single = [&](const Expr& e) {
      if (free_vars(e).empty()) {
        ++single;
        single_bad += ev.denote(e).size() != 1;
      }
      for (const auto& c : e.kids()) all_single(c);
    };
    all_single(t);

    const Expr u = g.term(Type::T(), kMaxDepth);
    std::function<void(const Expr&)> bound = [&](const Expr& e) {
      if (e.is(Expr::Kind::App) && free_vars(e).empty()) {
        ++products;
        product_bad += ev.denote(e).size() > ev.denote(e.fun()).size() * ev.denote(e.arg()).size();
      }
      for (const auto& c : e.kids()) bound(c);
    };
    bound(u);
  }
  o.expect(beta_bad == 0, "beta soundness");
  o.expect(eta_bad == 0, "eta soundness");
  o.expect(single_bad == 0, "singleton closure");
  o.expect(product_bad == 0, "cross-product bound");
  o.detail << kRandomModels << " models; beta " << beta_bad << "/" << beta << " violations (" << beta_random_bad << " from random redexes, "
           << beta_restricted_bad << " with a linear or unambiguous argument)"
           << ", eta " << eta_bad << "/" << eta << ", singleton " << single_bad << "/" << single
           << ", cross-product " << product_bad << "/" << products;
  if (!example.empty()) o.detail << "; e.g. " << example;
}

const char* kFragmentModel = R"j({"universe": ["a1", "a2", "a3"],
  "situations": [{"id": "s1", "facts": {"dog": [["a1"], ["a2"]], "frog": [["a2"], ["a3"]],
                   "cat": [["a1"]], "bone": [["a3"]], "saw": [["a2", "a1"], ["a3", "a2"]],
                   "chased": [["a1", "a1"], ["a3", "a2"]], "gave": [["a2", "a3", "a1"], ["a3", "a3", "a2"]],
                   "showed": [["a1", "a2", "a3"]]}},
                 {"id": "s2", "facts": {"dog": [["a3"]], "frog": [["a1"]], "cat": [["a2"], ["a3"]],
                   "bone": [["a1"], ["a2"]], "saw": [["a1", "a3"], ["a2", "a3"]],
                   "gave": [["a1", "a1", "a3"], ["a1", "a2", "a3"], ["a2", "a2", "a1"]]}}],
  "constants": {"croak_U": {"senses": ["croak_1", "croak_2"]}, "croak_1": {"arity": 1},
                "croak_2": {"arity": 1}, "k": {"entity": "a1"}, "p": {"entity": "a2"}}})j";

void oracle_equivalence(Outcome& o) {
  const Model m = Model::from_json_text(kFragmentModel);
  const Grammar g = Grammar::load(D + "/extended_lexicon.json", m.signature());
  const std::vector<std::string> nps = {"kermit", "pat", "every dog", "a frog", "a bone", "every cat"};
  Evaluator ev(m);
  int sentences = 0, alpha_bad = 0, denot_bad = 0, max_readings = 0;
  auto quantifiers = [](const std::vector<std::string>& parts) {
    int n = 0;
    for (const auto& p : parts) n += p.find(' ') != std::string::npos;
    return n;
  };
  auto check = [&](const std::string& s) {
    const auto trees = g.parse(s);
    o.expect(trees.size() == 1, "unique parse of " + s);
    const auto rs = readings(trees.at(0));
    const auto want = oracle::permutation_readings(trees.at(0));
    ++sentences;
    max_readings = std::max<int>(max_readings, static_cast<int>(rs.size()));
    if (!oracle::same_alpha_set(rs, want)) {
      ++alpha_bad;
      o.expect(false, "alpha mismatch: " + s);
    }
    auto covered = [&](const std::vector<Expr>& xs, const std::vector<Expr>& ys) {
      return std::all_of(xs.begin(), xs.end(), [&](const Expr& x) {
        return std::any_of(ys.begin(), ys.end(),
                           [&](const Expr& y) { return denotation_eq(ev.denote(x), ev.denote(y), m); });
      });
    };
    if (!covered(rs, want) || !covered(want, rs)) {
      ++denot_bad;
      o.expect(false, "denotation mismatch: " + s);
    }
  };
  for (const auto& a : nps)
    for (const auto& b : nps) {
      for (const char* v : {"saw", "chased"})
        if (quantifiers({a, b}) >= 2) check(a + " " + v + " " + b);
      for (const auto& c : nps)
        for (const char* v : {"gave", "showed"})
          if (quantifiers({a, b, c}) >= 2) check(a + " " + v + " " + b + " " + c);
    }
  o.expect(max_readings == 6, "three quantifiers reach 6 readings");
  o.detail << sentences << " sentences, " << alpha_bad << " alpha and " << denot_bad
           << " denotation mismatches, up to " << max_readings << " readings";
}

void engine_properties(Outcome& o) {
  const Signature sig = oracle::ground_signature();
  std::mt19937 rng(77);
  int theories = 0, exts = 0, contain_checked = 0, blocked_checked = 0, ambiguous = 0;
  for (int i = 0; i < kTheories; ++i) {
    const auto g = oracle::random_ground_theory(rng, sig, 3, 4);
    const auto got = extensions(Theory{g.rules, g.uf, nullptr}, {kSearchBudget, AntiRandomPolicy::Reject});
    ++theories;
    ambiguous += got.extensions.size() > 1;
    std::set<std::set<std::string>> mine;
    for (const auto& e : got.extensions) {
      ++exts;
      mine.insert(printed(e.wffs));
      o.expect(check_cdi(e.wffs), "CDI: " + g.rules_json);
      o.expect(oracle::is_fixed_point(g.rules, e.wffs), "fixed point: " + g.rules_json);
      if (!g.rewriting) {
        ++contain_checked;
        for (const auto& w : g.uf) o.expect(holds(e.wffs, w), "W-containment: " + g.rules_json);
      }
      // a rule whose negated justification is given never fires
      for (const auto& r : g.rules)
        if (r.just && holds(g.uf, Expr::Not(*r.just))) {
          ++blocked_checked;
          for (const auto& s : e.trace) o.expect(s.label != r.name, "blocking: " + g.rules_json);
        }
    }
    o.expect(mine == oracle::bfs_extensions(g.rules, g.uf), "exhaustiveness: " + g.rules_json);
  }
  o.expect(ambiguous > 0 && contain_checked > 0 && blocked_checked > 0, "generator coverage");
  o.detail << theories << " theories, " << exts << " extensions, " << ambiguous << " ambiguous, "
           << contain_checked << " containment checks, " << blocked_checked << " blocking checks";
}

void anti_random(Outcome& o) {
  const Model frogs = Model::load(D + "/frog_model.json");
  auto rules_for = [](const Model& m, const std::string& file) { return load_rules(D + "/rules/" + file, m.signature()); };
  for (const auto& r : rules_for(frogs, "croak_random.json")) o.expect(!is_anti_random(r, frogs), "flags " + r.name);
  o.expect(is_anti_random(rules_for(frogs, "croak_one.json")[0], frogs), "accepts CROAK1-IF-FROG");

  oracle::ModelShape shape;
  shape.preds = {"frog", "croak_1", "croak_2"};
  shape.rels = {};
  shape.ambiguous = {{"croak_U", {"croak_1", "croak_2"}}};
  std::mt19937 rng(88);
  int with_nonfrog = 0, all_frogs = 0;
  for (int i = 0; i < 200; ++i) {
    const Model m = Model::from_json_text(oracle::random_model_json(rng, shape));
    const auto rnd = rules_for(m, "croak_random.json");
    for (const auto& r : rnd) o.expect(!is_anti_random(r, m), "flags " + r.name + " on a random model");
    bool nonfrog = false;
    for (auto d : m.discourse) {
      const auto& frogs_here = m.situations[d].facts.count("frog") ? m.situations[d].facts.at("frog")
                                                                   : std::set<Tuple>{};
      for (const auto& e : m.universe) nonfrog = nonfrog || !frogs_here.count({e});
    }
    const bool accepted = is_anti_random(rules_for(m, "croak_one.json")[0], m);
    if (nonfrog) {
      ++with_nonfrog;
      o.expect(accepted, "accepts CROAK1-IF-FROG with a non-frog");
    } else {
      ++all_frogs;
      o.expect(!accepted, "context holds everywhere when everything is a frog");
    }
  }
  o.detail << "random pair flagged; CROAK1-IF-FROG accepted on " << with_nonfrog
           << " models with a non-frog, rejected on " << all_frogs << " all-frog models";
}

void gfp(Outcome& o) {
  const Model m = Model::load(D + "/frog_model.json");
  const Signature sig = m.signature();
  const Grammar g = Grammar::builtin(sig);
  const Expr lf = g.parse("every dog saw a frog").at(0);
  const Expr ae = parse_expr("(forall x (dog x) (exists y (frog y) (saw y x)))", Type::T(), sig);
  const auto r = extensions(Theory{load_rules(D + "/rules/gfp.json", sig), {lf}, &m}, {10000, AntiRandomPolicy::Warn});
  o.expect(r.extensions.size() == 1, "one extension");
  bool found = false;
  for (const auto& e : r.extensions) {
    o.expect(check_cdi(e.wffs), "extension passes check_cdi");
    found = found || (e.wffs.size() == 1 && alpha_eq(e.wffs[0], ae));
  }
  o.expect(found, "forall-exists reading");
  if (!r.extensions.empty()) o.detail << print(r.extensions[0].wffs.at(0));
}

}  // namespace

int main() {
  report("golden-1 readings of 'every dog saw a frog'", golden_readings);
  report("golden-2 intermediate Cooper values", golden_cooper);
  report("golden-3 croak theories", golden_croak);
  report("semantics properties", semantics);
  report("oracle equivalence of scope readings", oracle_equivalence);
  report("default-engine properties", engine_properties);
  report("anti-random validator", anti_random);
  report("GFP scope rule", gfp);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
