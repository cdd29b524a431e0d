#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dlc/dlc.hpp"

namespace dlc::testkit {

inline std::vector<CorpusEntry>& corpus() {
  static std::vector<CorpusEntry> c = load_corpus(DLC_CORPUS_DIR);
  return c;
}

inline const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : corpus())
    if (e.name == name) return e;
  throw std::runtime_error("no corpus entry " + name);
}

inline std::size_t depth(const Term& t) {
  std::size_t d = 0;
  for (const auto& k : t->kids) d = std::max(d, depth(k));
  return d + 1;
}

/// Walks the printed form of a trace: every recorded term, read back in,
/// must be what one head step of the previous one produces. Returns an
/// empty string on success.
inline std::string replay_printed(const Term& initial, const std::vector<std::string>& afters, const Context* ctx) {
  Term cur = parse_term(to_string(initial));
  for (std::size_t i = 0; i < afters.size(); ++i) {
    auto st = head_step(cur, ctx);
    if (!st) return "engine stopped before recorded step " + std::to_string(i + 1);
    Term rec = parse_term(afters[i]);
    if (!alpha_equal(st->after, rec))
      return "step " + std::to_string(i + 1) + ": engine gives " + to_string(st->after) + ", record has " + afters[i];
    cur = rec;
  }
  if (head_step(cur, ctx)) return "record ends before the engine does";
  return "";
}

// ---------------------------------------------------------------------------
// Random well-typed LC terms over the default signature. Every binder gets
// a fresh name, all annotations are present, and the hypotheses in
// `base()` are the only free variables.

class RandomTerms {
 public:
  using Env = std::vector<std::pair<std::string, Formula>>;

  explicit RandomTerms(unsigned seed) : rng_(seed) {}

  static Context base() {
    return Context{{"h0", atom("P", {ind_fun("c0")})},
                   {"h1", atom("Q", {ind_fun("c1")})},
                   {"h2", atom("R", {ind_fun("c0"), ind_fun("c1")})},
                   {"n0", neg(atom("P", {ind_fun("c0")}))}};
  }

  Formula type(int d) {
    if (d <= 0 || chance(0.35)) return base_atom();
    switch (pick(4)) {
      case 0: return imp(type(d - 1), type(d - 1));
      case 1: return conj(type(d - 1), type(d - 1));
      case 2: return disj(type(d - 1), type(d - 1));
      default: return exists_p();
    }
  }

  Term term(const Formula& goal, int d) {
    Context b = base();
    Env env(b.entries().begin(), b.entries().end());
    return gen(goal, d, env);
  }

 private:
  std::mt19937 rng_;
  int counter_ = 0;

  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::string fresh(const std::string& stem) { return stem + std::to_string(++counter_); }

  Formula base_atom() {
    switch (pick(3)) {
      case 0: return atom("P", {ind_fun("c0")});
      case 1: return atom("Q", {ind_fun("c1")});
      default: return atom("R", {ind_fun("c0"), ind_fun("c1")});
    }
  }
  static Formula exists_p() { return exists_ind("al", atom("P", {ind_var("al")})); }

  std::vector<std::string> of_type(const Env& env, const Formula& a) {
    std::vector<std::string> out;
    for (const auto& [x, b] : env)
      if (alpha_equal(a, b)) out.push_back(x);
    return out;
  }

  // introduction rule, or a hypothesis when one fits
  Term close(const Formula& a, int d, const Env& env) {
    auto hyps = of_type(env, a);
    if (!hyps.empty() && (a->kind == FormulaKind::Atom || chance(0.5))) return var(hyps[pick(hyps.size())]);
    switch (a->kind) {
      case FormulaKind::Imp: {
        std::string x = fresh("x");
        Env e = env;
        e.emplace_back(x, a->lhs);
        return lam(x, a->lhs, gen(a->rhs, d - 1, e));
      }
      case FormulaKind::And:
        return pair(gen(a->lhs, d - 1, env), gen(a->rhs, d - 1, env));
      case FormulaKind::Or:
        return chance(0.5) ? inj(0, gen(a->lhs, d - 1, env), a) : inj(1, gen(a->rhs, d - 1, env), a);
      case FormulaKind::ExistsInd: {
        std::vector<std::pair<std::string, IndTerm>> ps;
        for (const auto& [x, b] : env)
          if (b->kind == FormulaKind::Atom && b->name == "P") ps.emplace_back(x, b->args[0]);
        auto [x, m] = ps[pick(ps.size())];
        return witness(m, var(x), a);
      }
      default:
        throw std::logic_error("no closed inhabitant for " + to_string(a));
    }
  }

  Term gen(const Formula& a, int d, const Env& env) {
    if (d <= 0) return close(a, d, env);
    std::vector<std::function<Term()>> opts;
    opts.push_back([&] { return close(a, d, env); });
    opts.push_back([&] { return close(a, d, env); });
    opts.push_back([&] {  // elimination of an arrow
      Formula b = type(1);
      return app(gen(imp(b, a), d - 1, env), gen(b, d - 1, env));
    });
    opts.push_back([&] {  // projection
      Formula b = type(1);
      return chance(0.5) ? proj(gen(conj(a, b), d - 1, env), 0) : proj(gen(conj(b, a), d - 1, env), 1);
    });
    opts.push_back([&] {
      Formula b = type(1), c = type(1);
      std::string x = fresh("x"), y = fresh("y");
      Env ex = env, ey = env;
      ex.emplace_back(x, b);
      ey.emplace_back(y, c);
      return case_of(gen(disj(b, c), d - 1, env), x, b, gen(a, d - 1, ex), y, c, gen(a, d - 1, ey));
    });
    opts.push_back([&] {
      std::string al = fresh("b"), x = fresh("x");
      Env e = env;
      e.emplace_back(x, atom("P", {ind_var(al)}));
      return ex_case(gen(exists_p(), d - 1, env), al, x, atom("P", {ind_var(al)}), gen(a, d - 1, e));
    });
    for (int k = 0; k < 2; ++k)
      opts.push_back([&] {  // communication channel
        Formula b = base_atom(), c = chance(0.7) ? base_atom() : type(1);
        std::string ch = fresh("a");
        Env l = env, r = env;
        l.emplace_back(ch, imp(b, c));
        r.emplace_back(ch, imp(c, b));
        return par(ch, gen(a, d - 1, l), gen(a, d - 1, r), imp(b, c), imp(c, b));
      });
    std::vector<std::pair<std::string, Formula>> fns;
    for (const auto& [x, b] : env)
      if (b->kind == FormulaKind::Imp && alpha_equal(b->rhs, a)) fns.emplace_back(x, b->lhs);
    bool channel = false;
    for (const auto& f : fns) channel = channel || f.first[0] == 'a';
    if (!fns.empty())
      for (int k = 0; k < (channel ? 8 : 3); ++k)
        opts.push_back([&] {
          auto [f, dom] = fns[pick(fns.size())];
          for (const auto& g : fns)
            if (channel && g.first[0] == 'a' && chance(0.7)) std::tie(f, dom) = g;
          return app(var(f), gen(dom, d - 1, env));
        });
    if (a->kind == FormulaKind::Atom)
      opts.push_back([&] { return efq(app(var("n0"), gen(atom("P", {ind_fun("c0")}), d - 1, env)), a); });
    return opts[pick(opts.size())]();
  }
};

struct RandomCase {
  Term term;
  Formula type;
};

/// `count` well-typed terms of depth at most `max_depth`, deterministic
/// in `seed`.
inline std::vector<RandomCase> random_terms(std::size_t count, std::size_t max_depth, unsigned seed) {
  RandomTerms gen(seed);
  std::vector<RandomCase> out;
  while (out.size() < count) {
    Formula a = gen.type(2);
    Term t = gen.term(a, 4);
    if (depth(t) > max_depth) continue;
    out.push_back({t, a});
  }
  return out;
}

}  // namespace dlc::testkit
