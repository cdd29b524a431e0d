#pragma once

// Capture-avoiding substitution for the three binding sorts (proof
// variables, individual variables, predicate variables), alpha-equivalence
// and canonical renaming.

#include <string>
#include <utility>
#include <vector>

#include "dlc/syntax.hpp"

namespace dlc {

/// `base` if unused, otherwise base', base'', base''', base_4, ...
inline std::string fresh_name(const std::string& base, const NameSet& avoid) {
  if (!avoid.count(base)) return base;
  std::string root = base;
  while (root.size() > 1 && root.back() == '\'') root.pop_back();
  for (int k = 1;; ++k) {
    std::string candidate = k <= 3 ? root + std::string(k, '\'') : root + "_" + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

inline NameSet unite(NameSet a, const NameSet& b) {
  merge_into(a, b);
  return a;
}

// ---------------------------------------------------------------------------
// Individual substitution m[n/α] on terms and formulas

inline IndTerm subst_ind(const IndTerm& t, const std::string& alpha, const IndTerm& m) {
  if (!t->free_vars.count(alpha)) return t;
  if (t->is_var()) return m;
  std::vector<IndTerm> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(subst_ind(a, alpha, m));
  return ind_fun(t->name, std::move(args));
}

inline Formula subst_ind(const Formula& f, const std::string& alpha, const IndTerm& m);

namespace detail {

inline std::vector<IndTerm> subst_args(const std::vector<IndTerm>& args, const std::string& alpha,
                                       const IndTerm& m) {
  std::vector<IndTerm> out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back(subst_ind(a, alpha, m));
  return out;
}

}  // namespace detail

inline Formula subst_ind(const Formula& f, const std::string& alpha, const IndTerm& m) {
  if (!f || !f->free_ind.count(alpha)) return f;
  switch (f->kind) {
    case FormulaKind::Atom:
      return atom(f->name, detail::subst_args(f->args, alpha, m));
    case FormulaKind::PredVar:
      return pred_var_atom(f->name, subst_ind(f->args[0], alpha, m));
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
      return binary(f->kind, subst_ind(f->lhs, alpha, m), subst_ind(f->rhs, alpha, m));
    case FormulaKind::ForallInd:
    case FormulaKind::ExistsInd: {
      std::string beta = f->name;
      Formula body = f->body();
      if (m->free_vars.count(beta)) {
        NameSet avoid = unite(m->free_vars, body->free_ind);
        avoid.insert(alpha);
        std::string fresh = fresh_name(beta, avoid);
        body = subst_ind(body, beta, ind_var(fresh));
        beta = fresh;
      }
      return quantifier(f->kind, beta, subst_ind(body, alpha, m));
    }
    case FormulaKind::ForallPred:
      return forall_pred(f->name, subst_ind(f->body(), alpha, m));
    case FormulaKind::Falsum:
      break;
  }
  return f;
}

/// Instance B[m/α] of a predicate abstraction λα.B.
inline Formula instantiate(const PredAbs& abs, const IndTerm& m) {
  return subst_ind(abs.body, abs.binder, m);
}

// ---------------------------------------------------------------------------
// Second-order substitution A[λα.B / X]

inline Formula subst_pred(const Formula& f, const std::string& X, const PredAbs& abs);

/// λb.Y(b), used to rename a predicate variable.
inline PredAbs pred_var_abs(const std::string& Y) { return PredAbs{"b", pred_var_atom(Y, ind_var("b"))}; }

inline PredAbs subst_pred(const PredAbs& target, const std::string& X, const PredAbs& abs) {
  if (!target.body->free_pred.count(X)) return target;
  PredAbs out = target;
  NameSet abs_ind = abs.free_ind();
  if (abs_ind.count(out.binder)) {
    NameSet avoid = unite(abs_ind, out.body->free_ind);
    std::string fresh = fresh_name(out.binder, avoid);
    out.body = subst_ind(out.body, out.binder, ind_var(fresh));
    out.binder = fresh;
  }
  out.body = subst_pred(out.body, X, abs);
  return out;
}

inline Formula subst_pred(const Formula& f, const std::string& X, const PredAbs& abs) {
  if (!f || !f->free_pred.count(X)) return f;
  switch (f->kind) {
    case FormulaKind::PredVar:
      if (f->name == X) return instantiate(abs, f->args[0]);
      return f;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
      return binary(f->kind, subst_pred(f->lhs, X, abs), subst_pred(f->rhs, X, abs));
    case FormulaKind::ForallInd:
    case FormulaKind::ExistsInd: {
      std::string beta = f->name;
      Formula body = f->body();
      NameSet abs_ind = abs.free_ind();
      if (abs_ind.count(beta)) {
        std::string fresh = fresh_name(beta, unite(abs_ind, body->free_ind));
        body = subst_ind(body, beta, ind_var(fresh));
        beta = fresh;
      }
      return quantifier(f->kind, beta, subst_pred(body, X, abs));
    }
    case FormulaKind::ForallPred: {
      std::string Y = f->name;
      Formula body = f->body();
      if (abs.free_pred().count(Y)) {
        NameSet avoid = unite(abs.free_pred(), body->free_pred);
        avoid.insert(X);
        std::string fresh = fresh_name(Y, avoid);
        body = subst_pred(body, Y, pred_var_abs(fresh));
        Y = fresh;
      }
      return forall_pred(Y, subst_pred(body, X, abs));
    }
    default:
      return f;
  }
}

// ---------------------------------------------------------------------------
// Substitutions on proof terms

namespace detail {

inline std::shared_ptr<TermNode> clone(const Term& t) {
  auto n = std::make_shared<TermNode>(*t);
  n->free_proof.clear();
  n->free_ind.clear();
  n->free_pred.clear();
  return n;
}

}  // namespace detail

inline Term subst_ind(const Term& t, const std::string& alpha, const IndTerm& m);
inline Term subst_pred(const Term& t, const std::string& X, const PredAbs& abs);

/// Renames the individual binder of a node whose scope is `scoped` when
/// it would capture a free variable of `incoming`.
namespace detail {

inline Term rename_ind_in(const Term& t, const std::string& from, const std::string& to) {
  return subst_ind(t, from, ind_var(to));
}

inline Formula rename_ind_in(const Formula& f, const std::string& from, const std::string& to) {
  return subst_ind(f, from, ind_var(to));
}

}  // namespace detail

inline Term subst_ind(const Term& t, const std::string& alpha, const IndTerm& m) {
  if (!t->free_ind.count(alpha)) return t;
  auto n = detail::clone(t);
  switch (t->kind) {
    case TermKind::IndLam: {
      Term body = t->kid(0);
      if (m->free_vars.count(t->name)) {
        NameSet avoid = unite(m->free_vars, body->free_ind);
        avoid.insert(alpha);
        std::string fresh = fresh_name(t->name, avoid);
        body = detail::rename_ind_in(body, t->name, fresh);
        n->name = fresh;
      }
      n->kids[0] = subst_ind(body, alpha, m);
      return detail::finish(std::move(n));
    }
    case TermKind::ExCase: {
      n->kids[0] = subst_ind(t->kid(0), alpha, m);
      if (t->name == alpha) return detail::finish(std::move(n));
      Term body = t->kid(1);
      Formula ann = t->ann;
      if (m->free_vars.count(t->name)) {
        NameSet avoid = unite(m->free_vars, body->free_ind);
        if (ann) merge_into(avoid, ann->free_ind);
        avoid.insert(alpha);
        std::string fresh = fresh_name(t->name, avoid);
        body = detail::rename_ind_in(body, t->name, fresh);
        ann = detail::rename_ind_in(ann, t->name, fresh);
        n->name = fresh;
      }
      n->kids[1] = subst_ind(body, alpha, m);
      n->ann = subst_ind(ann, alpha, m);
      return detail::finish(std::move(n));
    }
    default:
      break;
  }
  n->ann = subst_ind(t->ann, alpha, m);
  n->ann2 = subst_ind(t->ann2, alpha, m);
  if (t->ind) n->ind = subst_ind(t->ind, alpha, m);
  if (t->pred && t->pred->binder != alpha) {
    PredAbs p = *t->pred;
    if (m->free_vars.count(p.binder)) {
      NameSet avoid = unite(m->free_vars, p.body->free_ind);
      avoid.insert(alpha);
      std::string fresh = fresh_name(p.binder, avoid);
      p.body = subst_ind(p.body, p.binder, ind_var(fresh));
      p.binder = fresh;
    }
    p.body = subst_ind(p.body, alpha, m);
    n->pred = p;
  }
  for (auto& k : n->kids) k = subst_ind(k, alpha, m);
  return detail::finish(std::move(n));
}

/// t[u/x], renaming binders of t that would capture free variables of u.
inline Term subst_proof(const Term& t, const std::string& x, const Term& u) {
  if (!t->free_proof.count(x)) return t;
  if (t->kind == TermKind::Var) return u;

  // Binder y over `scope`; returns the (possibly renamed) binder and scope.
  auto enter = [&](const std::string& y, const Term& scope) -> std::pair<std::string, Term> {
    if (y == x || !scope->free_proof.count(x) || !u->free_proof.count(y)) return {y, scope};
    NameSet avoid = unite(u->free_proof, scope->free_proof);
    avoid.insert(x);
    std::string fresh = fresh_name(y, avoid);
    return {fresh, subst_proof(scope, y, var(fresh))};
  };
  auto inside = [&](const std::string& y, const Term& scope) {
    return y == x ? scope : subst_proof(scope, x, u);
  };

  auto n = detail::clone(t);
  switch (t->kind) {
    case TermKind::Lam: {
      auto [y, body] = enter(t->name, t->kid(0));
      n->name = y;
      n->kids[0] = inside(y, body);
      return detail::finish(std::move(n));
    }
    case TermKind::Case: {
      n->kids[0] = subst_proof(t->kid(0), x, u);
      auto [y1, b1] = enter(t->name, t->kid(1));
      auto [y2, b2] = enter(t->name2, t->kid(2));
      n->name = y1;
      n->name2 = y2;
      n->kids[1] = inside(y1, b1);
      n->kids[2] = inside(y2, b2);
      return detail::finish(std::move(n));
    }
    case TermKind::ExCase: {
      n->kids[0] = subst_proof(t->kid(0), x, u);
      Term body = t->kid(1);
      std::string alpha = t->name;
      Formula ann = t->ann;
      if (t->name2 != x && body->free_proof.count(x) && u->free_ind.count(alpha)) {
        NameSet avoid = unite(u->free_ind, body->free_ind);
        if (ann) merge_into(avoid, ann->free_ind);
        std::string fresh = fresh_name(alpha, avoid);
        body = detail::rename_ind_in(body, alpha, fresh);
        ann = detail::rename_ind_in(ann, alpha, fresh);
        alpha = fresh;
      }
      auto [y, b] = enter(t->name2, body);
      n->name = alpha;
      n->ann = ann;
      n->name2 = y;
      n->kids[1] = inside(y, b);
      return detail::finish(std::move(n));
    }
    case TermKind::IndLam: {
      Term body = t->kid(0);
      if (u->free_ind.count(t->name)) {
        std::string fresh = fresh_name(t->name, unite(u->free_ind, body->free_ind));
        body = detail::rename_ind_in(body, t->name, fresh);
        n->name = fresh;
      }
      n->kids[0] = subst_proof(body, x, u);
      return detail::finish(std::move(n));
    }
    case TermKind::Par: {
      std::string a = t->name;
      Term l = t->kid(0), r = t->kid(1);
      if (u->free_proof.count(a)) {
        NameSet avoid = unite(u->free_proof, unite(l->free_proof, r->free_proof));
        avoid.insert(x);
        std::string fresh = fresh_name(a, avoid);
        l = subst_proof(l, a, var(fresh));
        r = subst_proof(r, a, var(fresh));
        a = fresh;
      }
      n->name = a;
      n->kids[0] = subst_proof(l, x, u);
      n->kids[1] = subst_proof(r, x, u);
      return detail::finish(std::move(n));
    }
    case TermKind::PredLam: {
      Term body = t->kid(0);
      if (u->free_pred.count(t->name)) {
        std::string fresh = fresh_name(t->name, unite(u->free_pred, body->free_pred));
        body = subst_pred(body, t->name, pred_var_abs(fresh));
        n->name = fresh;
      }
      n->kids[0] = subst_proof(body, x, u);
      return detail::finish(std::move(n));
    }
    default:
      for (auto& k : n->kids) k = subst_proof(k, x, u);
      return detail::finish(std::move(n));
  }
}

/// u[λα.B / X] on every formula inside a proof term.
inline Term subst_pred(const Term& t, const std::string& X, const PredAbs& abs) {
  if (!t->free_pred.count(X)) return t;
  auto n = detail::clone(t);
  NameSet abs_ind = abs.free_ind();
  switch (t->kind) {
    case TermKind::IndLam: {
      Term body = t->kid(0);
      if (abs_ind.count(t->name)) {
        std::string fresh = fresh_name(t->name, unite(abs_ind, body->free_ind));
        body = detail::rename_ind_in(body, t->name, fresh);
        n->name = fresh;
      }
      n->kids[0] = subst_pred(body, X, abs);
      return detail::finish(std::move(n));
    }
    case TermKind::ExCase: {
      n->kids[0] = subst_pred(t->kid(0), X, abs);
      Term body = t->kid(1);
      Formula ann = t->ann;
      if (abs_ind.count(t->name)) {
        NameSet avoid = unite(abs_ind, body->free_ind);
        if (ann) merge_into(avoid, ann->free_ind);
        std::string fresh = fresh_name(t->name, avoid);
        body = detail::rename_ind_in(body, t->name, fresh);
        ann = detail::rename_ind_in(ann, t->name, fresh);
        n->name = fresh;
      }
      n->kids[1] = subst_pred(body, X, abs);
      n->ann = subst_pred(ann, X, abs);
      return detail::finish(std::move(n));
    }
    case TermKind::PredLam: {
      if (t->name == X) return t;
      Term body = t->kid(0);
      if (abs.free_pred().count(t->name)) {
        NameSet avoid = unite(abs.free_pred(), body->free_pred);
        avoid.insert(X);
        std::string fresh = fresh_name(t->name, avoid);
        body = subst_pred(body, t->name, pred_var_abs(fresh));
        n->name = fresh;
      }
      n->kids[0] = subst_pred(body, X, abs);
      return detail::finish(std::move(n));
    }
    default:
      break;
  }
  n->ann = subst_pred(t->ann, X, abs);
  n->ann2 = subst_pred(t->ann2, X, abs);
  if (t->pred) n->pred = subst_pred(*t->pred, X, abs);
  for (auto& k : n->kids) k = subst_pred(k, X, abs);
  return detail::finish(std::move(n));
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace detail {

class AlphaEq {
 public:
  bool eq(const IndTerm& a, const IndTerm& b) {
    if (a->kind != b->kind) return false;
    if (a->is_var()) return same(ind_, a->name, b->name);
    if (a->name != b->name || a->args.size() != b->args.size()) return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
      if (!eq(a->args[i], b->args[i])) return false;
    return true;
  }

  bool eq(const Formula& a, const Formula& b) {
    if (!a || !b) return !a && !b;
    if (a == b && bound_free()) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case FormulaKind::Falsum:
        return true;
      case FormulaKind::Atom:
        if (a->name != b->name || a->args.size() != b->args.size()) return false;
        for (std::size_t i = 0; i < a->args.size(); ++i)
          if (!eq(a->args[i], b->args[i])) return false;
        return true;
      case FormulaKind::PredVar:
        return same(pred_, a->name, b->name) && eq(a->args[0], b->args[0]);
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Imp:
        return eq(a->lhs, b->lhs) && eq(a->rhs, b->rhs);
      case FormulaKind::ForallInd:
      case FormulaKind::ExistsInd:
        return scoped(ind_, a->name, b->name, [&] { return eq(a->body(), b->body()); });
      case FormulaKind::ForallPred:
        return scoped(pred_, a->name, b->name, [&] { return eq(a->body(), b->body()); });
    }
    return false;
  }

  bool eq(const PredAbs& a, const PredAbs& b) {
    return scoped(ind_, a.binder, b.binder, [&] { return eq(a.body, b.body); });
  }

  bool eq(const Term& a, const Term& b) {
    if (a->kind != b->kind || a->kids.size() != b->kids.size()) return false;
    switch (a->kind) {
      case TermKind::Var:
        return same(proof_, a->name, b->name);
      case TermKind::Lam:
        return eq(a->ann, b->ann) &&
               scoped(proof_, a->name, b->name, [&] { return eq(a->kid(0), b->kid(0)); });
      case TermKind::Proj:
        return a->index == b->index && eq(a->kid(0), b->kid(0));
      case TermKind::Inj:
        return a->index == b->index && eq(a->ann, b->ann) && eq(a->kid(0), b->kid(0));
      case TermKind::Case:
        return eq(a->kid(0), b->kid(0)) && eq(a->ann, b->ann) && eq(a->ann2, b->ann2) &&
               scoped(proof_, a->name, b->name, [&] { return eq(a->kid(1), b->kid(1)); }) &&
               scoped(proof_, a->name2, b->name2, [&] { return eq(a->kid(2), b->kid(2)); });
      case TermKind::IndLam:
        return scoped(ind_, a->name, b->name, [&] { return eq(a->kid(0), b->kid(0)); });
      case TermKind::IndApp:
        return eq(a->ind, b->ind) && eq(a->kid(0), b->kid(0));
      case TermKind::Witness:
        return eq(a->ind, b->ind) && eq(a->ann, b->ann) && eq(a->kid(0), b->kid(0));
      case TermKind::ExCase:
        return eq(a->kid(0), b->kid(0)) && scoped(ind_, a->name, b->name, [&] {
                 return eq(a->ann, b->ann) &&
                        scoped(proof_, a->name2, b->name2, [&] { return eq(a->kid(1), b->kid(1)); });
               });
      case TermKind::Efq:
      case TermKind::Abort:
        return eq(a->ann, b->ann) && (a->kids.empty() || eq(a->kid(0), b->kid(0)));
      case TermKind::Par:
        return eq(a->ann, b->ann) && eq(a->ann2, b->ann2) && scoped(proof_, a->name, b->name, [&] {
                 return eq(a->kid(0), b->kid(0)) && eq(a->kid(1), b->kid(1));
               });
      case TermKind::PredLam:
        return scoped(pred_, a->name, b->name, [&] { return eq(a->kid(0), b->kid(0)); });
      case TermKind::PredApp:
        return eq(*a->pred, *b->pred) && eq(a->kid(0), b->kid(0));
      case TermKind::App:
      case TermKind::Pair:
        return eq(a->kid(0), b->kid(0)) && eq(a->kid(1), b->kid(1));
    }
    return false;
  }

 private:
  using Env = std::vector<std::pair<std::string, std::string>>;

  bool bound_free() const { return ind_.empty() && pred_.empty() && proof_.empty(); }

  static bool same(const Env& env, const std::string& l, const std::string& r) {
    int li = -1, ri = -1;
    for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i) {
      if (li < 0 && env[i].first == l) li = i;
      if (ri < 0 && env[i].second == r) ri = i;
    }
    if (li < 0 && ri < 0) return l == r;
    return li == ri;
  }

  template <class F>
  static bool scoped(Env& env, const std::string& l, const std::string& r, F&& body) {
    env.emplace_back(l, r);
    bool ok = body();
    env.pop_back();
    return ok;
  }

  Env ind_, pred_, proof_;
};

}  // namespace detail

inline bool alpha_equal(const Formula& a, const Formula& b) { return detail::AlphaEq{}.eq(a, b); }
inline bool alpha_equal(const Term& a, const Term& b) { return detail::AlphaEq{}.eq(a, b); }
inline bool alpha_equal(const IndTerm& a, const IndTerm& b) { return detail::AlphaEq{}.eq(a, b); }
inline bool alpha_equal(const PredAbs& a, const PredAbs& b) { return detail::AlphaEq{}.eq(a, b); }

// ---------------------------------------------------------------------------
// Canonical renaming: every proof-term-level binder gets a name distinct
// from all other binders and from every free variable. Names already
// satisfying this are kept, so the operation is idempotent.

namespace detail {

inline void collect_names(const IndTerm& t, NameSet& out) {
  out.insert(t->name);
  for (const auto& a : t->args) collect_names(a, out);
}

inline void collect_names(const Formula& f, NameSet& out) {
  if (!f) return;
  if (!f->name.empty()) out.insert(f->name);
  for (const auto& a : f->args) collect_names(a, out);
  collect_names(f->lhs, out);
  collect_names(f->rhs, out);
}

inline void collect_names(const Term& t, NameSet& out) {
  if (!t->name.empty()) out.insert(t->name);
  if (!t->name2.empty()) out.insert(t->name2);
  collect_names(t->ann, out);
  collect_names(t->ann2, out);
  if (t->ind) collect_names(t->ind, out);
  if (t->pred) {
    out.insert(t->pred->binder);
    collect_names(t->pred->body, out);
  }
  for (const auto& k : t->kids) collect_names(k, out);
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const Term& t) {
    claimed_ = unite(t->free_proof, unite(t->free_ind, t->free_pred));
    collect_names(t, all_);
  }

  Term run(const Term& t) {
    auto n = clone(t);
    switch (t->kind) {
      case TermKind::Lam:
        n->name = claim(t->name);
        n->kids[0] = run(subst_proof(t->kid(0), t->name, var(n->name)));
        return finish(std::move(n));
      case TermKind::Case: {
        n->kids[0] = run(t->kid(0));
        n->name = claim(t->name);
        n->kids[1] = run(subst_proof(t->kid(1), t->name, var(n->name)));
        n->name2 = claim(t->name2);
        n->kids[2] = run(subst_proof(t->kid(2), t->name2, var(n->name2)));
        return finish(std::move(n));
      }
      case TermKind::IndLam:
        n->name = claim(t->name);
        n->kids[0] = run(subst_ind(t->kid(0), t->name, ind_var(n->name)));
        return finish(std::move(n));
      case TermKind::ExCase: {
        n->kids[0] = run(t->kid(0));
        n->name = claim(t->name);
        Term body = subst_ind(t->kid(1), t->name, ind_var(n->name));
        n->ann = subst_ind(t->ann, t->name, ind_var(n->name));
        n->name2 = claim(t->name2);
        n->kids[1] = run(subst_proof(body, t->name2, var(n->name2)));
        return finish(std::move(n));
      }
      case TermKind::Par: {
        n->name = claim(t->name);
        n->kids[0] = run(subst_proof(t->kid(0), t->name, var(n->name)));
        n->kids[1] = run(subst_proof(t->kid(1), t->name, var(n->name)));
        return finish(std::move(n));
      }
      case TermKind::PredLam:
        n->name = claim(t->name);
        n->kids[0] = run(subst_pred(t->kid(0), t->name, pred_var_abs(n->name)));
        return finish(std::move(n));
      default:
        for (auto& k : n->kids) k = run(k);
        return finish(std::move(n));
    }
  }

 private:
  std::string claim(const std::string& name) {
    std::string chosen = claimed_.count(name) ? fresh_name(name, unite(claimed_, all_)) : name;
    claimed_.insert(chosen);
    all_.insert(chosen);
    return chosen;
  }

  NameSet claimed_;
  NameSet all_;
};

}  // namespace detail

inline Term canonicalize(const Term& t) { return detail::Canonicalizer(t).run(t); }

/// Drops type annotations (binder types, injection/witness/efq/abort
/// results, par hypotheses). Predicate arguments are kept.
inline Term erase_annotations(const Term& t) {
  auto n = detail::clone(t);
  n->ann = nullptr;
  n->ann2 = nullptr;
  for (auto& k : n->kids) k = erase_annotations(k);
  return detail::finish(std::move(n));
}

}  // namespace dlc
