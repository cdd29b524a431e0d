#pragma once

// Abstract syntax for individual terms, formulas and proof terms of
// first- and second-order Dummett logic. All nodes are immutable and shared;
// free-variable sets and sizes are computed once at construction.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dlc {

using NameSet = std::set<std::string>;

inline void merge_into(NameSet& dst, const NameSet& src) { dst.insert(src.begin(), src.end()); }

inline NameSet without(NameSet s, const std::string& name) {
  s.erase(name);
  return s;
}

// ---------------------------------------------------------------------------
// Individual terms

enum class IndKind { Var, Fun };

struct IndTermNode;
using IndTerm = std::shared_ptr<const IndTermNode>;

/// A variable, or a function symbol applied to arguments (constants are
/// 0-ary function symbols).
struct IndTermNode {
  IndKind kind = IndKind::Var;
  std::string name;
  std::vector<IndTerm> args;
  NameSet free_vars;

  bool is_var() const { return kind == IndKind::Var; }
};

inline IndTerm ind_var(std::string name) {
  auto n = std::make_shared<IndTermNode>();
  n->kind = IndKind::Var;
  n->free_vars.insert(name);
  n->name = std::move(name);
  return n;
}

inline IndTerm ind_fun(std::string name, std::vector<IndTerm> args = {}) {
  auto n = std::make_shared<IndTermNode>();
  n->kind = IndKind::Fun;
  n->name = std::move(name);
  for (const auto& a : args) merge_into(n->free_vars, a->free_vars);
  n->args = std::move(args);
  return n;
}

// ---------------------------------------------------------------------------
// Formulas

enum class FormulaKind { Atom, PredVar, Falsum, And, Or, Imp, ForallInd, ExistsInd, ForallPred };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  FormulaKind kind = FormulaKind::Falsum;
  // Predicate symbol for Atom, predicate variable for PredVar, bound
  // variable for the three quantifiers.
  std::string name;
  std::vector<IndTerm> args;
  Formula lhs;  // left operand, or quantifier body
  Formula rhs;
  NameSet free_ind;
  NameSet free_pred;
  std::size_t size = 1;

  const Formula& body() const { return lhs; }
  bool is_atomic() const {
    return kind == FormulaKind::Atom || kind == FormulaKind::PredVar || kind == FormulaKind::Falsum;
  }
  bool is_binary() const {
    return kind == FormulaKind::And || kind == FormulaKind::Or || kind == FormulaKind::Imp;
  }
  bool is_quantifier() const {
    return kind == FormulaKind::ForallInd || kind == FormulaKind::ExistsInd ||
           kind == FormulaKind::ForallPred;
  }
};

namespace detail {

inline std::shared_ptr<FormulaNode> formula_node(FormulaKind kind) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  return n;
}

}  // namespace detail

inline Formula atom(std::string pred, std::vector<IndTerm> args = {}) {
  auto n = detail::formula_node(FormulaKind::Atom);
  n->name = std::move(pred);
  for (const auto& a : args) merge_into(n->free_ind, a->free_vars);
  n->args = std::move(args);
  return n;
}

inline Formula pred_var_atom(std::string var, IndTerm arg) {
  auto n = detail::formula_node(FormulaKind::PredVar);
  n->free_pred.insert(var);
  n->name = std::move(var);
  n->free_ind = arg->free_vars;
  n->args.push_back(std::move(arg));
  return n;
}

inline Formula falsum() {
  static const Formula bot = detail::formula_node(FormulaKind::Falsum);
  return bot;
}

inline Formula binary(FormulaKind kind, Formula a, Formula b) {
  auto n = detail::formula_node(kind);
  n->free_ind = a->free_ind;
  merge_into(n->free_ind, b->free_ind);
  n->free_pred = a->free_pred;
  merge_into(n->free_pred, b->free_pred);
  n->size = 1 + a->size + b->size;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

inline Formula conj(Formula a, Formula b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
inline Formula imp(Formula a, Formula b) { return binary(FormulaKind::Imp, std::move(a), std::move(b)); }
inline Formula neg(Formula a) { return imp(std::move(a), falsum()); }

inline Formula quantifier(FormulaKind kind, std::string var, Formula body) {
  auto n = detail::formula_node(kind);
  if (kind == FormulaKind::ForallPred) {
    n->free_ind = body->free_ind;
    n->free_pred = without(body->free_pred, var);
  } else {
    n->free_ind = without(body->free_ind, var);
    n->free_pred = body->free_pred;
  }
  n->size = 1 + body->size;
  n->name = std::move(var);
  n->lhs = std::move(body);
  return n;
}

inline Formula forall_ind(std::string var, Formula body) {
  return quantifier(FormulaKind::ForallInd, std::move(var), std::move(body));
}
inline Formula exists_ind(std::string var, Formula body) {
  return quantifier(FormulaKind::ExistsInd, std::move(var), std::move(body));
}
inline Formula forall_pred(std::string var, Formula body) {
  return quantifier(FormulaKind::ForallPred, std::move(var), std::move(body));
}

/// Predicate abstraction λα.B, the argument of second-order instantiation.
struct PredAbs {
  std::string binder;
  Formula body;

  NameSet free_ind() const { return without(body->free_ind, binder); }
  const NameSet& free_pred() const { return body->free_pred; }
};

/// True when the formula mentions predicate variables or second-order
/// quantifiers.
inline bool is_second_order(const Formula& f) {
  if (!f->free_pred.empty()) return true;
  switch (f->kind) {
    case FormulaKind::ForallPred:
      return true;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
      return is_second_order(f->lhs) || is_second_order(f->rhs);
    case FormulaKind::ForallInd:
    case FormulaKind::ExistsInd:
      return is_second_order(f->lhs);
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Proof terms

enum class TermKind {
  Var,
  Lam,
  App,
  Pair,
  Proj,
  Inj,
  Case,
  IndLam,
  IndApp,
  Witness,
  ExCase,
  Efq,
  Par,
  Abort,
  PredLam,
  PredApp,
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

/// One proof-term node. Field use by kind:
///
///   Var      name
///   Lam      name=x, ann=type of x (optional in untyped mode), kids={body}
///   App      kids={function, argument}
///   Pair     kids={left, right}
///   Proj     index, kids={pair}
///   Inj      index, ann=resulting disjunction (optional), kids={body}
///   Case     name=x, ann=type of x, name2=y, ann2=type of y,
///            kids={scrutinee, left branch, right branch}
///   IndLam   name=α, kids={body}
///   IndApp   ind=m, kids={function}
///   Witness  ind=m, ann=resulting existential (optional), kids={body}
///   ExCase   name=α, name2=x, ann=type of x, kids={scrutinee, body}
///   Efq      ann=atomic target, kids={proof of ⊥}
///   Par      name=a, ann=A→B (left hypothesis), ann2=B→A (right), kids={u, v}
///   Abort    ann=A→B
///   PredLam  name=X, kids={body}
///   PredApp  pred=λα.B, kids={function}
struct TermNode {
  TermKind kind = TermKind::Var;
  std::string name;
  std::string name2;
  Formula ann;
  Formula ann2;
  int index = 0;
  IndTerm ind;
  std::optional<PredAbs> pred;
  std::vector<Term> kids;

  NameSet free_proof;
  NameSet free_ind;
  NameSet free_pred;
  std::size_t size = 1;

  const Term& kid(std::size_t i) const { return kids.at(i); }

  /// Elimination nodes whose first child is the head being eliminated.
  bool is_elim() const {
    switch (kind) {
      case TermKind::App:
      case TermKind::Proj:
      case TermKind::Case:
      case TermKind::IndApp:
      case TermKind::ExCase:
      case TermKind::PredApp:
        return true;
      default:
        return false;
    }
  }
};

namespace detail {

inline void add_formula(TermNode& n, const Formula& f) {
  if (!f) return;
  merge_into(n.free_ind, f->free_ind);
  merge_into(n.free_pred, f->free_pred);
}

// Computes the cached free-variable sets and size from the node's fields.
inline Term finish(std::shared_ptr<TermNode> n) {
  auto& fp = n->free_proof;
  auto& fi = n->free_ind;
  auto& fx = n->free_pred;
  std::size_t size = 1;
  for (const auto& k : n->kids) size += k->size;
  if (n->ann) size += n->ann->size;
  if (n->ann2) size += n->ann2->size;
  if (n->pred) size += n->pred->body->size;
  n->size = size;

  switch (n->kind) {
    case TermKind::Var:
      fp.insert(n->name);
      break;
    case TermKind::Lam: {
      const auto& b = n->kid(0);
      fp = without(b->free_proof, n->name);
      fi = b->free_ind;
      fx = b->free_pred;
      add_formula(*n, n->ann);
      break;
    }
    case TermKind::Case: {
      const auto& s = n->kid(0);
      const auto& l = n->kid(1);
      const auto& r = n->kid(2);
      fp = s->free_proof;
      merge_into(fp, without(l->free_proof, n->name));
      merge_into(fp, without(r->free_proof, n->name2));
      for (const auto& k : n->kids) {
        merge_into(fi, k->free_ind);
        merge_into(fx, k->free_pred);
      }
      add_formula(*n, n->ann);
      add_formula(*n, n->ann2);
      break;
    }
    case TermKind::IndLam: {
      const auto& b = n->kid(0);
      fp = b->free_proof;
      fi = without(b->free_ind, n->name);
      fx = b->free_pred;
      break;
    }
    case TermKind::ExCase: {
      const auto& s = n->kid(0);
      const auto& b = n->kid(1);
      fp = s->free_proof;
      merge_into(fp, without(b->free_proof, n->name2));
      NameSet scoped = b->free_ind;
      if (n->ann) merge_into(scoped, n->ann->free_ind);
      scoped.erase(n->name);
      fi = s->free_ind;
      merge_into(fi, scoped);
      fx = s->free_pred;
      merge_into(fx, b->free_pred);
      if (n->ann) merge_into(fx, n->ann->free_pred);
      break;
    }
    case TermKind::Par: {
      const auto& u = n->kid(0);
      const auto& v = n->kid(1);
      fp = u->free_proof;
      merge_into(fp, v->free_proof);
      fp.erase(n->name);
      fi = u->free_ind;
      merge_into(fi, v->free_ind);
      fx = u->free_pred;
      merge_into(fx, v->free_pred);
      add_formula(*n, n->ann);
      add_formula(*n, n->ann2);
      break;
    }
    case TermKind::PredLam: {
      const auto& b = n->kid(0);
      fp = b->free_proof;
      fi = b->free_ind;
      fx = without(b->free_pred, n->name);
      break;
    }
    default: {
      for (const auto& k : n->kids) {
        merge_into(fp, k->free_proof);
        merge_into(fi, k->free_ind);
        merge_into(fx, k->free_pred);
      }
      add_formula(*n, n->ann);
      add_formula(*n, n->ann2);
      if (n->ind) merge_into(fi, n->ind->free_vars);
      if (n->pred) {
        merge_into(fi, n->pred->free_ind());
        merge_into(fx, n->pred->free_pred());
      }
      break;
    }
  }
  return n;
}

inline std::shared_ptr<TermNode> term_node(TermKind kind) {
  auto n = std::make_shared<TermNode>();
  n->kind = kind;
  return n;
}

}  // namespace detail

inline Term var(std::string name) {
  auto n = detail::term_node(TermKind::Var);
  n->name = std::move(name);
  return detail::finish(std::move(n));
}

inline Term lam(std::string x, Formula ann, Term body) {
  auto n = detail::term_node(TermKind::Lam);
  n->name = std::move(x);
  n->ann = std::move(ann);
  n->kids = {std::move(body)};
  return detail::finish(std::move(n));
}

inline Term app(Term f, Term a) {
  auto n = detail::term_node(TermKind::App);
  n->kids = {std::move(f), std::move(a)};
  return detail::finish(std::move(n));
}

inline Term pair(Term l, Term r) {
  auto n = detail::term_node(TermKind::Pair);
  n->kids = {std::move(l), std::move(r)};
  return detail::finish(std::move(n));
}

inline Term proj(Term u, int i) {
  auto n = detail::term_node(TermKind::Proj);
  n->index = i;
  n->kids = {std::move(u)};
  return detail::finish(std::move(n));
}

inline Term inj(int i, Term u, Formula ann = nullptr) {
  auto n = detail::term_node(TermKind::Inj);
  n->index = i;
  n->ann = std::move(ann);
  n->kids = {std::move(u)};
  return detail::finish(std::move(n));
}

inline Term case_of(Term scrutinee, std::string x, Formula x_ann, Term left, std::string y,
                    Formula y_ann, Term right) {
  auto n = detail::term_node(TermKind::Case);
  n->name = std::move(x);
  n->ann = std::move(x_ann);
  n->name2 = std::move(y);
  n->ann2 = std::move(y_ann);
  n->kids = {std::move(scrutinee), std::move(left), std::move(right)};
  return detail::finish(std::move(n));
}

inline Term ind_lam(std::string alpha, Term body) {
  auto n = detail::term_node(TermKind::IndLam);
  n->name = std::move(alpha);
  n->kids = {std::move(body)};
  return detail::finish(std::move(n));
}

inline Term ind_app(Term f, IndTerm m) {
  auto n = detail::term_node(TermKind::IndApp);
  n->ind = std::move(m);
  n->kids = {std::move(f)};
  return detail::finish(std::move(n));
}

inline Term witness(IndTerm m, Term u, Formula ann = nullptr) {
  auto n = detail::term_node(TermKind::Witness);
  n->ind = std::move(m);
  n->ann = std::move(ann);
  n->kids = {std::move(u)};
  return detail::finish(std::move(n));
}

inline Term ex_case(Term scrutinee, std::string alpha, std::string x, Formula x_ann, Term body) {
  auto n = detail::term_node(TermKind::ExCase);
  n->name = std::move(alpha);
  n->name2 = std::move(x);
  n->ann = std::move(x_ann);
  n->kids = {std::move(scrutinee), std::move(body)};
  return detail::finish(std::move(n));
}

inline Term efq(Term u, Formula target = nullptr) {
  auto n = detail::term_node(TermKind::Efq);
  n->ann = std::move(target);
  n->kids = {std::move(u)};
  return detail::finish(std::move(n));
}

/// u ∥ₐ v. `left` is the hypothesis A→B discharged in u, `right` the dual
/// B→A discharged in v; both absent in untyped mode. A missing right
/// hypothesis is derived from an implicational left one.
inline Term par(std::string a, Term u, Term v, Formula left = nullptr, Formula right = nullptr) {
  if (left && !right && left->kind == FormulaKind::Imp) right = imp(left->rhs, left->lhs);
  auto n = detail::term_node(TermKind::Par);
  n->name = std::move(a);
  n->ann = std::move(left);
  n->ann2 = std::move(right);
  n->kids = {std::move(u), std::move(v)};
  return detail::finish(std::move(n));
}

inline Term abort_const(Formula ann = nullptr) {
  auto n = detail::term_node(TermKind::Abort);
  n->ann = std::move(ann);
  return detail::finish(std::move(n));
}

inline Term pred_lam(std::string X, Term body) {
  auto n = detail::term_node(TermKind::PredLam);
  n->name = std::move(X);
  n->kids = {std::move(body)};
  return detail::finish(std::move(n));
}

inline Term pred_app(Term f, PredAbs abs) {
  auto n = detail::term_node(TermKind::PredApp);
  n->pred = std::move(abs);
  n->kids = {std::move(f)};
  return detail::finish(std::move(n));
}

/// Copy of `t` with child `i` replaced; all other fields are kept.
inline Term with_kid(const Term& t, std::size_t i, Term k) {
  if (t->kids.at(i) == k) return t;
  auto n = std::make_shared<TermNode>(*t);
  n->kids[i] = std::move(k);
  n->free_proof.clear();
  n->free_ind.clear();
  n->free_pred.clear();
  return detail::finish(std::move(n));
}

inline NameSet free_proof_vars(const Term& t) { return t->free_proof; }

inline bool contains_abort(const Term& t) {
  if (t->kind == TermKind::Abort) return true;
  for (const auto& k : t->kids)
    if (contains_abort(k)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Signature

/// Declared individual constants, function symbols and predicate symbols.
/// ⊥ is built in and cannot be declared.
class Signature {
 public:
  struct Symbol {
    std::string name;
    int arity = 0;
  };

  static Signature default_signature() {
    Signature s;
    s.add_constant("c0");
    s.add_constant("c1");
    s.add_constant("c2");
    s.add_function("f", 1);
    s.add_predicate("P", 1);
    s.add_predicate("Q", 1);
    s.add_predicate("R", 2);
    return s;
  }

  void add_constant(const std::string& name) { add(constants_, name, 0, "constant"); }

  void add_function(const std::string& name, int arity) {
    if (arity < 1) throw std::invalid_argument("function symbol " + name + " needs arity >= 1");
    add(functions_, name, arity, "function");
  }

  void add_predicate(const std::string& name, int arity) {
    if (name == "bot") throw std::invalid_argument("bot is built in and cannot be redeclared");
    if (arity < 0) throw std::invalid_argument("negative arity for predicate " + name);
    add(predicates_, name, arity, "predicate");
  }

  bool is_constant(const std::string& n) const { return find(constants_, n) != nullptr; }
  std::optional<int> function_arity(const std::string& n) const {
    if (auto s = find(functions_, n)) return s->arity;
    return std::nullopt;
  }
  std::optional<int> predicate_arity(const std::string& n) const {
    if (auto s = find(predicates_, n)) return s->arity;
    return std::nullopt;
  }

  const std::vector<Symbol>& constants() const { return constants_; }
  const std::vector<Symbol>& functions() const { return functions_; }
  const std::vector<Symbol>& predicates() const { return predicates_; }

 private:
  static const Symbol* find(const std::vector<Symbol>& v, const std::string& n) {
    for (const auto& s : v)
      if (s.name == n) return &s;
    return nullptr;
  }

  void add(std::vector<Symbol>& v, const std::string& name, int arity, const char* what) {
    if (find(v, name)) throw std::invalid_argument(std::string("duplicate ") + what + " " + name);
    v.push_back({name, arity});
  }

  std::vector<Symbol> constants_;
  std::vector<Symbol> functions_;
  std::vector<Symbol> predicates_;
};

}  // namespace dlc
