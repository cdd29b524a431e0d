#pragma once

// Type checking for LC, LC* (abort), LC2 and LC2* (second order).
//
// Types of proof variables come from the context and from binder
// annotations; variable occurrences carry no annotation of their own.
// `typecheck` is pure inference over a fully annotated term. `elaborate`
// additionally pushes an expected type inward and fills in annotations
// that are determined by it (injections, witnesses, efq targets, lambda
// binders), returning the completed term.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dlc/printer.hpp"
#include "dlc/subst.hpp"
#include "dlc/syntax.hpp"

namespace dlc {

enum class Flavor { LC, LCStar, LC2, LC2Star };

inline bool admits_abort(Flavor f) { return f == Flavor::LCStar || f == Flavor::LC2Star; }
inline bool admits_second_order(Flavor f) { return f == Flavor::LC2 || f == Flavor::LC2Star; }

inline const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::LC: return "lc";
    case Flavor::LCStar: return "lcstar";
    case Flavor::LC2: return "lc2";
    case Flavor::LC2Star: return "lc2star";
  }
  return "?";
}

inline std::optional<Flavor> parse_flavor(const std::string& s) {
  if (s == "lc") return Flavor::LC;
  if (s == "lcstar") return Flavor::LCStar;
  if (s == "lc2") return Flavor::LC2;
  if (s == "lc2star") return Flavor::LC2Star;
  return std::nullopt;
}

enum class TypeErrorKind {
  UnboundVariable,
  AnnotationMismatch,
  MissingAnnotation,
  TypeMismatch,
  EigenvariableViolation,
  ParHypothesesNotDual,
  AbortNotAdmitted,
  SecondOrderNotAdmitted,
  EfqNonAtomicTarget,
};

inline const char* type_error_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::AnnotationMismatch: return "AnnotationMismatch";
    case TypeErrorKind::MissingAnnotation: return "MissingAnnotation";
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    case TypeErrorKind::EigenvariableViolation: return "EigenvariableViolation";
    case TypeErrorKind::ParHypothesesNotDual: return "ParHypothesesNotDual";
    case TypeErrorKind::AbortNotAdmitted: return "AbortNotAdmitted";
    case TypeErrorKind::SecondOrderNotAdmitted: return "SecondOrderNotAdmitted";
    case TypeErrorKind::EfqNonAtomicTarget: return "EfqNonAtomicTarget";
  }
  return "?";
}

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(type_error_name(kind)) + ": " + detail), kind_(kind) {}
  TypeErrorKind kind() const { return kind_; }

 private:
  TypeErrorKind kind_;
};

/// Hypotheses x₁:A₁, …, xₙ:Aₙ; one binding per name, kept in declaration order.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<std::pair<std::string, Formula>> entries) {
    for (const auto& [x, a] : entries) add(x, a);
  }

  Context& add(const std::string& x, Formula type) {
    if (find(x)) throw std::invalid_argument("hypothesis " + x + " declared twice");
    entries_.emplace_back(x, std::move(type));
    return *this;
  }

  Formula find(const std::string& x) const {
    for (const auto& [name, type] : entries_)
      if (name == x) return type;
    return nullptr;
  }

  const std::vector<std::pair<std::string, Formula>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, Formula>> entries_;
};

struct Typed {
  Term term;
  Formula type;
};

namespace detail {

class Typer {
 public:
  Typer(const Context& ctx, Flavor flavor, bool elaborate) : flavor_(flavor), elaborate_(elaborate) {
    for (const auto& [x, a] : ctx.entries()) {
      formula_ok(a);
      scope_.emplace_back(x, a);
    }
  }

  /// Adds a binding visible to everything checked afterwards (used for the
  /// communication variables enclosing a parallel process).
  void assume(const std::string& x, const Formula& a) { scope_.emplace_back(x, a); }

  Typed infer(const Term& t) {
    switch (t->kind) {
      case TermKind::Var: {
        Formula a = lookup(t->name);
        if (!a) fail(TypeErrorKind::UnboundVariable, t->name);
        return {t, a};
      }
      case TermKind::Lam: {
        if (!t->ann) fail(TypeErrorKind::MissingAnnotation, "binder " + t->name);
        formula_ok(t->ann);
        auto body = under(t->name, t->ann, [&] { return infer(t->kid(0)); });
        return {rebuild(t, {body.term}), imp(t->ann, body.type)};
      }
      case TermKind::App: {
        auto f = infer(t->kid(0));
        if (f.type->kind != FormulaKind::Imp)
          mismatch("function of implication type", f.type, t->kid(0));
        auto arg = check(t->kid(1), f.type->lhs);
        return {rebuild(t, {f.term, arg.term}), f.type->rhs};
      }
      case TermKind::Pair: {
        auto l = infer(t->kid(0));
        auto r = infer(t->kid(1));
        return {rebuild(t, {l.term, r.term}), conj(l.type, r.type)};
      }
      case TermKind::Proj: {
        auto u = infer(t->kid(0));
        if (u.type->kind != FormulaKind::And) mismatch("conjunction", u.type, t->kid(0));
        return {rebuild(t, {u.term}), t->index == 0 ? u.type->lhs : u.type->rhs};
      }
      case TermKind::Inj: {
        if (!t->ann) fail(TypeErrorKind::MissingAnnotation, "injection target in " + to_string(t));
        return check_inj(t, t->ann);
      }
      case TermKind::Case:
        return case_rule(t, nullptr);
      case TermKind::IndLam: {
        auto body = infer(t->kid(0));
        eigen_ind(t->name, body.term, "", "universal introduction");
        return {rebuild(t, {body.term}), forall_ind(t->name, body.type)};
      }
      case TermKind::IndApp: {
        auto f = infer(t->kid(0));
        if (f.type->kind != FormulaKind::ForallInd) mismatch("universal formula", f.type, t->kid(0));
        return {rebuild(t, {f.term}), subst_ind(f.type->body(), f.type->name, t->ind)};
      }
      case TermKind::Witness: {
        if (!t->ann) fail(TypeErrorKind::MissingAnnotation, "witness type in " + to_string(t));
        return check_witness(t, t->ann);
      }
      case TermKind::ExCase:
        return ex_case_rule(t, nullptr);
      case TermKind::Efq: {
        if (!t->ann) fail(TypeErrorKind::MissingAnnotation, "efq target in " + to_string(t));
        return check_efq(t, t->ann);
      }
      case TermKind::Par:
        return par_rule(t, nullptr);
      case TermKind::Abort: {
        if (!admits_abort(flavor_)) fail(TypeErrorKind::AbortNotAdmitted, "abort outside LC*");
        if (!t->ann) fail(TypeErrorKind::MissingAnnotation, "abort type");
        if (t->ann->kind != FormulaKind::Imp)
          fail(TypeErrorKind::AnnotationMismatch, "abort annotation " + to_string(t->ann) + " is not an implication");
        formula_ok(t->ann);
        return {t, t->ann};
      }
      case TermKind::PredLam: {
        second_order_ok();
        auto body = infer(t->kid(0));
        eigen_pred(t->name, body.term);
        return {rebuild(t, {body.term}), forall_pred(t->name, body.type)};
      }
      case TermKind::PredApp: {
        second_order_ok();
        formula_ok(t->pred->body);
        auto f = infer(t->kid(0));
        if (f.type->kind != FormulaKind::ForallPred)
          mismatch("second-order universal formula", f.type, t->kid(0));
        return {rebuild(t, {f.term}), subst_pred(f.type->body(), f.type->name, *t->pred)};
      }
    }
    fail(TypeErrorKind::TypeMismatch, "unknown term");
  }

  Typed check(const Term& t, const Formula& goal) {
    switch (t->kind) {
      case TermKind::Lam: {
        if (goal->kind != FormulaKind::Imp) break;
        Formula a = t->ann;
        if (!a && elaborate_) a = goal->lhs;
        if (!a) break;
        formula_ok(a);
        if (!alpha_equal(a, goal->lhs)) break;
        auto body = under(t->name, a, [&] { return check(t->kid(0), goal->rhs); });
        return {rebuild(t, {body.term}, a), goal};
      }
      case TermKind::Pair: {
        if (goal->kind != FormulaKind::And) break;
        auto l = check(t->kid(0), goal->lhs);
        auto r = check(t->kid(1), goal->rhs);
        return {rebuild(t, {l.term, r.term}), goal};
      }
      case TermKind::Inj:
        if (!t->ann && elaborate_) return check_inj(t, goal);
        break;
      case TermKind::Witness:
        if (!t->ann && elaborate_) return check_witness(t, goal);
        break;
      case TermKind::Efq:
        if (!t->ann && elaborate_) return check_efq(t, goal);
        break;
      case TermKind::Case:
        return case_rule(t, goal);
      case TermKind::ExCase:
        return ex_case_rule(t, goal);
      case TermKind::Par:
        return par_rule(t, goal);
      case TermKind::IndLam: {
        if (goal->kind != FormulaKind::ForallInd) break;
        Formula body_goal = subst_ind(goal->body(), goal->name, ind_var(t->name));
        auto body = check(t->kid(0), body_goal);
        eigen_ind(t->name, body.term, "", "universal introduction");
        Formula type = forall_ind(t->name, body.type);
        if (!alpha_equal(type, goal)) mismatch(to_string(goal), type, t);
        return {rebuild(t, {body.term}), goal};
      }
      case TermKind::PredLam: {
        if (goal->kind != FormulaKind::ForallPred) break;
        second_order_ok();
        Formula body_goal = subst_pred(goal->body(), goal->name, pred_var_abs(t->name));
        auto body = check(t->kid(0), body_goal);
        eigen_pred(t->name, body.term);
        Formula type = forall_pred(t->name, body.type);
        if (!alpha_equal(type, goal)) mismatch(to_string(goal), type, t);
        return {rebuild(t, {body.term}), goal};
      }
      default:
        break;
    }
    auto r = infer(t);
    if (!alpha_equal(r.type, goal)) mismatch(to_string(goal), r.type, t);
    return {r.term, goal};
  }

 private:
  [[noreturn]] static void fail(TypeErrorKind k, const std::string& detail) { throw TypeError(k, detail); }

  [[noreturn]] static void mismatch(const std::string& expected, const Formula& got, const Term& t) {
    fail(TypeErrorKind::TypeMismatch,
         "expected " + expected + " but " + to_string(t) + " has type " + to_string(got));
  }

  Formula lookup(const std::string& x) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == x) return it->second;
    return nullptr;
  }

  template <class F>
  Typed under(const std::string& x, const Formula& a, F&& body) {
    scope_.emplace_back(x, a);
    try {
      Typed r = body();
      scope_.pop_back();
      return r;
    } catch (...) {
      scope_.pop_back();
      throw;
    }
  }

  void second_order_ok() const {
    if (!admits_second_order(flavor_))
      fail(TypeErrorKind::SecondOrderNotAdmitted, "second-order construct outside LC2");
  }

  void formula_ok(const Formula& f) const {
    if (f && !admits_second_order(flavor_) && is_second_order(f))
      fail(TypeErrorKind::SecondOrderNotAdmitted, "formula " + to_string(f));
  }

  // Copy of t with new children and, optionally, a new binder annotation.
  static Term rebuild(const Term& t, std::vector<Term> kids, Formula ann = nullptr) {
    bool same = !ann || ann == t->ann;
    for (std::size_t i = 0; i < kids.size() && same; ++i) same = kids[i] == t->kids[i];
    if (same) return t;
    auto n = std::make_shared<TermNode>(*t);
    n->kids = std::move(kids);
    if (ann) n->ann = std::move(ann);
    n->free_proof.clear();
    n->free_ind.clear();
    n->free_pred.clear();
    return finish(std::move(n));
  }

  static Term with_ann(const Term& t, Formula ann, Formula ann2 = nullptr) {
    auto n = std::make_shared<TermNode>(*t);
    n->ann = std::move(ann);
    if (ann2) n->ann2 = std::move(ann2);
    n->free_proof.clear();
    n->free_ind.clear();
    n->free_pred.clear();
    return finish(std::move(n));
  }

  // α must not occur free in the types of the free proof variables of u
  // (other than `except`).
  void eigen_ind(const std::string& alpha, const Term& u, const std::string& except, const char* rule) const {
    for (const auto& x : u->free_proof) {
      if (x == except) continue;
      Formula a = lookup(x);
      if (a && a->free_ind.count(alpha))
        fail(TypeErrorKind::EigenvariableViolation, std::string(rule) + ": " + alpha +
                                                        " occurs free in the type " + to_string(a) + " of " + x);
    }
  }

  void eigen_pred(const std::string& X, const Term& u) const {
    for (const auto& x : u->free_proof) {
      Formula a = lookup(x);
      if (a && a->free_pred.count(X))
        fail(TypeErrorKind::EigenvariableViolation, "second-order introduction: " + X +
                                                        " occurs free in the type " + to_string(a) + " of " + x);
    }
  }

  Typed check_inj(const Term& t, const Formula& target) {
    if (target->kind != FormulaKind::Or)
      fail(t->ann ? TypeErrorKind::AnnotationMismatch : TypeErrorKind::TypeMismatch,
           "injection into non-disjunction " + to_string(target));
    formula_ok(target);
    if (t->ann && !alpha_equal(t->ann, target)) mismatch(to_string(target), t->ann, t);
    auto body = check(t->kid(0), t->index == 0 ? target->lhs : target->rhs);
    Term out = t->ann ? rebuild(t, {body.term}) : with_ann(rebuild(t, {body.term}), target);
    return {out, target};
  }

  Typed check_witness(const Term& t, const Formula& target) {
    if (target->kind != FormulaKind::ExistsInd)
      fail(t->ann ? TypeErrorKind::AnnotationMismatch : TypeErrorKind::TypeMismatch,
           "witness for non-existential " + to_string(target));
    formula_ok(target);
    if (t->ann && !alpha_equal(t->ann, target)) mismatch(to_string(target), t->ann, t);
    auto body = check(t->kid(0), subst_ind(target->body(), target->name, t->ind));
    Term out = t->ann ? rebuild(t, {body.term}) : with_ann(rebuild(t, {body.term}), target);
    return {out, target};
  }

  Typed check_efq(const Term& t, const Formula& target) {
    if (!target->is_atomic()) fail(TypeErrorKind::EfqNonAtomicTarget, to_string(target));
    formula_ok(target);
    if (t->ann && !alpha_equal(t->ann, target)) mismatch(to_string(target), t->ann, t);
    auto body = check(t->kid(0), falsum());
    Term out = t->ann ? rebuild(t, {body.term}) : with_ann(rebuild(t, {body.term}), target);
    return {out, target};
  }

  Typed case_rule(const Term& t, const Formula& goal) {
    auto s = infer(t->kid(0));
    if (s.type->kind != FormulaKind::Or) mismatch("disjunction", s.type, t->kid(0));
    const Formula& a = s.type->lhs;
    const Formula& b = s.type->rhs;
    if (t->ann && !alpha_equal(t->ann, a))
      fail(TypeErrorKind::AnnotationMismatch, t->name + " : " + to_string(t->ann) + " but scrutinee gives " + to_string(a));
    if (t->ann2 && !alpha_equal(t->ann2, b))
      fail(TypeErrorKind::AnnotationMismatch, t->name2 + " : " + to_string(t->ann2) + " but scrutinee gives " + to_string(b));
    Typed l = under(t->name, a, [&] { return goal ? check(t->kid(1), goal) : infer(t->kid(1)); });
    Typed r = under(t->name2, b, [&] { return check(t->kid(2), l.type); });
    auto n = std::make_shared<TermNode>(*t);
    n->kids = {s.term, l.term, r.term};
    if (!n->ann) n->ann = a;
    if (!n->ann2) n->ann2 = b;
    n->free_proof.clear();
    n->free_ind.clear();
    n->free_pred.clear();
    return {finish(std::move(n)), l.type};
  }

  Typed ex_case_rule(const Term& t, const Formula& goal) {
    auto s = infer(t->kid(0));
    if (s.type->kind != FormulaKind::ExistsInd) mismatch("existential", s.type, t->kid(0));
    const std::string& alpha = t->name;
    if (s.type->free_ind.count(alpha))
      fail(TypeErrorKind::EigenvariableViolation,
           "existential elimination: " + alpha + " occurs free in " + to_string(s.type));
    Formula a = subst_ind(s.type->body(), s.type->name, ind_var(alpha));
    if (t->ann && !alpha_equal(t->ann, a))
      fail(TypeErrorKind::AnnotationMismatch, t->name2 + " : " + to_string(t->ann) + " but scrutinee gives " + to_string(a));
    Typed body = under(t->name2, a, [&] {
      Typed b = goal ? check(t->kid(1), goal) : infer(t->kid(1));
      eigen_ind(alpha, b.term, t->name2, "existential elimination");
      return b;
    });
    if (body.type->free_ind.count(alpha))
      fail(TypeErrorKind::EigenvariableViolation,
           "existential elimination: " + alpha + " occurs free in the conclusion " + to_string(body.type));
    auto n = std::make_shared<TermNode>(*t);
    n->kids = {s.term, body.term};
    if (!n->ann) n->ann = a;
    n->free_proof.clear();
    n->free_ind.clear();
    n->free_pred.clear();
    return {finish(std::move(n)), body.type};
  }

  Typed par_rule(const Term& t, const Formula& goal) {
    if (!t->ann) fail(TypeErrorKind::MissingAnnotation, "communication variable " + t->name);
    if (t->ann->kind != FormulaKind::Imp)
      fail(TypeErrorKind::ParHypothesesNotDual, t->name + " : " + to_string(t->ann) + " is not an implication");
    Formula dual = imp(t->ann->rhs, t->ann->lhs);
    if (t->ann2 && !alpha_equal(t->ann2, dual))
      fail(TypeErrorKind::ParHypothesesNotDual,
           to_string(t->ann) + " and " + to_string(t->ann2) + " are not of the form A -> B and B -> A");
    formula_ok(t->ann);
    Typed l = under(t->name, t->ann, [&] { return goal ? check(t->kid(0), goal) : infer(t->kid(0)); });
    Typed r = under(t->name, dual, [&] { return check(t->kid(1), l.type); });
    return {rebuild(t, {l.term, r.term}), l.type};
  }

  Flavor flavor_;
  bool elaborate_;
  std::vector<std::pair<std::string, Formula>> scope_;
};

}  // namespace detail

/// The unique A with Γ ⊢ t : A. Throws TypeError.
inline Formula typecheck(const Context& ctx, const Term& t, Flavor flavor) {
  return detail::Typer(ctx, flavor, false).infer(t).type;
}

/// Checks t against `goal` when given (inference otherwise), filling in the
/// annotations that the expected type determines.
inline Typed elaborate(const Context& ctx, const Term& t, const Formula& goal, Flavor flavor) {
  detail::Typer typer(ctx, flavor, true);
  return goal ? typer.check(t, goal) : typer.infer(t);
}

/// Non-throwing inference with extra bindings layered over the context.
inline Formula try_infer(const Context& ctx, const std::vector<std::pair<std::string, Formula>>& extra,
                         const Term& t, Flavor flavor) {
  try {
    detail::Typer typer(ctx, flavor, false);
    for (const auto& [x, a] : extra) typer.assume(x, a);
    return typer.infer(t).type;
  } catch (const TypeError&) {
    return nullptr;
  }
}

// ---------------------------------------------------------------------------
// Subject-reduction audit

struct AuditReport {
  bool ok = true;
  std::string message;
  Formula before;
  Formula after;
};

/// Confirms that t′ has the type of t and that FV(t′) ⊆ FV(t).
inline AuditReport audit_step(const Context& ctx, const Term& t, const Term& t2, Flavor flavor) {
  AuditReport r;
  try {
    r.before = typecheck(ctx, t, flavor);
  } catch (const TypeError& e) {
    r.ok = false;
    r.message = std::string("SubjectReductionViolation: source is ill-typed: ") + e.what();
    return r;
  }
  try {
    r.after = typecheck(ctx, t2, flavor);
  } catch (const TypeError& e) {
    r.ok = false;
    r.message = std::string("SubjectReductionViolation: reduct is ill-typed: ") + e.what();
    return r;
  }
  if (!alpha_equal(r.before, r.after)) {
    r.ok = false;
    r.message = "SubjectReductionViolation: type changed from " + to_string(r.before) + " to " + to_string(r.after);
    return r;
  }
  for (const auto& x : t2->free_proof) {
    if (!t->free_proof.count(x)) {
      r.ok = false;
      r.message = "SubjectReductionViolation: new free variable " + x;
      return r;
    }
  }
  for (const auto& a : t2->free_ind) {
    if (!t->free_ind.count(a)) {
      r.ok = false;
      r.message = "SubjectReductionViolation: new free individual variable " + a;
      return r;
    }
  }
  return r;
}

}  // namespace dlc
