#pragma once

// Canonical ASCII rendering of individual terms, formulas and proof terms.
// Spacing is fixed and parentheses are minimal for the grammar accepted by
// parser.hpp: application is left-associative, `par` is the loosest
// operator and associates to the right, `fun` and quantifier bodies extend
// as far right as possible.

#include <string>

#include "dlc/subst.hpp"
#include "dlc/syntax.hpp"

namespace dlc {

inline std::string to_string(const IndTerm& m) {
  if (m->is_var() || m->args.empty()) return m->name;
  std::string s = m->name + "(";
  for (std::size_t i = 0; i < m->args.size(); ++i) {
    if (i) s += ", ";
    s += to_string(m->args[i]);
  }
  return s + ")";
}

namespace detail {

// Formula levels: 0 implication, 1 disjunction, 2 conjunction, 3 prefix/primary.
inline std::string print_formula(const Formula& f, int level, bool tail) {
  auto paren = [](const std::string& s) { return "(" + s + ")"; };
  switch (f->kind) {
    case FormulaKind::Falsum:
      return "bot";
    case FormulaKind::Atom: {
      if (f->args.empty()) return f->name;
      std::string s = f->name + "(";
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) s += ", ";
        s += to_string(f->args[i]);
      }
      return s + ")";
    }
    case FormulaKind::PredVar:
      return f->name + "(" + to_string(f->args[0]) + ")";
    case FormulaKind::Imp: {
      if (f->rhs->kind == FormulaKind::Falsum) return "~" + print_formula(f->lhs, 3, tail);
      if (level > 0) return paren(print_formula(f, 0, true));
      return print_formula(f->lhs, 1, false) + " -> " + print_formula(f->rhs, 0, tail);
    }
    case FormulaKind::Or:
      if (level > 1) return paren(print_formula(f, 0, true));
      return print_formula(f->lhs, 2, false) + " \\/ " + print_formula(f->rhs, 1, tail);
    case FormulaKind::And:
      if (level > 2) return paren(print_formula(f, 0, true));
      return print_formula(f->lhs, 3, false) + " /\\ " + print_formula(f->rhs, 2, tail);
    case FormulaKind::ForallInd:
    case FormulaKind::ExistsInd:
    case FormulaKind::ForallPred: {
      if (!tail) return paren(print_formula(f, 0, true));
      const char* q = f->kind == FormulaKind::ExistsInd ? "exists " : "forall ";
      return q + f->name + ". " + print_formula(f->body(), 0, true);
    }
  }
  return "?";
}

}  // namespace detail

inline std::string to_string(const Formula& f) { return f ? detail::print_formula(f, 0, true) : "_"; }

inline std::string to_string(const PredAbs& p) { return "{" + p.binder + ". " + to_string(p.body) + "}"; }

namespace detail {

// Term levels: 0 allows `par`, 1 allows `fun` in tail position, 2 is an
// application spine, 3 an atom.
inline std::string print_term(const Term& t, int level, bool tail);

inline std::string ann_suffix(const Formula& f) { return f ? "[" + to_string(f) + "]" : ""; }

inline std::string binder_ann(const std::string& x, const Formula& f) {
  return f ? x + " : " + to_string(f) : x;
}

inline bool is_dual(const Term& t) {
  return t->ann && t->ann2 && t->ann->kind == FormulaKind::Imp &&
         alpha_equal(t->ann2, imp(t->ann->rhs, t->ann->lhs));
}

inline std::string print_frame(const Term& t) {
  switch (t->kind) {
    case TermKind::App:
      return " " + print_term(t->kid(1), 3, true);
    case TermKind::IndApp:
      return " [" + to_string(t->ind) + "]";
    case TermKind::Proj:
      return t->index == 0 ? " pi0" : " pi1";
    case TermKind::Case:
      return " case[" + binder_ann(t->name, t->ann) + " => " + print_term(t->kid(1), 0, true) + " | " +
             binder_ann(t->name2, t->ann2) + " => " + print_term(t->kid(2), 0, true) + "]";
    case TermKind::ExCase:
      return " excase[" + t->name + ", " + binder_ann(t->name2, t->ann) + " => " +
             print_term(t->kid(1), 0, true) + "]";
    case TermKind::PredApp:
      return " " + to_string(*t->pred);
    default:
      return "";
  }
}

inline std::string print_term(const Term& t, int level, bool tail) {
  auto paren = [&](const Term& x) { return "(" + print_term(x, 0, true) + ")"; };
  switch (t->kind) {
    case TermKind::Var:
      return t->name;
    case TermKind::Pair:
      return "<" + print_term(t->kid(0), 0, true) + ", " + print_term(t->kid(1), 0, true) + ">";
    case TermKind::Abort:
      return "abort" + ann_suffix(t->ann);
    case TermKind::Par: {
      if (level > 0) return paren(t);
      std::string spec;
      if (!t->ann)
        spec = " " + t->name;
      else if (is_dual(t))
        spec = "[" + t->name + " : " + to_string(t->ann) + "]";
      else
        spec = "[" + t->name + " : " + to_string(t->ann) + ", " + to_string(t->ann2) + "]";
      return print_term(t->kid(0), 1, false) + " par" + spec + " " + print_term(t->kid(1), 0, tail);
    }
    case TermKind::Lam:
    case TermKind::IndLam:
    case TermKind::PredLam: {
      if (level > 1 || !tail) return paren(t);
      std::string head;
      if (t->kind == TermKind::Lam)
        head = "fun " + binder_ann(t->name, t->ann);
      else if (t->kind == TermKind::IndLam)
        head = "fun [" + t->name + "]";
      else
        head = "Fun " + t->name;
      return head + " => " + print_term(t->kid(0), 0, true);
    }
    case TermKind::Inj:
    case TermKind::Witness:
    case TermKind::Efq: {
      if (level > 2) return paren(t);
      std::string head = t->kind == TermKind::Inj ? (t->index == 0 ? "inj0" : "inj1")
                         : t->kind == TermKind::Witness ? "wit"
                                                         : "efq";
      head += ann_suffix(t->ann);
      if (t->kind == TermKind::Witness) head += " " + to_string(t->ind);
      return head + " " + print_term(t->kid(0), 3, true);
    }
    default:
      break;
  }
  // Elimination spine: print the head, then each frame.
  if (level > 2) return paren(t);
  std::vector<Term> frames;
  Term head = t;
  while (head->is_elim()) {
    frames.push_back(head);
    head = head->kid(0);
  }
  std::string s;
  if (head->kind == TermKind::Abort && !head->ann && frames.back()->kind == TermKind::IndApp)
    s = "(abort)";
  else
    s = print_term(head, 2, false);
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) s += print_frame(*it);
  return s;
}

}  // namespace detail

inline std::string to_string(const Term& t) { return detail::print_term(t, 0, true); }

}  // namespace dlc
