#pragma once

// Stacks of elimination frames. A term t σ₁ … σₙ is stored as nested
// elimination nodes; `unwind` recovers the head and the frames.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "dlc/syntax.hpp"

namespace dlc {

struct ArgFrame {
  Term arg;
};
struct IndArgFrame {
  IndTerm m;
};
struct ProjFrame {
  int index = 0;
};
struct CaseFrame {
  std::string x;
  Formula x_ann;
  Term left;
  std::string y;
  Formula y_ann;
  Term right;
};
struct ExCaseFrame {
  std::string alpha;
  std::string x;
  Formula x_ann;
  Term body;
};
struct PredFrame {
  PredAbs abs;
};

using Frame = std::variant<ArgFrame, IndArgFrame, ProjFrame, CaseFrame, ExCaseFrame, PredFrame>;
using Stack = std::vector<Frame>;

inline Term apply_frame(const Term& t, const Frame& f) {
  return std::visit(
      [&](const auto& fr) -> Term {
        using F = std::decay_t<decltype(fr)>;
        if constexpr (std::is_same_v<F, ArgFrame>)
          return app(t, fr.arg);
        else if constexpr (std::is_same_v<F, IndArgFrame>)
          return ind_app(t, fr.m);
        else if constexpr (std::is_same_v<F, ProjFrame>)
          return proj(t, fr.index);
        else if constexpr (std::is_same_v<F, CaseFrame>)
          return case_of(t, fr.x, fr.x_ann, fr.left, fr.y, fr.y_ann, fr.right);
        else if constexpr (std::is_same_v<F, ExCaseFrame>)
          return ex_case(t, fr.alpha, fr.x, fr.x_ann, fr.body);
        else
          return pred_app(t, fr.abs);
      },
      f);
}

/// t σ = (((t σ₁) σ₂) … σₙ)
inline Term apply_stack(Term t, const Stack& s) {
  for (const auto& f : s) t = apply_frame(t, f);
  return t;
}

/// The frame contributed by an elimination node (its first child removed).
inline Frame frame_of(const Term& e) {
  switch (e->kind) {
    case TermKind::App:
      return ArgFrame{e->kid(1)};
    case TermKind::IndApp:
      return IndArgFrame{e->ind};
    case TermKind::Proj:
      return ProjFrame{e->index};
    case TermKind::Case:
      return CaseFrame{e->name, e->ann, e->kid(1), e->name2, e->ann2, e->kid(2)};
    case TermKind::ExCase:
      return ExCaseFrame{e->name, e->name2, e->ann, e->kid(1)};
    case TermKind::PredApp:
      return PredFrame{*e->pred};
    default:
      throw std::invalid_argument("frame_of: not an elimination node");
  }
}

/// Head and elimination nodes of t = h σ₁ … σₙ; `elims[0]` is h σ₁ and
/// `elims.back()` is t itself (when n > 0).
struct Unwound {
  Term head;
  std::vector<Term> elims;

  std::size_t depth() const { return elims.size(); }
  Stack stack() const {
    Stack s;
    for (const auto& e : elims) s.push_back(frame_of(e));
    return s;
  }
};

inline Unwound unwind(const Term& t) {
  Unwound u;
  Term h = t;
  while (h->is_elim()) {
    u.elims.push_back(h);
    h = h->kid(0);
  }
  std::reverse(u.elims.begin(), u.elims.end());
  u.head = h;
  return u;
}

/// Rebuilds h σ using the original elimination nodes for the frames.
inline Term rewind(Term h, const std::vector<Term>& elims, std::size_t from = 0) {
  for (std::size_t i = from; i < elims.size(); ++i) h = with_kid(elims[i], 0, h);
  return h;
}

}  // namespace dlc
