#pragma once

// Local simulation of communication with abort. For a typed u ∥ₐ v with
// a : A→B on the left and C the type of the whole term,
//
//   left_sim  = λx^A. abort^{C→B} (v[λy^B.x / a])      : A→B
//   right_sim = λz^B. abort^{C→A} (u[λy^A.z / a])      : B→A
//
// and every step u ∥ₐ v ≻ u′ ∥ₐ v must be replayed by u[left_sim/a] ≻⁺
// u′[left_sim/a] in LC*, symmetrically on the right.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlc/reduction.hpp"
#include "dlc/typecheck.hpp"

namespace dlc {

struct SimulationInstance {
  Term subject;
  std::string a;
  Formula A, B, C;
  Term left_sim;
  Term right_sim;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Flavor star_of(Flavor f) { return admits_second_order(f) ? Flavor::LC2Star : Flavor::LCStar; }

inline SimulationInstance make_simulation(const Term& subject, const Context& ctx, Flavor flavor) {
  if (subject->kind != TermKind::Par) throw SimulationError("subject is not a parallel term");
  if (!subject->ann || subject->ann->kind != FormulaKind::Imp)
    throw SimulationError("subject has no typed communication variable");
  SimulationInstance s;
  s.subject = subject;
  s.a = subject->name;
  s.A = subject->ann->lhs;
  s.B = subject->ann->rhs;
  s.C = typecheck(ctx, subject, star_of(flavor));
  const Term& u = subject->kid(0);
  const Term& v = subject->kid(1);
  NameSet avoid = unite(u->free_proof, v->free_proof);
  avoid.insert(s.a);
  std::string x = fresh_name("x", avoid);
  std::string z = fresh_name("z", avoid);
  std::string y = fresh_name("y", {x, z});
  s.left_sim = lam(x, s.A, app(abort_const(imp(s.C, s.B)), subst_proof(v, s.a, lam(y, s.B, var(x)))));
  s.right_sim = lam(z, s.B, app(abort_const(imp(s.C, s.A)), subst_proof(u, s.a, lam(y, s.A, var(z)))));
  return s;
}

struct SimulatedStep {
  std::size_t index = 0;  // subject step, from 1
  RedexKind kind = RedexKind::Beta;
  int branch = 0;  // 0 left, 1 right
  bool ok = false;
  std::size_t simulated_steps = 0;
  std::size_t abort_steps = 0;
  std::string message;
};

struct SimulationReport {
  std::vector<SimulatedStep> steps;
  bool subject_normalized = true;

  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += !s.ok;
    return n;
  }
  bool ok() const { return failures() == 0 && subject_normalized; }
};

namespace detail {

inline SimulatedStep replay(const Term& from, const Term& to, const Context& ctx, std::size_t max_steps) {
  SimulatedStep r;
  Term cur = from;
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto st = head_step(cur, &ctx);
    if (!st) {
      r.message = "simulating term stopped after " + std::to_string(i) + " steps at " + to_string(cur);
      return r;
    }
    ++r.simulated_steps;
    if (st->site.kind == RedexKind::AbortRule) ++r.abort_steps;
    cur = st->after;
    if (alpha_equal(cur, to)) {
      r.ok = true;
      return r;
    }
  }
  r.message = "target not reached within " + std::to_string(max_steps) + " steps";
  return r;
}

}  // namespace detail

/// Runs the subject to normal form and checks every step against its
/// simulation, rebuilding the simulating terms from the current branches.
inline SimulationReport check_simulation(const SimulationInstance& inst, const Context& ctx, Flavor flavor,
                                         std::size_t max_steps = 1000, std::size_t subject_fuel = 100000) {
  SimulationReport rep;
  Term cur = inst.subject;
  for (std::size_t n = 1;; ++n) {
    auto site = leftmost_head_redex(cur, &ctx);
    if (!site) break;
    if (n > subject_fuel) {
      rep.subject_normalized = false;
      break;
    }
    Term next = contract(cur, *site, &ctx);
    if (next->kind != TermKind::Par || next->name != inst.a)
      throw SimulationError("subject lost its outer communication variable");
    int branch = site->start.at(0);
    SimulationInstance now = make_simulation(cur, ctx, flavor);
    const Term& sim = branch == 0 ? now.left_sim : now.right_sim;
    Term from = subst_proof(cur->kid(branch), inst.a, sim);
    Term to = subst_proof(next->kid(branch), inst.a, sim);
    SimulatedStep s = detail::replay(from, to, ctx, max_steps);
    s.index = n;
    s.kind = site->kind;
    s.branch = branch;
    rep.steps.push_back(s);
    cur = next;
  }
  return rep;
}

}  // namespace dlc
