#pragma once

// Branch-parallel normalization of u ∥ₐ v: reduce u ∥ₐ v while the
// leftmost redex starts in u, giving u′; reduce v ∥ₐ u (hypotheses
// swapped) the same way, giving v′; the result is u′ ∥ₐ v′. The two
// phases share nothing mutable and run on separate threads.

#include <future>
#include <optional>
#include <stdexcept>
#include <string>

#include "dlc/normalizer.hpp"
#include "dlc/reduction.hpp"
#include "dlc/typecheck.hpp"

namespace dlc {

class ParallelError : public std::runtime_error {
 public:
  enum class Kind { NotParallel, FuelExhausted, ShapeViolation, TypeChanged };
  ParallelError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct PhaseResult {
  Term branch;
  std::vector<TraceStep> steps;
};

struct ParallelResult {
  Term result;
  PhaseResult left;
  PhaseResult right;
  HnfReport shape;
  Formula type;  // set when a flavor was given
};

struct ParallelOptions {
  std::size_t fuel = 1'000'000;  // per phase
  const Context* context = nullptr;
  std::optional<Flavor> flavor;  // when set, the result is type-checked
  bool concurrent = true;
};

/// Steps `t` while its leftmost redex starts in the left branch.
inline PhaseResult left_phase(Term t, std::size_t fuel, const Context* ctx) {
  PhaseResult r;
  while (true) {
    auto site = leftmost_head_redex(t, ctx);
    if (!site || site->start.empty() || site->start[0] != 0) break;
    if (r.steps.size() >= fuel)
      throw ParallelError(ParallelError::Kind::FuelExhausted, "phase did not finish within the fuel");
    Term next = contract(t, *site, ctx);
    r.steps.push_back({t, *site, next});
    t = next;
  }
  r.branch = t->kid(0);
  return r;
}

inline ParallelResult parallel_normalize(const Term& t, const ParallelOptions& opt = {}) {
  if (t->kind != TermKind::Par) throw ParallelError(ParallelError::Kind::NotParallel, "term is not u par v");
  Term lhs = t;
  Term rhs = par(t->name, t->kid(1), t->kid(0), t->ann2, t->ann);
  ParallelResult r;
  if (opt.concurrent) {
    auto l = std::async(std::launch::async, left_phase, lhs, opt.fuel, opt.context);
    auto rr = std::async(std::launch::async, left_phase, rhs, opt.fuel, opt.context);
    r.left = l.get();
    r.right = rr.get();
  } else {
    r.left = left_phase(lhs, opt.fuel, opt.context);
    r.right = left_phase(rhs, opt.fuel, opt.context);
  }
  r.result = par(t->name, r.left.branch, r.right.branch, t->ann, t->ann2);
  try {
    r.shape = classify_hnf(r.result, opt.context);
  } catch (const NotNormal& e) {
    throw ParallelError(ParallelError::Kind::ShapeViolation, e.what());
  }
  if (!r.shape.ok()) throw ParallelError(ParallelError::Kind::ShapeViolation, "merged term has an ill-shaped process");
  if (opt.flavor) {
    static const Context empty;
    const Context& g = opt.context ? *opt.context : empty;
    Formula before = typecheck(g, t, *opt.flavor);
    r.type = typecheck(g, r.result, *opt.flavor);
    if (!alpha_equal(before, r.type))
      throw ParallelError(ParallelError::Kind::TypeChanged,
                          "type changed from " + to_string(before) + " to " + to_string(r.type));
  }
  return r;
}

}  // namespace dlc
