#pragma once

// Herbrand normal forms: parallel compositions of witness pairs (m, v).
// From such a form of type ∃α A we rebuild a proof of the disjunction
// A[m₀/α] ∨ (A[m₁/α] ∨ … ∨ A[m_k/α]) by injecting each body at its own
// position and keeping the original `par` tree.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlc/normalizer.hpp"
#include "dlc/reduction.hpp"
#include "dlc/typecheck.hpp"

namespace dlc {

struct HerbrandLeaf {
  IndTerm witness;
  Term body;
  Path path;
};

struct HerbrandForm {
  Term term;
  std::vector<HerbrandLeaf> leaves;
};

inline std::optional<HerbrandForm> as_herbrand_form(const Term& t) {
  HerbrandForm h;
  h.term = t;
  ParallelDecomposition d = decompose(t);
  for (std::size_t i = 0; i < d.leaves.size(); ++i) {
    const Term& leaf = d.leaves[i];
    if (leaf->kind != TermKind::Witness) return std::nullopt;
    h.leaves.push_back({leaf->ind, leaf->kid(0), d.paths[i]});
  }
  return h;
}

struct HerbrandResult {
  std::vector<IndTerm> witnesses;
  Formula disjunction;
  Term proof;
  Trace source_trace;
};

class HerbrandError : public std::runtime_error {
 public:
  enum class Kind { PreconditionFreeVars, PreconditionAbort, TypeNotExistential, TypeMismatch, KernelBug };
  HerbrandError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline const char* herbrand_error_name(HerbrandError::Kind k) {
  switch (k) {
    case HerbrandError::Kind::PreconditionFreeVars: return "PreconditionFreeVars";
    case HerbrandError::Kind::PreconditionAbort: return "PreconditionAbort";
    case HerbrandError::Kind::TypeNotExistential: return "TypeNotExistential";
    case HerbrandError::Kind::TypeMismatch: return "TypeMismatch";
    case HerbrandError::Kind::KernelBug: return "KernelBug";
  }
  return "?";
}

/// Right-nested disjunction of the instances A[mᵢ/α].
inline Formula herbrand_disjunction(const Formula& goal, const std::vector<IndTerm>& witnesses) {
  Formula out;
  for (auto it = witnesses.rbegin(); it != witnesses.rend(); ++it) {
    Formula inst = subst_ind(goal->body(), goal->name, *it);
    out = out ? disj(inst, out) : inst;
  }
  return out;
}

namespace detail {

// Injects v into position `i` of the disjunction whose j-th suffix is
// suffixes[j].
inline Term inject_at(const Term& v, std::size_t i, std::size_t j, const std::vector<Formula>& suffixes) {
  std::size_t last = suffixes.size() - 1;
  if (j == i) return j == last ? v : inj(0, v, suffixes[j]);
  return inj(1, inject_at(v, i, j + 1, suffixes), suffixes[j]);
}

}  // namespace detail

inline HerbrandResult build_disjunction_proof(const HerbrandForm& h, const Formula& goal, const Context& ctx,
                                              Flavor flavor) {
  if (goal->kind != FormulaKind::ExistsInd)
    throw HerbrandError(HerbrandError::Kind::TypeNotExistential, "goal " + to_string(goal) + " is not existential");
  Formula actual = typecheck(ctx, h.term, flavor);
  if (!alpha_equal(actual, goal))
    throw HerbrandError(HerbrandError::Kind::TypeMismatch,
                        "Herbrand form has type " + to_string(actual) + ", expected " + to_string(goal));
  HerbrandResult r;
  for (const auto& l : h.leaves) r.witnesses.push_back(l.witness);
  r.disjunction = herbrand_disjunction(goal, r.witnesses);

  std::vector<Formula> suffixes(r.witnesses.size());
  for (std::size_t j = suffixes.size(); j-- > 0;) {
    Formula inst = subst_ind(goal->body(), goal->name, r.witnesses[j]);
    suffixes[j] = j + 1 == suffixes.size() ? inst : disj(inst, suffixes[j + 1]);
  }
  Term proof = h.term;
  for (std::size_t i = 0; i < h.leaves.size(); ++i)
    proof = replace_at(proof, h.leaves[i].path, detail::inject_at(h.leaves[i].body, i, 0, suffixes));
  r.proof = proof;

  Formula check = typecheck(ctx, proof, flavor);
  if (!alpha_equal(check, r.disjunction))
    throw HerbrandError(HerbrandError::Kind::KernelBug,
                        "disjunction proof has type " + to_string(check) + ", expected " + to_string(r.disjunction));
  return r;
}

/// Closed, abort-free t : ∃α A  ↦  witnesses and disjunction proof of its
/// head normal form.
inline HerbrandResult herbrand_pipeline(const Term& t, Flavor flavor, NormalizeOptions opt = {}) {
  if (!t->free_proof.empty())
    throw HerbrandError(HerbrandError::Kind::PreconditionFreeVars,
                        "term has free proof variable " + *t->free_proof.begin());
  if (contains_abort(t)) throw HerbrandError(HerbrandError::Kind::PreconditionAbort, "term contains abort");
  Context empty;
  Formula type = typecheck(empty, t, flavor);
  if (type->kind != FormulaKind::ExistsInd)
    throw HerbrandError(HerbrandError::Kind::TypeNotExistential, "type " + to_string(type) + " is not existential");

  opt.context = &empty;
  Trace tr = normalize(t, opt);
  if (tr.status != TraceStatus::Normalized)
    throw HerbrandError(HerbrandError::Kind::KernelBug, "typed term did not normalize within the fuel");
  auto h = as_herbrand_form(tr.result);
  if (!h)
    throw HerbrandError(HerbrandError::Kind::KernelBug, "normal form is not a Herbrand form: " + to_string(tr.result));
  HerbrandResult r = build_disjunction_proof(*h, type, empty, flavor);
  r.source_trace = std::move(tr);
  return r;
}

}  // namespace dlc
