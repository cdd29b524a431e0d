#pragma once

// Drives head reduction to a head normal form and classifies the
// elementary processes of normal forms.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlc/reduction.hpp"
#include "dlc/typecheck.hpp"

namespace dlc {

enum class TraceStatus { Normalized, FuelExhausted };

inline const char* trace_status_name(TraceStatus s) {
  return s == TraceStatus::Normalized ? "Normalized" : "FuelExhausted";
}

/// `before`/`after` are null when the term exceeded the size cap.
struct TraceStep {
  Term before;
  RedexSite site;
  Term after;
};

struct Trace {
  Term initial;
  Term result;
  std::vector<TraceStep> steps;
  TraceStatus status = TraceStatus::Normalized;
  std::size_t fuel_used = 0;
  std::vector<std::string> audit_failures;
};

struct NormalizeOptions {
  std::size_t fuel = 1'000'000;
  std::size_t term_size_cap = 200'000;
  bool record = true;
  /// Types free variables; also enables the abort rule on open terms.
  const Context* context = nullptr;
  /// When set, every step is checked with audit_step in this flavor.
  std::optional<Flavor> audit;
};

inline Trace normalize(const Term& t, const NormalizeOptions& opt = {}) {
  Trace tr;
  tr.initial = t;
  Term cur = t;
  static const Context empty;
  const Context& g = opt.context ? *opt.context : empty;
  while (true) {
    auto site = leftmost_head_redex(cur, opt.context);
    if (!site) {
      tr.status = TraceStatus::Normalized;
      break;
    }
    if (tr.fuel_used >= opt.fuel) {
      tr.status = TraceStatus::FuelExhausted;
      break;
    }
    Term next = contract(cur, *site, opt.context);
    ++tr.fuel_used;
    if (opt.audit) {
      AuditReport r = audit_step(g, cur, next, *opt.audit);
      if (!r.ok) tr.audit_failures.push_back("step " + std::to_string(tr.fuel_used) + ": " + r.message);
    }
    if (opt.record) {
      bool keep = cur->size <= opt.term_size_cap && next->size <= opt.term_size_cap;
      tr.steps.push_back({keep ? cur : nullptr, *site, keep ? next : nullptr});
    }
    cur = next;
  }
  tr.result = cur;
  return tr;
}

// ---------------------------------------------------------------------------
// Values and head normal forms

inline bool is_value(const Term& t) {
  switch (t->kind) {
    case TermKind::Lam:
    case TermKind::IndLam:
    case TermKind::Pair:
    case TermKind::Inj:
    case TermKind::Witness:
    case TermKind::Efq:
    case TermKind::Abort:
    case TermKind::PredLam:
      return true;
    default:
      return false;
  }
}

inline bool is_neutral(const Term& t) { return !is_value(t) && t->kind != TermKind::Par; }

inline const char* value_kind_name(TermKind k) {
  switch (k) {
    case TermKind::Lam: return "lambda";
    case TermKind::IndLam: return "ind-lambda";
    case TermKind::Pair: return "pair";
    case TermKind::Inj: return "injection";
    case TermKind::Witness: return "witness";
    case TermKind::Efq: return "efq";
    case TermKind::Abort: return "abort";
    case TermKind::PredLam: return "pred-lambda";
    default: return "none";
  }
}

enum class ProcessShape { NeutralVarHead, StuckAbort, BareCommVar, Value, Violation };

inline const char* process_shape_name(ProcessShape s) {
  switch (s) {
    case ProcessShape::NeutralVarHead: return "NeutralVarHead";
    case ProcessShape::StuckAbort: return "StuckAbort";
    case ProcessShape::BareCommVar: return "BareCommVar";
    case ProcessShape::Value: return "Value";
    case ProcessShape::Violation: return "Violation";
  }
  return "?";
}

struct ProcessReport {
  Path path;
  ProcessShape shape = ProcessShape::Violation;
  std::string detail;  // head variable, value kind, or reason
};

struct HnfReport {
  std::vector<ProcessReport> processes;

  std::size_t violations() const {
    std::size_t n = 0;
    for (const auto& p : processes) n += p.shape == ProcessShape::Violation;
    return n;
  }
  bool ok() const { return violations() == 0; }
};

class NotNormal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Assigns each elementary process of a head normal form to one of the
/// admissible shapes; anything else is reported as a violation.
inline HnfReport classify_hnf(const Term& t, const Context* ctx = nullptr) {
  if (auto s = leftmost_head_redex(t, ctx))
    throw NotNormal(std::string("term has a ") + redex_kind_name(s->kind) + " redex at " + path_string(s->path));
  HnfReport rep;
  for (const auto& leaf : detail::leaves_of(t)) {
    ProcessReport pr;
    pr.path = leaf.path;
    Unwound u = unwind(leaf.leaf);
    const Term& h = u.head;
    bool comm = false;
    for (const auto& a : leaf.ancestors) comm = comm || a.node->name == h->name;
    if (h->kind == TermKind::Var) {
      pr.detail = h->name;
      if (!comm)
        pr.shape = ProcessShape::NeutralVarHead;
      else if (u.depth() == 0)
        pr.shape = ProcessShape::BareCommVar;
      else
        pr.detail = "communication variable " + h->name + " applied to a non-argument frame";
    } else if (u.depth() == 0 && is_value(h)) {
      pr.shape = ProcessShape::Value;
      pr.detail = value_kind_name(h->kind);
    } else if (h->kind == TermKind::Abort && u.elims[0]->kind == TermKind::App) {
      pr.shape = ProcessShape::StuckAbort;
      pr.detail = "abort";
    } else {
      pr.detail = std::string(value_kind_name(h->kind)) + " head facing an incompatible frame";
    }
    rep.processes.push_back(pr);
  }
  return rep;
}

}  // namespace dlc
