#pragma once

// Head reduction. A term is a tree of `par` nodes over elementary
// processes (its spine leaves). Each leaf offers at most one head redex:
// a stack redex (beta-like or permutation) rooted inside the leaf, the
// abort rule on the whole leaf, or a communication step when the leaf is
// `a w σ` with `a` bound by a `par` on the spine. The leftmost redex is the
// one whose starting position comes first in pre-order, which amounts to
// the first leaf, left to right, that offers one.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlc/stack.hpp"
#include "dlc/subst.hpp"
#include "dlc/syntax.hpp"
#include "dlc/typecheck.hpp"

namespace dlc {

enum class RedexKind {
  Beta,
  IndBeta,
  ProjPair,
  CaseInj,
  ExCaseWitness,
  PermArg,
  PermProj,
  PermCase,
  PermExCase,
  DLeft,
  DRight,
  AbortRule,
  PredBeta,
};

inline const char* redex_kind_name(RedexKind k) {
  switch (k) {
    case RedexKind::Beta: return "Beta";
    case RedexKind::IndBeta: return "IndBeta";
    case RedexKind::ProjPair: return "ProjPair";
    case RedexKind::CaseInj: return "CaseInj";
    case RedexKind::ExCaseWitness: return "ExCaseWitness";
    case RedexKind::PermArg: return "PermArg";
    case RedexKind::PermProj: return "PermProj";
    case RedexKind::PermCase: return "PermCase";
    case RedexKind::PermExCase: return "PermExCase";
    case RedexKind::DLeft: return "DLeft";
    case RedexKind::DRight: return "DRight";
    case RedexKind::AbortRule: return "AbortRule";
    case RedexKind::PredBeta: return "PredBeta";
  }
  return "?";
}

inline bool is_communication(RedexKind k) { return k == RedexKind::DLeft || k == RedexKind::DRight; }

/// Child indices from the root: App [function, argument], Case [scrutinee,
/// left, right], ExCase [scrutinee, body], Par [left, right], one child
/// otherwise.
using Path = std::vector<int>;

inline std::string path_string(const Path& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(p[i]);
  }
  return s.empty() ? "root" : s;
}

inline bool is_prefix(const Path& pre, const Path& p) {
  return pre.size() <= p.size() && std::equal(pre.begin(), pre.end(), p.begin());
}

struct RedexSite {
  Path path;  // root of the redex
  RedexKind kind = RedexKind::Beta;
  Path start;  // starting symbol: redex root, or the occurrence of `a` for D

  bool operator==(const RedexSite&) const = default;
};

class ReductionError : public std::runtime_error {
 public:
  enum class Kind { SiteStale, AbortTypeMismatch };
  ReductionError(Kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline Term subterm_at(const Term& t, const Path& p, std::size_t upto) {
  Term cur = t;
  for (std::size_t i = 0; i < upto; ++i) {
    if (static_cast<std::size_t>(p[i]) >= cur->kids.size()) return nullptr;
    cur = cur->kid(p[i]);
  }
  return cur;
}

inline Term subterm_at(const Term& t, const Path& p) { return subterm_at(t, p, p.size()); }

inline Term replace_at(const Term& t, const Path& p, const Term& r, std::size_t i = 0) {
  if (i == p.size()) return r;
  return with_kid(t, p[i], replace_at(t->kid(p[i]), p, r, i + 1));
}

// ---------------------------------------------------------------------------
// Parallel decomposition

struct ParallelDecomposition {
  Term term;
  std::vector<Term> leaves;    // elementary processes, left to right
  std::vector<Path> paths;     // path of each leaf
  std::vector<std::string> binders;  // communication variables, in order

  /// The term with its leaves replaced, keeping the `par` tree.
  Term renest(const std::vector<Term>& new_leaves) const {
    Term out = term;
    for (std::size_t i = 0; i < paths.size(); ++i) out = replace_at(out, paths[i], new_leaves.at(i));
    return out;
  }
  Term renest() const { return renest(leaves); }
};

namespace detail {

inline void flatten(const Term& t, Path& p, ParallelDecomposition& d) {
  if (t->kind != TermKind::Par) {
    d.leaves.push_back(t);
    d.paths.push_back(p);
    return;
  }
  p.push_back(0);
  flatten(t->kid(0), p, d);
  p.back() = 1;
  d.binders.push_back(t->name);
  flatten(t->kid(1), p, d);
  p.pop_back();
}

}  // namespace detail

inline ParallelDecomposition decompose(const Term& t) {
  ParallelDecomposition d;
  d.term = t;
  Path p;
  detail::flatten(t, p, d);
  return d;
}

// ---------------------------------------------------------------------------
// Redex detection

namespace detail {

struct SpineAncestor {
  Term node;
  std::size_t depth;  // length of its path
  int side;           // which child leads towards the leaf
};

inline std::vector<SpineAncestor> spine_ancestors(const Term& root, const Path& leaf_path) {
  std::vector<SpineAncestor> out;
  Term cur = root;
  for (std::size_t i = 0; i < leaf_path.size(); ++i) {
    out.push_back({cur, i, leaf_path[i]});
    cur = cur->kid(leaf_path[i]);
  }
  return out;
}

/// Bindings for the communication variables above a leaf.
inline std::vector<std::pair<std::string, Formula>> spine_bindings(const std::vector<SpineAncestor>& anc) {
  std::vector<std::pair<std::string, Formula>> out;
  for (const auto& a : anc) {
    const Formula& f = a.side == 0 ? a.node->ann : a.node->ann2;
    if (f) out.emplace_back(a.node->name, f);
  }
  return out;
}

inline std::optional<RedexKind> stack_redex_kind(const Term& head, const Term& e1) {
  switch (head->kind) {
    case TermKind::Lam:
      if (e1->kind == TermKind::App) return RedexKind::Beta;
      break;
    case TermKind::IndLam:
      if (e1->kind == TermKind::IndApp) return RedexKind::IndBeta;
      break;
    case TermKind::Pair:
      if (e1->kind == TermKind::Proj) return RedexKind::ProjPair;
      break;
    case TermKind::Inj:
      if (e1->kind == TermKind::Case) return RedexKind::CaseInj;
      break;
    case TermKind::Witness:
      if (e1->kind == TermKind::ExCase) return RedexKind::ExCaseWitness;
      break;
    case TermKind::PredLam:
      if (e1->kind == TermKind::PredApp) return RedexKind::PredBeta;
      break;
    case TermKind::Par:
      switch (e1->kind) {
        case TermKind::App:
        case TermKind::IndApp:
        case TermKind::PredApp:
          return RedexKind::PermArg;
        case TermKind::Proj:
          return RedexKind::PermProj;
        case TermKind::Case:
          return RedexKind::PermCase;
        case TermKind::ExCase:
          return RedexKind::PermExCase;
        default:
          break;
      }
      break;
    default:
      break;
  }
  return std::nullopt;
}

/// True when `abort u σ` and `u` have the same type.
inline bool abort_fires(const Term& leaf, const Term& u, const std::vector<SpineAncestor>& anc, const Context* ctx) {
  static const Context empty;
  const Context& g = ctx ? *ctx : empty;
  auto extra = spine_bindings(anc);
  Formula tu = try_infer(g, extra, u, Flavor::LC2Star);
  if (!tu) return false;
  Formula tl = try_infer(g, extra, leaf, Flavor::LC2Star);
  return tl && alpha_equal(tu, tl);
}

inline std::optional<RedexSite> leaf_redex(const Path& leaf_path, const Term& leaf,
                                           const std::vector<SpineAncestor>& anc, const Context* ctx) {
  Unwound u = unwind(leaf);
  if (u.depth() == 0) return std::nullopt;
  const Term& h = u.head;
  const Term& e1 = u.elims[0];
  Path redex_path = leaf_path;
  redex_path.insert(redex_path.end(), u.depth() - 1, 0);

  if (auto k = stack_redex_kind(h, e1)) return RedexSite{redex_path, *k, redex_path};

  if (h->kind == TermKind::Var && e1->kind == TermKind::App) {
    for (auto it = anc.rbegin(); it != anc.rend(); ++it) {
      if (it->node->name != h->name) continue;
      Path par_path(leaf_path.begin(), leaf_path.begin() + static_cast<long>(it->depth));
      Path start = leaf_path;
      start.insert(start.end(), u.depth(), 0);
      return RedexSite{par_path, it->side == 0 ? RedexKind::DLeft : RedexKind::DRight, start};
    }
    return std::nullopt;
  }

  if (h->kind == TermKind::Abort && e1->kind == TermKind::App && abort_fires(leaf, e1->kid(1), anc, ctx))
    return RedexSite{leaf_path, RedexKind::AbortRule, leaf_path};
  return std::nullopt;
}

struct LeafVisit {
  Term leaf;
  Path path;
  std::vector<SpineAncestor> ancestors;
};

inline void visit_leaves(const Term& t, Path& p, std::vector<SpineAncestor>& anc, std::vector<LeafVisit>& out) {
  if (t->kind != TermKind::Par) {
    out.push_back({t, p, anc});
    return;
  }
  for (int side = 0; side < 2; ++side) {
    anc.push_back({t, p.size(), side});
    p.push_back(side);
    visit_leaves(t->kid(side), p, anc, out);
    p.pop_back();
    anc.pop_back();
  }
}

inline std::vector<LeafVisit> leaves_of(const Term& t) {
  std::vector<LeafVisit> out;
  Path p;
  std::vector<SpineAncestor> anc;
  visit_leaves(t, p, anc, out);
  return out;
}

}  // namespace detail

/// The head redex of t itself: a stack redex when t is an elementary
/// process, or a communication redex of the outermost `par` when t is a
/// parallel term (located at the leftmost eligible occurrence of its
/// variable).
inline std::optional<RedexSite> head_redex(const Term& t, const Context* ctx = nullptr) {
  if (t->kind != TermKind::Par) return detail::leaf_redex({}, t, {}, ctx);
  for (const auto& v : detail::leaves_of(t)) {
    auto s = detail::leaf_redex(v.path, v.leaf, v.ancestors, ctx);
    if (s && is_communication(s->kind) && s->path.empty()) return s;
  }
  return std::nullopt;
}

/// The leftmost among the head redexes of all parallel processes of t.
/// `ctx` types the free variables; without it the abort rule never fires
/// on open subterms.
inline std::optional<RedexSite> leftmost_head_redex(const Term& t, const Context* ctx = nullptr) {
  for (const auto& v : detail::leaves_of(t))
    if (auto s = detail::leaf_redex(v.path, v.leaf, v.ancestors, ctx)) return s;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Contraction

namespace detail {

inline NameSet frame_free_proof(const Term& e) {
  switch (e->kind) {
    case TermKind::App:
      return e->kid(1)->free_proof;
    case TermKind::Case: {
      NameSet s = without(e->kid(1)->free_proof, e->name);
      merge_into(s, without(e->kid(2)->free_proof, e->name2));
      return s;
    }
    case TermKind::ExCase:
      return without(e->kid(1)->free_proof, e->name2);
    default:
      return {};
  }
}

inline Term contract_stack(const Term& e1, RedexKind kind) {
  const Term& h = e1->kid(0);
  switch (kind) {
    case RedexKind::Beta:
      return subst_proof(h->kid(0), h->name, e1->kid(1));
    case RedexKind::IndBeta:
      return subst_ind(h->kid(0), h->name, e1->ind);
    case RedexKind::ProjPair:
      return h->kid(e1->index);
    case RedexKind::CaseInj: {
      const std::string& x = h->index == 0 ? e1->name : e1->name2;
      return subst_proof(e1->kid(1 + h->index), x, h->kid(0));
    }
    case RedexKind::ExCaseWitness:
      return subst_proof(subst_ind(e1->kid(1), e1->name, h->ind), e1->name2, h->kid(0));
    case RedexKind::PredBeta:
      return subst_pred(h->kid(0), h->name, *e1->pred);
    case RedexKind::PermArg:
    case RedexKind::PermProj:
    case RedexKind::PermCase:
    case RedexKind::PermExCase: {
      std::string a = h->name;
      Term u = h->kid(0), v = h->kid(1);
      NameSet fv = frame_free_proof(e1);
      if (fv.count(a)) {
        std::string fresh = fresh_name(a, unite(fv, unite(u->free_proof, v->free_proof)));
        u = subst_proof(u, a, var(fresh));
        v = subst_proof(v, a, var(fresh));
        a = fresh;
      }
      return par(a, with_kid(e1, 0, u), with_kid(e1, 0, v), h->ann, h->ann2);
    }
    default:
      throw std::logic_error("contract_stack: not a stack redex");
  }
}

// Rebuilds the branch below the communicating `par`, replacing the leaf at
// `leaf_path` by other[λy.w/a]. Intermediate `par` binders that would
// capture free variables of `other` are renamed first.
inline Term communicate(const Term& node, const Path& leaf_path, std::size_t depth, const Term& other,
                        const std::string& a, const Formula& y_ann) {
  if (depth == leaf_path.size()) {
    Unwound u = unwind(node);
    const Term& w = u.elims.at(0)->kid(1);
    std::string y = fresh_name("y", w->free_proof);
    return subst_proof(other, a, lam(y, y_ann, w));
  }
  Term m = node;
  NameSet incoming = without(other->free_proof, a);
  if (incoming.count(m->name)) {
    NameSet avoid = unite(incoming, unite(m->kid(0)->free_proof, m->kid(1)->free_proof));
    avoid.insert(a);
    std::string fresh = fresh_name(m->name, avoid);
    m = par(fresh, subst_proof(m->kid(0), m->name, var(fresh)), subst_proof(m->kid(1), m->name, var(fresh)),
            m->ann, m->ann2);
  }
  int side = leaf_path[depth];
  return with_kid(m, side, communicate(m->kid(side), leaf_path, depth + 1, other, a, y_ann));
}

}  // namespace detail

/// Applies exactly one rule instance at `site`, which must be a current
/// head redex of some parallel process of t.
inline Term contract(const Term& t, const RedexSite& site, const Context* ctx = nullptr) {
  // Locate the leaf holding the starting symbol and re-derive its redex.
  Path leaf_path;
  Term leaf = t;
  while (leaf->kind == TermKind::Par && leaf_path.size() < site.start.size()) {
    leaf_path.push_back(site.start[leaf_path.size()]);
    leaf = leaf->kid(leaf_path.back());
  }
  if (leaf->kind == TermKind::Par)
    throw ReductionError(ReductionError::Kind::SiteStale, "site does not reach an elementary process");
  auto anc = detail::spine_ancestors(t, leaf_path);
  auto current = detail::leaf_redex(leaf_path, leaf, anc, ctx);
  if (!current || !(*current == site)) {
    if (site.kind == RedexKind::AbortRule && unwind(leaf).head->kind == TermKind::Abort)
      throw ReductionError(ReductionError::Kind::AbortTypeMismatch, "abort rule does not apply at " + path_string(site.path));
    throw ReductionError(ReductionError::Kind::SiteStale, "no " + std::string(redex_kind_name(site.kind)) +
                                                              " redex at " + path_string(site.path));
  }

  switch (site.kind) {
    case RedexKind::DLeft:
    case RedexKind::DRight: {
      Term n = subterm_at(t, site.path);
      int side = site.kind == RedexKind::DLeft ? 0 : 1;
      const Formula& hyp = side == 0 ? n->ann : n->ann2;
      Formula y_ann = hyp && hyp->kind == FormulaKind::Imp ? hyp->rhs : nullptr;
      Term branch = detail::communicate(n->kid(side), leaf_path, site.path.size() + 1, n->kid(1 - side), n->name, y_ann);
      return replace_at(t, site.path, with_kid(n, side, branch));
    }
    case RedexKind::AbortRule:
      return replace_at(t, leaf_path, unwind(leaf).elims[0]->kid(1));
    default:
      return replace_at(t, site.path, detail::contract_stack(subterm_at(t, site.path), site.kind));
  }
}

struct Step {
  RedexSite site;
  Term after;
};

/// One head-reduction step, or nothing when t is a head normal form.
inline std::optional<Step> head_step(const Term& t, const Context* ctx = nullptr) {
  auto site = leftmost_head_redex(t, ctx);
  if (!site) return std::nullopt;
  return Step{*site, contract(t, *site, ctx)};
}

}  // namespace dlc
