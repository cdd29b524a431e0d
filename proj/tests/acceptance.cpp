// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace dlc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& title, const Outcome& o) {
  std::cout << "criterion " << n << " [" << (o.pass ? "PASS" : "FAIL") << "] " << title << ": " << o.detail << "\n";
  if (!o.pass) ++failures;
}

template <class F>
void run(int n, const std::string& title, F&& f) {
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  report(n, title, o);
}

std::vector<CorpusEntry> entries;
std::vector<testkit::RandomCase> randoms;
const Context random_ctx = testkit::RandomTerms::base();

bool typed_par(const CorpusEntry& e) { return e.typed() && e.term()->kind == TermKind::Par; }

std::vector<std::string> witness_names(const std::vector<IndTerm>& ws) {
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(to_string(w));
  return out;
}

const CorpusEntry& entry(const std::string& name) {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw std::runtime_error("missing corpus entry " + name);
}

Outcome golden_traces() {
  struct Expected {
    const char* name;
    std::vector<const char*> terms;
  };
  std::vector<Expected> exp = {
      {"trace1", {"a (fun z => z) u par a z0", "z0 par a z0"}},
      {"trace2", {"inj0 u case[x0 => k0 x0 | x1 => k1 x1] s", "k0 u s"}},
      {"trace3",
       {"(fun y => (fun x => x) z0) z1 par a a z1", "(fun x => x) z0 par a a z1", "z0 par a a z1", "z0 par a z0"}},
  };
  Outcome o;
  std::ostringstream d;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& x : exp) {
    const auto& e = entry(x.name);
    Trace tr = normalize(e.term(), {.context = &e.context()});
    bool ok = tr.status == TraceStatus::Normalized && tr.steps.size() == x.terms.size();
    for (std::size_t i = 0; ok && i < x.terms.size(); ++i) ok = alpha_equal(tr.steps[i].after, parse_term(x.terms[i]));
    d << x.name << " " << tr.steps.size() << "/" << x.terms.size() << (ok ? " ok; " : " MISMATCH; ");
    o.pass = o.pass && ok;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  d << "runtime " << ms << " ms";
  o.pass = o.pass && ms < 1000.0;
  o.detail = d.str();
  return o;
}

Outcome subject_reduction() {
  std::size_t terms = 0, steps = 0, bad = 0;
  std::string first;
  for (const auto& e : entries) {
    if (!e.typed()) continue;
    ++terms;
    Term cur = e.term();
    while (auto s = head_step(cur, &e.context())) {
      ++steps;
      AuditReport r = audit_step(e.context(), cur, s->after, e.flavor());
      if (!r.ok && bad++ == 0) first = e.name + ": " + r.message;
      cur = s->after;
    }
  }
  Outcome o;
  o.pass = bad == 0 && terms > 0;
  o.detail = std::to_string(terms) + " typed terms, " + std::to_string(steps) + " audited steps, " +
             std::to_string(bad) + " violations" + (first.empty() ? "" : " (" + first + ")");
  return o;
}

Outcome normalization() {
  std::size_t terms = 0, bad = 0, rsteps = 0, rbad = 0;
  for (const auto& e : entries) {
    if (!e.typed()) continue;
    ++terms;
    Trace tr = normalize(e.term(), {.fuel = 1'000'000, .record = false, .context = &e.context()});
    bad += tr.status != TraceStatus::Normalized;
  }
  std::size_t max_depth = 0;
  for (const auto& c : randoms) {
    max_depth = std::max(max_depth, testkit::depth(c.term));
    Trace tr = normalize(c.term, {.fuel = 1'000'000, .record = false, .context = &random_ctx});
    rbad += tr.status != TraceStatus::Normalized;
    rsteps += tr.fuel_used;
  }
  Outcome o;
  o.pass = bad == 0 && rbad == 0 && randoms.size() >= 500 && max_depth <= 8;
  o.detail = "corpus " + std::to_string(terms - bad) + "/" + std::to_string(terms) + " normalized; random " +
             std::to_string(randoms.size() - rbad) + "/" + std::to_string(randoms.size()) + " (max depth " +
             std::to_string(max_depth) + ", " + std::to_string(rsteps) + " steps)";
  return o;
}

Outcome hnf_shape() {
  std::size_t forms = 0, viol = 0;
  for (const auto& e : entries) {
    Trace tr = normalize(e.term(), {.record = false, .context = &e.context()});
    viol += classify_hnf(tr.result, &e.context()).violations();
    ++forms;
  }
  for (const auto& c : randoms) {
    Trace tr = normalize(c.term, {.record = false, .context = &random_ctx});
    viol += classify_hnf(tr.result, &random_ctx).violations();
    ++forms;
  }
  Outcome o;
  o.pass = viol == 0;
  o.detail = std::to_string(forms) + " normal forms, " + std::to_string(viol) + " violations";
  return o;
}

Outcome herbrand() {
  Outcome o;
  HerbrandResult ed = herbrand_pipeline(entry("exists_dummett").term(), Flavor::LC);
  auto ws = witness_names(ed.witnesses);
  bool first = ws == std::vector<std::string>{"c1", "c0"};
  std::size_t n = 0, bad = 0;
  for (const auto& e : entries) {
    if (!e.typed() || !e.term()->free_proof.empty() || contains_abort(e.term())) continue;
    if (e.prepared.type->kind != FormulaKind::ExistsInd) continue;
    ++n;
    try {
      HerbrandResult r = herbrand_pipeline(e.term(), e.flavor());
      bool ok = as_herbrand_form(r.source_trace.result).has_value() &&
                alpha_equal(typecheck({}, r.proof, e.flavor()), r.disjunction);
      if (auto w = e.meta("witnesses")) ok = ok && witness_names(r.witnesses) == split_list(*w);
      bad += !ok;
    } catch (const std::exception&) {
      ++bad;
    }
  }
  o.pass = first && bad == 0 && n > 0;
  o.detail = "exists_dummett witnesses [" + (ws.empty() ? "" : ws[0]) + (ws.size() > 1 ? ", " + ws[1] : "") + "]; " +
             std::to_string(n - bad) + "/" + std::to_string(n) + " closed existential terms round-trip";
  return o;
}

Outcome simulation() {
  std::size_t terms = 0, steps = 0, bad = 0, left = 0, right = 0;
  for (const auto& e : entries) {
    if (!typed_par(e)) continue;
    ++terms;
    SimulationReport r = check_simulation(make_simulation(e.term(), e.context(), e.flavor()), e.context(), e.flavor());
    bad += !r.subject_normalized;
    for (const auto& s : r.steps) {
      ++steps;
      (s.branch == 0 ? left : right)++;
      bad += !s.ok || s.simulated_steps < 1;
    }
  }
  Outcome o;
  o.pass = bad == 0 && terms > 0;
  o.detail = std::to_string(terms) + " par terms, " + std::to_string(steps) + " subject steps (" +
             std::to_string(left) + " left, " + std::to_string(right) + " right), " + std::to_string(bad) +
             " failures";
  return o;
}

Outcome parallel() {
  std::size_t terms = 0, bad = 0, existential = 0, agree = 0;
  for (const auto& e : entries) {
    if (!typed_par(e)) continue;
    ++terms;
    try {
      ParallelResult r = parallel_normalize(e.term(), {.context = &e.context(), .flavor = e.flavor()});
      bool ok = r.shape.ok() && alpha_equal(typecheck(e.context(), r.result, e.flavor()), e.prepared.type);
      if (e.prepared.type->kind == FormulaKind::ExistsInd) {
        ++existential;
        auto h = as_herbrand_form(r.result);
        ok = ok && h.has_value();
        Trace seq = normalize(e.term(), {.record = false, .context = &e.context()});
        auto hs = as_herbrand_form(seq.result);
        if (h && hs) {
          std::vector<std::string> a, b;
          for (const auto& l : h->leaves) a.push_back(to_string(l.witness));
          for (const auto& l : hs->leaves) b.push_back(to_string(l.witness));
          std::sort(a.begin(), a.end());
          std::sort(b.begin(), b.end());
          agree += a == b;
        }
      }
      bad += !ok;
    } catch (const std::exception&) {
      ++bad;
    }
  }
  Outcome o;
  o.pass = bad == 0 && terms > 0;
  o.detail = std::to_string(terms - bad) + "/" + std::to_string(terms) +
             " par terms normal and type-preserving; witness multisets agree with sequential on " +
             std::to_string(agree) + "/" + std::to_string(existential) + " existential terms (reported only)";
  return o;
}

Outcome second_order() {
  Outcome o;
  const auto& pb = entry("second_order/pred_beta");
  Trace tr = normalize(pb.term(), {.context = &pb.context()});
  bool one = tr.steps.size() == 1 && tr.steps[0].site.kind == RedexKind::PredBeta;
  const auto& ex = entry("second_order/exists_extract");
  HerbrandResult r = herbrand_pipeline(ex.term(), Flavor::LC2);
  bool ok = alpha_equal(typecheck({}, r.proof, Flavor::LC2), r.disjunction) &&
            witness_names(r.witnesses) == split_list(*ex.meta("witnesses"));
  o.pass = one && ok;
  o.detail = "pred_beta " + std::to_string(tr.steps.size()) + " step(s); extraction " +
             (ok ? "typechecks in lc2" : "FAILED");
  return o;
}

Outcome round_trip() {
  std::size_t terms = 0, bad = 0, replays = 0, rbad = 0;
  for (const auto& e : entries) {
    for (const Term& t : {e.doc().term, e.term()}) {
      ++terms;
      bad += !alpha_equal(parse_term(to_string(t)), t);
    }
    Trace tr = normalize(e.term(), {.context = &e.context()});
    std::vector<std::string> printed;
    for (const auto& s : tr.steps) printed.push_back(to_string(s.after));
    ++replays;
    rbad += !testkit::replay_printed(e.term(), printed, &e.context()).empty();
  }
  Outcome o;
  o.pass = bad == 0 && rbad == 0;
  o.detail = std::to_string(terms - bad) + "/" + std::to_string(terms) + " terms round-trip; " +
             std::to_string(replays - rbad) + "/" + std::to_string(replays) + " traces replay";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : DLC_CORPUS_DIR;
  try {
    entries = load_corpus(dir);
    randoms = testkit::random_terms(500, 8, 20261015);
  } catch (const std::exception& e) {
    std::cout << "setup failed: " << e.what() << "\n";
    return 2;
  }
  run(1, "golden traces", golden_traces);
  run(2, "subject reduction", subject_reduction);
  run(3, "normalization", normalization);
  run(4, "head normal form shape", hnf_shape);
  run(5, "Herbrand extraction", herbrand);
  run(6, "local simulation", simulation);
  run(7, "parallel strategy", parallel);
  run(8, "second order", second_order);
  run(9, "round trip", round_trip);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << "\n";
  return failures == 0 ? 0 : 1;
}
