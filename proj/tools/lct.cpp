// lct: command-line front end for the kernel.
//
// exit codes: 0 ok, 1 typing error, 2 usage/parse error, 3 precondition
// failure, 4 kernel bug, 5 fuel exhausted

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "dlc/dlc.hpp"

using json = nlohmann::ordered_json;
using namespace dlc;

namespace {

enum Exit { Ok = 0, Typing = 1, Usage = 2, Precondition = 3, KernelBug = 4, Fuel = 5 };

struct Failure {
  int code;
  std::string message;
};

struct Common {
  std::string file;
  std::string flavor;
  bool json = false;
};

Signature load_sig(const std::string& path) {
  if (path.empty()) return Signature::default_signature();
  return parse_signature(read_file(path));
}

std::optional<Flavor> flavor_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto f = parse_flavor(s);
  if (!f) throw Failure{Usage, "unknown flavor " + s};
  return f;
}

json step_record(std::size_t i, const RedexSite& site, const Term& after) {
  json j;
  j["step"] = i;
  j["kind"] = redex_kind_name(site.kind);
  j["path"] = path_string(site.path);
  j["start"] = path_string(site.start);
  j["term"] = after ? json(to_string(after)) : json(nullptr);
  return j;
}

int cmd_check(const Common& c, const Signature& sig) {
  Prepared p = prepare(read_file(c.file), sig, flavor_opt(c.flavor), false);
  if (!p.typed) throw Failure{Precondition, "document is marked untyped"};
  if (c.json)
    std::cout << json{{"type", to_string(p.type)}, {"flavor", flavor_name(p.flavor)}}.dump() << "\n";
  else
    std::cout << to_string(p.type) << "\n";
  return Ok;
}

struct ReduceOpts {
  bool trace = false;
  std::size_t fuel = 1'000'000;
  bool untyped = false;
  bool audit = false;
  std::string strategy = "head";
};

int reduce_parallel(const Prepared& p, const ReduceOpts& r) {
  ParallelOptions po;
  po.fuel = r.fuel;
  po.context = &p.doc.context;
  if (p.typed) po.flavor = p.flavor;
  ParallelResult res;
  try {
    res = parallel_normalize(p.term, po);
  } catch (const ParallelError& e) {
    switch (e.kind()) {
      case ParallelError::Kind::NotParallel: throw Failure{Precondition, e.what()};
      case ParallelError::Kind::FuelExhausted: throw Failure{Fuel, e.what()};
      default: throw Failure{KernelBug, e.what()};
    }
  }
  if (r.trace) {
    std::size_t i = 0;
    for (const auto* ph : {&res.left, &res.right}) {
      const char* name = ph == &res.left ? "left" : "right";
      for (const auto& s : ph->steps) {
        json j = step_record(++i, s.site, s.after);
        j["phase"] = name;
        std::cout << j.dump() << "\n";
      }
    }
    json sum;
    sum["status"] = "Normalized";
    sum["strategy"] = "parallel";
    sum["steps"] = i;
    sum["normal"] = to_string(res.result);
    std::cout << sum.dump() << "\n";
  } else {
    std::cout << to_string(res.result) << "\n";
  }
  return Ok;
}

int cmd_reduce(const Common& c, const ReduceOpts& r, const Signature& sig) {
  Prepared p = prepare(read_file(c.file), sig, flavor_opt(c.flavor), r.untyped);
  if (r.strategy == "parallel") return reduce_parallel(p, r);
  if (r.strategy != "head") throw Failure{Usage, "unknown strategy " + r.strategy};

  NormalizeOptions opt;
  opt.fuel = r.fuel;
  opt.context = &p.doc.context;
  if (r.audit && p.typed) opt.audit = p.flavor;
  Trace tr = normalize(p.term, opt);
  if (r.trace) {
    for (std::size_t i = 0; i < tr.steps.size(); ++i)
      std::cout << step_record(i + 1, tr.steps[i].site, tr.steps[i].after).dump() << "\n";
    json sum;
    sum["status"] = trace_status_name(tr.status);
    sum["strategy"] = "head";
    sum["steps"] = tr.fuel_used;
    sum["normal"] = to_string(tr.result);
    std::cout << sum.dump() << "\n";
  } else {
    std::cout << to_string(tr.result) << "\n";
  }
  if (!tr.audit_failures.empty()) {
    for (const auto& f : tr.audit_failures) std::cerr << f << "\n";
    return KernelBug;
  }
  if (tr.status == TraceStatus::FuelExhausted) {
    std::cerr << "fuel exhausted after " << tr.fuel_used << " steps\n";
    return Fuel;
  }
  return Ok;
}

int cmd_herbrand(const Common& c, const Signature& sig) {
  Prepared p = prepare(read_file(c.file), sig, flavor_opt(c.flavor), false);
  if (!p.typed) throw Failure{Precondition, "document is marked untyped"};
  HerbrandResult h;
  try {
    h = herbrand_pipeline(p.term, p.flavor);
  } catch (const HerbrandError& e) {
    bool pre = e.kind() == HerbrandError::Kind::PreconditionFreeVars ||
               e.kind() == HerbrandError::Kind::PreconditionAbort ||
               e.kind() == HerbrandError::Kind::TypeNotExistential;
    throw Failure{pre ? Precondition : KernelBug, std::string(herbrand_error_name(e.kind())) + ": " + e.what()};
  }
  std::string ws;
  json wj = json::array();
  for (const auto& w : h.witnesses) {
    ws += (ws.empty() ? "" : ", ") + to_string(w);
    wj.push_back(to_string(w));
  }
  if (c.json) {
    json j;
    j["witnesses"] = wj;
    j["disjunction"] = to_string(h.disjunction);
    j["proof"] = to_string(h.proof);
    j["steps"] = h.source_trace.fuel_used;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "witnesses: " << ws << "\n";
    std::cout << "disjunction: " << to_string(h.disjunction) << "\n";
    std::cout << "proof: " << to_string(h.proof) << "\n";
    std::cout << "steps: " << h.source_trace.fuel_used << "\n";
  }
  return Ok;
}

int cmd_simulate(const Common& c, std::size_t max_steps, const Signature& sig) {
  Prepared p = prepare(read_file(c.file), sig, flavor_opt(c.flavor), false);
  if (!p.typed) throw Failure{Precondition, "document is marked untyped"};
  SimulationReport rep;
  try {
    SimulationInstance inst = make_simulation(p.term, p.doc.context, p.flavor);
    rep = check_simulation(inst, p.doc.context, p.flavor, max_steps);
  } catch (const SimulationError& e) {
    throw Failure{Precondition, e.what()};
  }
  json arr = json::array();
  for (const auto& s : rep.steps) {
    if (c.json) {
      arr.push_back({{"step", s.index},
                     {"kind", redex_kind_name(s.kind)},
                     {"branch", s.branch == 0 ? "left" : "right"},
                     {"ok", s.ok},
                     {"simulated", s.simulated_steps},
                     {"abort", s.abort_steps},
                     {"message", s.message}});
    } else {
      std::cout << "step " << s.index << " " << redex_kind_name(s.kind) << " " << (s.branch == 0 ? "left" : "right")
                << ": " << (s.ok ? "ok" : "FAIL") << ", " << s.simulated_steps << " simulated (" << s.abort_steps
                << " abort)";
      if (!s.message.empty()) std::cout << " " << s.message;
      std::cout << "\n";
    }
  }
  if (c.json)
    std::cout << json{{"steps", arr}, {"normalized", rep.subject_normalized}, {"ok", rep.ok()}}.dump() << "\n";
  else
    std::cout << "simulation: " << (rep.ok() ? "ok" : "FAILED") << ", " << rep.steps.size() << " subject steps\n";
  return rep.ok() ? Ok : KernelBug;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof-term kernel for Dummett logic"};
  app.require_subcommand(1);
  std::string sigfile;
  app.add_option("--signature", sigfile, "signature file (const/fun/pred declarations)")->check(CLI::ExistingFile);

  Common common;
  auto add_common = [&](CLI::App* sub, bool with_json) {
    sub->add_option("file", common.file, ".lct document")->required();
    sub->add_option("--flavor", common.flavor, "lc, lcstar, lc2 or lc2star");
    if (with_json) sub->add_flag("--json", common.json, "one JSON object on stdout");
  };

  auto* check = app.add_subcommand("check", "print the type of a document");
  add_common(check, true);

  ReduceOpts ropt;
  auto* reduce = app.add_subcommand("reduce", "head-reduce to normal form");
  add_common(reduce, false);
  reduce->add_flag("--trace", ropt.trace, "one JSON record per step");
  reduce->add_option("--fuel", ropt.fuel, "maximum number of steps");
  reduce->add_flag("--untyped", ropt.untyped, "skip type checking");
  reduce->add_flag("--audit", ropt.audit, "check subject reduction at every step");
  reduce->add_option("--strategy", ropt.strategy, "head or parallel")
      ->check(CLI::IsMember({"head", "parallel"}));

  auto* herbrand = app.add_subcommand("herbrand", "extract Herbrand witnesses");
  add_common(herbrand, true);

  std::size_t max_steps = 1000;
  auto* simulate = app.add_subcommand("simulate", "check the abort simulation of a par term");
  add_common(simulate, true);
  simulate->add_option("--max-steps", max_steps, "bound on each replay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? Ok : Usage;
  }

  try {
    Signature sig = load_sig(sigfile);
    if (*check) return cmd_check(common, sig);
    if (*reduce) return cmd_reduce(common, ropt, sig);
    if (*herbrand) return cmd_herbrand(common, sig);
    if (*simulate) return cmd_simulate(common, max_steps, sig);
  } catch (const Failure& f) {
    std::cerr << f.message << "\n";
    return f.code;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return Usage;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return Typing;
  } catch (const ReductionError& e) {
    std::cerr << "reduction error: " << e.what() << "\n";
    return KernelBug;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Usage;
  }
  return Usage;
}
