#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "support.hpp"

using namespace dlc;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun lct(const std::string& args) {
  std::string cmd = std::string(DLC_LCT_BINARY) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string corpus(const std::string& rel) { return std::string(DLC_CORPUS_DIR) + "/" + rel; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string l;
  while (std::getline(in, l)) out.push_back(l);
  return out;
}

fs::path temp_file(const std::string& name, const std::string& content) {
  fs::path p = fs::temp_directory_path() / ("lct_test_" + name);
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, CheckWeakExcludedMiddle) {
  CliRun r = lct("check " + corpus("weak_em.lct"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "~P(c0) \\/ ~~P(c0)\n");
}

TEST(Cli, HerbrandExistentialDummett) {
  CliRun r = lct("herbrand " + corpus("exists_dummett.lct"));
  EXPECT_EQ(r.code, 0);
  ASSERT_FALSE(r.out.empty());
  EXPECT_EQ(lines(r.out)[0], "witnesses: c1, c0");
  CliRun j = lct("herbrand --json " + corpus("exists_dummett.lct"));
  auto js = nlohmann::json::parse(j.out);
  EXPECT_EQ(js["witnesses"], nlohmann::json({"c1", "c0"}));
  EXPECT_EQ(js["steps"], 0);
}

TEST(Cli, ReduceThirdTraceUntyped) {
  CliRun r = lct("reduce " + corpus("trace3.lct") + " --trace --untyped");
  EXPECT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  auto last = nlohmann::json::parse(ls[3]);
  EXPECT_EQ(last["step"], 4);
  EXPECT_EQ(last["term"], "z0 par a z0");
  auto sum = nlohmann::json::parse(ls[4]);
  EXPECT_EQ(sum["status"], "Normalized");
  EXPECT_EQ(sum["steps"], 4);
  EXPECT_EQ(lct("reduce " + corpus("trace3.lct")).out, "z0 par a z0\n");
}

TEST(Cli, TraceOutputReplays) {
  for (const auto& e : testkit::corpus()) {
    CliRun r = lct("reduce " + e.path + " --trace");
    ASSERT_EQ(r.code, 0) << e.name;
    std::vector<std::string> afters;
    for (const auto& l : lines(r.out)) {
      auto j = nlohmann::json::parse(l);
      if (j.contains("term")) afters.push_back(j["term"]);
    }
    EXPECT_EQ(testkit::replay_printed(e.term(), afters, &e.context()), "") << e.name;
  }
}

TEST(Cli, GoldenTracesMatchByteForByte) {
  std::size_t n = 0;
  for (const auto& e : testkit::corpus()) {
    fs::path golden = fs::path(DLC_CORPUS_DIR) / "golden" / (e.name + ".trace");
    ASSERT_TRUE(fs::exists(golden)) << golden;
    CliRun r = lct("reduce " + e.path + " --trace");
    EXPECT_EQ(r.out, read_file(golden.string())) << e.name;
    ++n;
  }
  EXPECT_EQ(n, testkit::corpus().size());
}

TEST(Cli, ParallelStrategy) {
  CliRun r = lct("reduce --strategy parallel " + corpus("trace3_typed.lct"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "z0 par[a : P(c0) -> P(c0)] z1\n");
  CliRun t = lct("reduce --strategy parallel --trace " + corpus("trace1.lct"));
  EXPECT_EQ(t.code, 0);
  auto ls = lines(t.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(nlohmann::json::parse(ls[0])["phase"], "left");
  EXPECT_EQ(lct("reduce --strategy parallel " + corpus("trace2.lct")).code, 3);
}

TEST(Cli, Simulate) {
  CliRun r = lct("simulate " + corpus("trace1_typed.lct"));
  EXPECT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[1], "step 2 DLeft left: ok, 2 simulated (1 abort)");
  EXPECT_EQ(ls[2], "simulation: ok, 2 subject steps");
  CliRun j = lct("simulate --json --max-steps 50 " + corpus("trace3_typed.lct"));
  EXPECT_EQ(nlohmann::json::parse(j.out)["ok"], true);
}

TEST(Cli, ExitCodes) {
  auto bad_type = temp_file("bad_type.lct", "hyp h : P(c0);\nh h\n");
  EXPECT_EQ(lct("check " + bad_type.string()).code, 1);
  auto bad_syntax = temp_file("bad_syntax.lct", "fun x =>\n");
  EXPECT_EQ(lct("check " + bad_syntax.string()).code, 2);
  EXPECT_EQ(lct("check /nonexistent/file.lct").code, 2);
  EXPECT_EQ(lct("frobnicate").code, 2);
  EXPECT_EQ(lct("check --flavor classical " + corpus("weak_em.lct")).code, 2);
  // open term: precondition
  EXPECT_EQ(lct("herbrand " + corpus("trace1_typed.lct")).code, 3);
  EXPECT_EQ(lct("herbrand " + corpus("weak_em.lct")).code, 3);
  EXPECT_EQ(lct("simulate " + corpus("trace2_typed.lct")).code, 3);
  auto loop = temp_file("loop.lct", "#@ mode: untyped\n(fun x => x x) (fun x => x x)\n");
  EXPECT_EQ(lct("reduce --fuel 30 " + loop.string()).code, 5);
  // abort outside its flavor
  EXPECT_EQ(lct("check --flavor lc " + corpus("abort_suite/fires.lct")).code, 1);
}

TEST(Cli, SignatureFile) {
  auto sig = temp_file("sig.txt", "const k\npred sq/1\n");
  auto doc = temp_file("sig_doc.lct", "fun x : sq(k) => x\n");
  CliRun r = lct("--signature " + sig.string() + " check " + doc.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "sq(k) -> sq(k)\n");
  EXPECT_EQ(lct("check " + doc.string()).code, 2);
}
