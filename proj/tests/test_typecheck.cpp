#include <gtest/gtest.h>

#include "support.hpp"

using namespace dlc;

namespace {

Term T(const std::string& s) { return parse_term(s); }
Formula F(const std::string& s) { return parse_formula(s); }

TypeErrorKind error_of(const Context& g, const std::string& src, Flavor fl = Flavor::LC) {
  try {
    typecheck(g, T(src), fl);
  } catch (const TypeError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no type error for " << src;
  return TypeErrorKind::TypeMismatch;
}

}  // namespace

TEST(Typecheck, DummettAxiom) {
  Formula a = F("P(c0)"), b = F("Q(c0)");
  Term t = par("a", inj(0, var("a"), disj(imp(a, b), imp(b, a))), inj(1, var("a"), disj(imp(a, b), imp(b, a))),
               imp(a, b), imp(b, a));
  EXPECT_TRUE(alpha_equal(typecheck({}, t, Flavor::LC), disj(imp(a, b), imp(b, a))));
}

TEST(Typecheck, WeakExcludedMiddleByHand) {
  // each judgement of the tree, checked separately
  Formula A = F("P(c0)"), nA = neg(A), nnA = neg(nA);
  Context left{{"a", imp(nnA, nA)}, {"x", A}};
  EXPECT_TRUE(alpha_equal(typecheck(left, T("fun y : ~P(c0) => y x"), Flavor::LC), nnA));
  EXPECT_TRUE(alpha_equal(typecheck(left, T("a (fun y : ~P(c0) => y x)"), Flavor::LC), nA));
  EXPECT_TRUE(alpha_equal(typecheck(left, T("a (fun y : ~P(c0) => y x) x"), Flavor::LC), falsum()));
  Context right{{"a", imp(nA, nnA)}, {"z", nA}};
  EXPECT_TRUE(alpha_equal(typecheck(right, T("a z"), Flavor::LC), nnA));
  EXPECT_TRUE(alpha_equal(typecheck(right, T("a z z"), Flavor::LC), falsum()));

  const auto& e = testkit::corpus_entry("weak_em");
  EXPECT_TRUE(alpha_equal(typecheck({}, e.term(), Flavor::LC), disj(nA, nnA)));
}

TEST(Typecheck, ExistentialDummettBranches) {
  Formula goal = F("exists al. P(c0) -> P(al)");
  Context l{{"a", F("P(c0) -> P(c1)")}};
  Context r{{"a", F("P(c1) -> P(c0)")}};
  EXPECT_TRUE(alpha_equal(typecheck(l, T("wit[exists al. P(c0) -> P(al)] c1 a"), Flavor::LC), goal));
  EXPECT_TRUE(
      alpha_equal(typecheck(r, T("wit[exists al. P(c0) -> P(al)] c0 (fun x : P(c0) => x)"), Flavor::LC), goal));
  const auto& e = testkit::corpus_entry("exists_dummett");
  EXPECT_TRUE(alpha_equal(typecheck({}, e.term(), Flavor::LC), goal));
}

TEST(Typecheck, AbortGatedByFlavor) {
  EXPECT_EQ(error_of({}, "abort[P(c0) -> Q(c0)]"), TypeErrorKind::AbortNotAdmitted);
  EXPECT_TRUE(alpha_equal(typecheck({}, T("abort[P(c0) -> Q(c0)]"), Flavor::LCStar), F("P(c0) -> Q(c0)")));
  EXPECT_EQ(error_of({}, "abort"), TypeErrorKind::AbortNotAdmitted);
}

TEST(Typecheck, SecondOrderGatedByFlavor) {
  EXPECT_EQ(error_of({}, "Fun X => fun x : X(c0) => x"), TypeErrorKind::SecondOrderNotAdmitted);
  EXPECT_TRUE(
      alpha_equal(typecheck({}, T("Fun X => fun x : X(c0) => x"), Flavor::LC2), F("forall X. X(c0) -> X(c0)")));
  EXPECT_TRUE(alpha_equal(typecheck({}, T("(Fun X => fun x : X(c0) => x) {b. Q(b)}"), Flavor::LC2),
                          F("Q(c0) -> Q(c0)")));
}

TEST(Typecheck, Errors) {
  Context g{{"h", F("P(c0)")}, {"n", F("~P(c0)")}, {"k", F("Q(al)")}};
  EXPECT_EQ(error_of(g, "z"), TypeErrorKind::UnboundVariable);
  EXPECT_EQ(error_of(g, "h h"), TypeErrorKind::TypeMismatch);
  EXPECT_EQ(error_of(g, "(fun x : Q(c0) => x) h"), TypeErrorKind::TypeMismatch);
  EXPECT_EQ(error_of(g, "inj0 h"), TypeErrorKind::MissingAnnotation);
  EXPECT_EQ(error_of(g, "inj0[Q(c0) \\/ P(c0)] h"), TypeErrorKind::TypeMismatch);
  EXPECT_EQ(error_of(g, "inj0[P(c0) /\\ P(c0)] h"), TypeErrorKind::AnnotationMismatch);
  EXPECT_EQ(error_of(g, "u par[a : P(c0) -> Q(c0), P(c0) -> Q(c0)] v"), TypeErrorKind::ParHypothesesNotDual);
  EXPECT_EQ(error_of(g, "efq[P(c0) /\\ P(c0)] (n h)"), TypeErrorKind::EfqNonAtomicTarget);
  // eigenvariable free in a hypothesis
  EXPECT_EQ(error_of(g, "fun [al] => k"), TypeErrorKind::EigenvariableViolation);
  // eigenvariable escaping through the conclusion
  EXPECT_EQ(error_of(g, "wit[exists b. P(b)] c0 h excase[b, y : P(b) => y]"),
            TypeErrorKind::EigenvariableViolation);
}

TEST(Typecheck, ExCaseAndForall) {
  Context g{{"h", F("P(c0)")}};
  EXPECT_TRUE(alpha_equal(
      typecheck(g, T("wit[exists b. P(b)] c0 h excase[b, y : P(b) => wit[exists al. P(al)] b y]"), Flavor::LC),
      F("exists al. P(al)")));
  EXPECT_TRUE(alpha_equal(typecheck({}, T("fun [al] => fun x : P(al) => x"), Flavor::LC),
                          F("forall al. P(al) -> P(al)")));
  EXPECT_TRUE(alpha_equal(typecheck({}, T("(fun [al] => fun x : P(al) => x) [f(c2)]"), Flavor::LC),
                          F("P(f(c2)) -> P(f(c2))")));
}

TEST(Typecheck, ElaborationFillsAnnotations) {
  Typed t = elaborate({}, T("inj0 a par[a : P(c0) -> Q(c0)] inj1 a"), F("(P(c0) -> Q(c0)) \\/ (Q(c0) -> P(c0))"),
                      Flavor::LC);
  EXPECT_TRUE(alpha_equal(t.type, F("(P(c0) -> Q(c0)) \\/ (Q(c0) -> P(c0))")));
  EXPECT_TRUE(t.term->kid(0)->ann != nullptr);
  EXPECT_TRUE(alpha_equal(typecheck({}, t.term, Flavor::LC), t.type));
}

TEST(Audit, CorpusStepsPreserveType) {
  for (const auto& e : testkit::corpus()) {
    if (!e.typed()) continue;
    auto st = head_step(e.term(), &e.context());
    if (!st) continue;
    AuditReport r = audit_step(e.context(), e.term(), st->after, e.flavor());
    EXPECT_TRUE(r.ok) << e.name << ": " << r.message;
  }
}

TEST(Audit, NormalFormAgainstItself) {
  const auto& e = testkit::corpus_entry("exists_dummett");
  EXPECT_TRUE(audit_step(e.context(), e.term(), e.term(), e.flavor()).ok);
}

TEST(Audit, RetypedBranchIsCaught) {
  Context g{{"h", F("P(c0)")}, {"k", F("Q(c0)")}};
  Term t = T("(fun x : P(c0) => x) h par[a : P(c0) -> P(c0)] h");
  Term bad = T("k par[a : P(c0) -> P(c0)] h");
  AuditReport r = audit_step(g, t, bad, Flavor::LC);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.message.find("SubjectReductionViolation"), std::string::npos);
  // new free variable, same type
  Context g2{{"h", F("P(c0)")}, {"h2", F("P(c0)")}};
  EXPECT_FALSE(audit_step(g2, T("(fun x : P(c0) => x) h"), T("h2"), Flavor::LC).ok);
}

TEST(Typecheck, DeterminismWeakeningMonotonicity) {
  Context g = testkit::RandomTerms::base();
  Context wider = g;
  wider.add("fresh_hyp", F("Q(c2)"));
  for (const auto& c : testkit::random_terms(200, 8, 3)) {
    Formula a = typecheck(g, c.term, Flavor::LC);
    EXPECT_TRUE(alpha_equal(a, c.type));
    EXPECT_TRUE(alpha_equal(typecheck(g, c.term, Flavor::LC), a));
    EXPECT_TRUE(alpha_equal(typecheck(wider, c.term, Flavor::LC), a));
    for (Flavor f : {Flavor::LCStar, Flavor::LC2, Flavor::LC2Star})
      EXPECT_TRUE(alpha_equal(typecheck(g, c.term, f), a));
  }
}
