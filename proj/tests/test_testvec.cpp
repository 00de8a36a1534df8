#include "doctest.h"
#include "trilin/testvec.hpp"

using namespace trilin;

namespace {

CaseSpec base(int p) {
  CaseSpec s;
  s.name = "t";
  s.p = p;
  s.mu1 = s.mu1p = s.mu2 = s.mu2p = s.fin3 = s.fin3p = FiniteCharacter::trivial(p);
  return s;
}

}  // namespace

TEST_CASE("case construction") {
  CaseSpec s = base(3);
  s.fin3 = FiniteCharacter(3, {Rational(1, 2)});
  s.fin3p = s.fin3;
  const TrilinearCase t = make_case(s);
  CHECK(t.n1 == 0);
  CHECK(t.n3 == 2);

  CaseSpec bad = base(5);
  bad.fin3 = FiniteCharacter(5, {Rational(1, 4)});
  CHECK_THROWS(make_case(bad));
}

TEST_CASE("theorem selection") {
  CaseSpec s = base(3);
  s.fin3 = FiniteCharacter(3, {Rational(1, 2)});
  s.fin3p = s.fin3;
  CHECK(plan_case(make_case(s)).theorem == Theorem::VT00n);

  CaseSpec r = base(3);
  r.mu1 = FiniteCharacter(3, {Rational(1, 2)});
  r.fin3 = r.mu1;
  CHECK(plan_case(make_case(r)).theorem == Theorem::NoVT);
  CHECK(plan_case(make_case(r)).expected == Outcome::Zero);

  CHECK(plan_case(make_case(base(3))).theorem == Theorem::VT000);
}

TEST_CASE("recipes render") {
  CHECK(Recipe{2, 0, 0}.str() == "gamma^2 v1 (x) v2 (x) v3");
  CHECK(Recipe{0, 1, 0}.str() == "v1 (x) gamma v2 (x) v3");
}

TEST_CASE("vanishing certificates") {
  CaseSpec s = base(3);
  s.fin3 = FiniteCharacter(3, {Rational(1, 2)});
  s.fin3p = s.fin3;
  const TrilinearCase t = make_case(s);
  const ScalarRing& R = ScalarRing::exact(3, case_root_order(t));
  CHECK(vanishing_certificate(t.ctx, t.v3, R, 1).certified());
  CHECK_FALSE(vanishing_certificate(t.ctx, t.v3, R, 2).certified());
}

TEST_CASE("test vector verdicts") {
  SUBCASE("unramified pair, n3 = 2") {
    CaseSpec s = base(3);
    s.fin3 = FiniteCharacter(3, {Rational(1, 2)});
    s.fin3p = s.fin3;
    const Verdict v = verify_theorem(make_case(s));
    CHECK(v.outcome == Outcome::Nonzero);
    CHECK(v.passed);
    CHECK(v.exact);
    CHECK(v.sample_abs.size() >= 10);
  }
  SUBCASE("mu1 ramified: no test vector of that shape") {
    CaseSpec r = base(3);
    r.mu1 = FiniteCharacter(3, {Rational(1, 2)});
    r.fin3 = r.mu1;
    const Verdict v = verify_theorem(make_case(r));
    CHECK(v.outcome == Outcome::Zero);
    CHECK(v.passed);
  }
  SUBCASE("simple isomorphic case") {
    CaseSpec s = base(3);
    s.v3 = V3Spec::SimpleIso;
    const Verdict v = verify_theorem(make_case(s));
    CHECK(v.mode == Mode::Simple);
    CHECK(v.passed);
  }
}
