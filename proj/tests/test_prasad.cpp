#include <cmath>

#include "doctest.h"
#include "trilin/prasad.hpp"
#include "trilin/testvec.hpp"

using namespace trilin;

namespace {

FiniteCharacter quad(int p) {
  return p == 2 ? FiniteCharacter(2, {Rational(1, 2), Rational(0)}) : FiniteCharacter(p, {Rational(1, 2)});
}
FiniteCharacter fin(int p, bool r) { return r ? quad(p) : FiniteCharacter::trivial(p); }

BorelCharacter chi(int i, int p, bool ram, bool ramp) {
  return {QuasiCharacter::mu(i, fin(p, ram)), QuasiCharacter::mu_prime(i, fin(p, ramp)), 1};
}

}  // namespace

TEST_CASE("orbit function values") {
  const PadicContext ctx = PadicContext::make(3);
  SUBCASE("both unramified: 1 on I_f") {
    OrbitFunction f = build_f(2, 0, chi(1, 3, false, false), chi(2, 3, false, false));
    for (const auto& pt : if_points(ctx, 2, 0, false, false, 3)) CHECK(f.value(pt.b0, pt.c0).is_one());
    const ValuedElement one = ValuedElement::from_int(ctx, 1), c_out = ValuedElement::from_int(ctx, 3);
    CHECK_FALSE(f.in_If(one, c_out));
    CHECK_FALSE(f.at(Mat2::from_ints(ctx, 1, 1, 3, 1)).has_value());
  }
  SUBCASE("mu1 ramified") {
    const BorelCharacter c1 = chi(1, 3, true, false);
    OrbitFunction f = build_f(2, 0, c1, chi(2, 3, false, false));
    for (const auto& pt : if_points(ctx, 2, 0, true, false, 3))
      CHECK(f.value(pt.b0, pt.c0) == c1.mu.eval(ValuedElement::pi_power(ctx, 2) / pt.c0));
  }
  CHECK_THROWS(build_f(1, 1, chi(1, 3, false, false), chi(2, 3, false, false)));
}

TEST_CASE("closed form of F") {
  const PadicContext ctx = PadicContext::make(3);
  OrbitFunction f = build_f(1, 0, chi(1, 3, false, false), chi(2, 3, false, false));
  const Mat2 k1 = Mat2::from_ints(ctx, 1, 0, 3, 1), w = Mat2::weyl(ctx);
  const ExtValue v = ext_closed(f, k1, w);
  CHECK(v.nonzero);
  CHECK(v.value.is_one());
  // d1 c2 = 0.
  CHECK_FALSE(ext_closed(f, w, w).nonzero);
  CosetSpace S(ctx, 2);
  for (std::size_t i = 0; i < S.size(); ++i) CHECK_FALSE(ext_bruteforce(f, S.rep(i), S.rep(i), 4).nonzero);
}

TEST_CASE("integral over I_f") {
  const PadicContext ctx = PadicContext::make(3);
  const ScalarRing& R = ScalarRing::exact(3, 2);
  OrbitFunction f = build_f(2, 0, chi(1, 3, false, false), chi(2, 3, false, false));
  CHECK(integral_If(ctx, f, R) == R.rational(Rational(1, 9)));
  OrbitFunction g = build_f(2, 0, chi(1, 3, true, false), chi(2, 3, false, false));
  CHECK(integral_If(ctx, g, R).is_zero());
  OrbitFunction h = build_f(1, 0, chi(1, 3, false, false), chi(2, 3, false, false));
  const ScalarRing& N = R.as_numeric(random_assignment(3, 1));
  CHECK(std::abs(N.import(integral_If(ctx, h, R)).to_complex() - Complex(1.0 / 3, 0)) < 1e-12);
}

TEST_CASE("res and the simple case") {
  const PadicContext ctx = PadicContext::make(3);
  const ScalarRing& R = ScalarRing::exact(3, 2);
  const BorelCharacter c1 = chi(1, 3, false, false), c2 = chi(2, 3, false, false);
  KModelVector v1 = model_new_vector(ctx, c1, R, 2), v2 = model_new_vector(ctx, c2, R, 2);
  CHECK(res_diag(gamma_act(v1, 1), v2).at(Mat2::identity(ctx)) == alpha_of(c1).to_scalar(R));

  const BorelCharacter r1 = chi(1, 3, true, false);
  KModelVector s1 = star_vector(ctx, r1, R, 1, 2), s2 = star_vector(ctx, c2, R, 2, 1);
  CHECK(res_diag(s1, s2).is_zero());

  const V3Model iso = V3Model::principal_series(simple_v3_character(c1, c2));
  CHECK(detect_simple_case(c1, c2, iso).kind == SimpleKind::Iso);
  const V3Model generic = V3Model::principal_series(
      {QuasiCharacter::mu(3, FiniteCharacter::trivial(3)), QuasiCharacter::mu_prime(3, FiniteCharacter::trivial(3)), 1});
  CHECK(detect_simple_case(c1, c2, generic).kind == SimpleKind::None);
}

TEST_CASE("Steinberg kernel line") {
  const PadicContext ctx = PadicContext::make(3);
  const ScalarRing& R = ScalarRing::exact(3, 2);
  const QuasiCharacter eta(FiniteCharacter::trivial(3), Monomial::indet(Indet::Alpha3, -1));
  const SteinbergModel st{eta,
                          {eta * QuasiCharacter::abs_half_power(3, -1), eta * QuasiCharacter::abs_half_power(3, 1), 1}};
  CHECK(steinberg_pair(st, st.kernel_line(ctx, R, 2)).in_kernel);

  const V3Model v3 = V3Model::steinberg(eta);
  CHECK(v3.conductor() == 1);
  CHECK(v3.contains(v3.new_vector(ctx, R, 2)));
}

TEST_CASE("constant of F") {
  const PadicContext ctx = PadicContext::make(3);
  const ScalarRing& R = ScalarRing::exact(3, 2);
  const BorelCharacter c1 = chi(1, 3, true, true), c2 = chi(2, 3, true, true);
  CHECK(calculF_constant(c1, c2, 3, 1, R).lambda_inverse == R.one());

  const BorelCharacter u1 = chi(1, 3, false, false), r2 = chi(2, 3, true, false);
  const CalcFCheck chk = calculF_check(ctx, u1, r2, 2, 0, R);
  CHECK(chk.mismatches == 0);
  CHECK(chk.support > 0);
}

TEST_CASE("phi on the new vector of V3") {
  auto spec = [](bool ram1) {
    CaseSpec s;
    s.p = 3;
    s.mu1 = fin(3, ram1);
    s.mu1p = s.mu2 = s.mu2p = FiniteCharacter::trivial(3);
    s.fin3 = fin(3, ram1);
    s.fin3p = FiniteCharacter::trivial(3);
    return s;
  };
  for (bool ram1 : {false, true}) {
    const TrilinearCase t = make_case(spec(ram1));
    const ScalarRing& R = ScalarRing::exact(3, case_root_order(t));
    const Form val = phi_build(t.ctx, t.v3, t.chi1, t.chi2, R, 2).apply(t.v3.new_vector(t.ctx, R, 2));
    CHECK(val.exact_zero() == ram1);
    if (!ram1) CHECK(std::abs(val.evaluate(random_assignment(3, 3))) > 1e-6);
  }
}
