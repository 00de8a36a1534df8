#include "doctest.h"
#include "trilin/principal_series.hpp"

using namespace trilin;

namespace {

FiniteCharacter quad(int p) {
  return p == 2 ? FiniteCharacter(2, {Rational(1, 2), Rational(0)}) : FiniteCharacter(p, {Rational(1, 2)});
}

BorelCharacter chi_of(int p, bool ram, bool ramp) {
  return {QuasiCharacter::mu(1, ram ? quad(p) : FiniteCharacter::trivial(p)),
          QuasiCharacter::mu_prime(1, ramp ? quad(p) : FiniteCharacter::trivial(p)), 1};
}

const ScalarRing& ring(int p) { return ScalarRing::exact(p, 2); }

}  // namespace

TEST_CASE("new vectors") {
  const PadicContext ctx = PadicContext::make(3);
  SUBCASE("unramified: constant 1 on K") {
    KModelVector v = model_new_vector(ctx, chi_of(3, false, false), ring(3), 2);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v.value(i) == ring(3).one());
  }
  SUBCASE("mu' ramified: supported on I_n") {
    const BorelCharacter chi = chi_of(3, false, true);
    KModelVector v = model_new_vector(ctx, chi, ring(3), 3);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Mat2 k = v.space().rep(i);
      const bool inside = in_iwahori(k, 1);
      CHECK(v.value(i).is_zero() == !inside);
      if (inside) CHECK(v.value(i) == chi.mu_prime.eval(k.d).to_scalar(ring(3)));
    }
  }
  SUBCASE("level too small") { CHECK_THROWS(model_new_vector(ctx, chi_of(3, true, true), ring(3), 2)); }
}

TEST_CASE("action of G") {
  const PadicContext ctx = PadicContext::make(3);
  const ScalarRing& R = ring(3);
  const BorelCharacter chi = chi_of(3, false, false);
  KModelVector v = model_new_vector(ctx, chi, R, 2);
  CHECK(act(Mat2::identity(ctx), v).equals(v));
  const ValuedElement z = ValuedElement::from_int(ctx, 3);
  CHECK(act(Mat2::diag(z, z), v).equals(chi.omega().eval(z).to_scalar(R) * v));
  KModelVector gv = gamma_act(v, 1);
  CHECK(gv.at(Mat2::identity(ctx)) == alpha_of(chi).to_scalar(R));
}

TEST_CASE("gamma-translate closed forms") {
  const PadicContext ctx = PadicContext::make(3);
  const ScalarRing& R = ring(3);
  const BorelCharacter nr = chi_of(3, false, false);
  const Mat2 w = Mat2::weyl(ctx);
  CHECK(gamma_closed_form(LemmaCase::NR, nr, R, 2, w) == beta_of(nr).to_scalar(R).pow(2));
  CHECK(gamma_closed_form(LemmaCase::NR, nr, R, 2, w, GammaVariant::MinusBetaPrev).is_zero());
  CHECK(gamma_closed_form(LemmaCase::NR, nr, R, 2, Mat2::from_ints(ctx, 1, 0, 3, 1), GammaVariant::MinusBetaPrev)
            .is_zero());

  for (int pat = 0; pat < 4; ++pat) {
    const BorelCharacter chi = chi_of(3, pat & 1, pat & 2);
    const LemmaCase lc = lemma_case_of(chi);
    for (int r = 0; r <= 2; ++r) {
      KModelVector v = gamma_translate(ctx, chi, R, r);
      for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(gamma_closed_form(lc, chi, R, r, v.space().rep(i)) == v.value(i));
    }
  }
  CHECK_THROWS(gamma_closed_form(LemmaCase::NR, chi_of(3, true, false), R, 1, w));
}

TEST_CASE("star vectors") {
  const PadicContext ctx = PadicContext::make(3);
  const ScalarRing& R = ring(3);
  SUBCASE("side 1: a ring I_x \\ I_{x+1} iff mu_1 is ramified") {
    const StrataBand ring = star_support(chi_of(3, true, true), 1, 2);
    CHECK(ring.from == 2);
    CHECK(ring.to_exclusive == 3);
    const StrataBand disc = star_support(chi_of(3, false, true), 1, 2);
    CHECK(disc.from == 2);
    CHECK_FALSE(disc.to_exclusive.has_value());
  }
  SUBCASE("side 2, mu'_2 unramified") {
    const StrataBand band = star_support(chi_of(3, false, false), 2, 1);
    CHECK(band.from == 0);
    CHECK(band.to_exclusive == 2);
  }
  SUBCASE("side 1, V1 unramified, x = 1") {
    const BorelCharacter chi = chi_of(3, false, false);
    KModelVector v = star_vector(ctx, chi, R, 1, 1);
    const Scalar a = alpha_of(chi).to_scalar(R), b = beta_of(chi).to_scalar(R);
    CHECK(v.at(Mat2::identity(ctx)) == a - b);
    CHECK(v.at(Mat2::weyl(ctx)).is_zero());
  }
  CHECK_THROWS(star_vector(ctx, chi_of(3, false, false), R, 1, 0));
}

TEST_CASE("eigenspaces") {
  const PadicContext ctx = PadicContext::make(3);
  const ScalarRing& R = ring(3);
  const BorelCharacter nr = chi_of(3, false, false);
  CHECK(eigenspace(ctx, nr, R, 3, 0, nr.omega()).dimension == 1);
  CHECK(eigenspace(ctx, nr, R, 3, 1, nr.omega()).dimension == 2);
  const BorelCharacter sp = chi_of(3, true, true);
  CHECK(eigenspace(ctx, sp, R, 3, 1, sp.omega()).dimension == 0);
  CHECK(eigenspace(ctx, sp, R, 3, 2, sp.omega()).dimension == 1);
}
