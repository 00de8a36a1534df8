#include "doctest.h"
#include "trilin/character.hpp"

using namespace trilin;

TEST_CASE("quasi-character values") {
  const PadicContext ctx = PadicContext::make(3);
  const QuasiCharacter mu = QuasiCharacter::mu(1, FiniteCharacter::trivial(3));
  const ValuedElement x = ValuedElement::from_parts(ctx, 2, 2, 10);
  CHECK(mu.eval(x) == Monomial::indet(Indet::Alpha1, -2) * Monomial::t_power(2));
  CHECK(mu.eval(ValuedElement::from_int(ctx, 1)).is_one());

  const FiniteCharacter f(5, {Rational(1, 4)});
  CHECK(f.conductor() == 1);
  CHECK(unit_group(5, 1).generators().front() == 2);
  CHECK(f.eval_residue(2) == Rational(1, 4));
}

TEST_CASE("products and conductors") {
  const FiniteCharacter a(3, {Rational(1, 2)});
  const QuasiCharacter mu = QuasiCharacter::mu(1, a);
  const QuasiCharacter prod = mu * mu.inverse();
  CHECK(prod.conductor() == 0);
  CHECK(prod.at_pi().is_one());

  CHECK((a * a.inverse()).conductor() == 0);

  // The generator of (Z/9)^x has order 6; image 1/3 is trivial on 1 + 3Z.
  const FiniteCharacter b(3, {Rational(1, 3)});
  CHECK(b.conductor() == 2);
  CHECK((a * b).conductor() == 2);
}

TEST_CASE("Borel characters") {
  const PadicContext ctx = PadicContext::make(3);
  const BorelCharacter chi{QuasiCharacter::mu(1, FiniteCharacter::trivial(3)),
                           QuasiCharacter::mu_prime(1, FiniteCharacter(3, {Rational(1, 2)})), 1};
  const ValuedElement pv = ValuedElement::from_int(ctx, 3), one = ValuedElement::from_int(ctx, 1);
  CHECK(chi.eval(Mat2::diag(pv, one)) == Monomial::indet(Indet::Alpha1, -1));
  CHECK(chi.eval(Mat2::identity(ctx)).is_one());
  const ValuedElement u = ValuedElement::from_int(ctx, 2);
  CHECK(chi.eval(Mat2::diag(u, u)) == chi.omega().eval(u));
  CHECK(chi.n() == 1);
  CHECK(chi.m() == 1);
}

TEST_CASE("central character check") {
  const FiniteCharacter eta(5, {Rational(1, 4)}), triv = FiniteCharacter::trivial(5);
  auto w = [](const FiniteCharacter& f) { return QuasiCharacter(f, Monomial::one()); };
  CHECK(central_check(w(eta), w(eta.inverse()), w(triv)).ok);
  const CentralCheck bad = central_check(w(eta), w(eta), w(triv));
  CHECK_FALSE(bad.ok);
  CHECK(bad.unit_witness.has_value());

  // All unramified with beta_3 eliminated.
  const BorelCharacter c1{QuasiCharacter::mu(1, FiniteCharacter::trivial(3)),
                          QuasiCharacter::mu_prime(1, FiniteCharacter::trivial(3)), 1};
  const BorelCharacter c2{QuasiCharacter::mu(2, FiniteCharacter::trivial(3)),
                          QuasiCharacter::mu_prime(2, FiniteCharacter::trivial(3)), 1};
  const BorelCharacter c3{QuasiCharacter::mu(3, FiniteCharacter::trivial(3)),
                          QuasiCharacter::mu_prime(3, FiniteCharacter::trivial(3)), 1};
  CHECK(central_check(c1, c2, c3).ok);
}

TEST_CASE("discrete log tables") {
  for (int p : {2, 3, 5})
    for (int L = 1; L <= 4; ++L) {
      const UnitGroup& g = unit_group(p, L);
      const UnitGroup copy = UnitGroup::from_table(p, L, g.table());
      CHECK(copy.generators() == g.generators());
      auto bad = g.table();
      for (std::size_t i = 0; i < bad.size(); ++i)
        if (bad[i] > 0) {
          bad[i] += 1;
          break;
        }
      if (bad != g.table()) CHECK_THROWS_AS(UnitGroup::from_table(p, L, bad), DomainError);
    }
}
