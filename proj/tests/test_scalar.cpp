#include <cmath>

#include "doctest.h"
#include "trilin/scalar.hpp"

using namespace trilin;

TEST_CASE("exact ring arithmetic") {
  const ScalarRing& R = ScalarRing::exact(3, 4);
  const Scalar a1 = R.indet(Indet::Alpha1);
  CHECK(a1 * R.indet(Indet::Alpha1, -1) == R.one());
  CHECK(R.t() * R.t() == R.integer(3));
  CHECK((R.zeta(1) + R.zeta(3)).is_zero());
  CHECK((a1 - a1).is_zero());
  CHECK_FALSE((a1 - R.indet(Indet::Beta1)).is_zero());
  CHECK(R.beta3() * R.indet(Indet::Alpha1) * R.indet(Indet::Beta1) * R.indet(Indet::Alpha2) *
            R.indet(Indet::Beta2) * R.indet(Indet::Alpha3) ==
        R.one());
  CHECK((a1 * R.indet(Indet::Beta1)).invert_monomial() == R.indet(Indet::Alpha1, -1) * R.indet(Indet::Beta1, -1));
  CHECK_THROWS((a1 + R.one()).invert_monomial());
}

TEST_CASE("cyclotomic reduction") {
  for (int M : {3, 4, 5, 8, 12}) {
    const ScalarRing& R = ScalarRing::exact(5, M);
    Scalar sum = R.zero();
    for (int k = 0; k < M; ++k) sum += R.zeta(k);
    CHECK(sum.is_zero());
    CHECK(R.zeta(1).pow(M) == R.one());
  }
}

TEST_CASE("numeric backend") {
  const Assignment a = random_assignment(3, 7);
  const ScalarRing& N = ScalarRing::numeric(3, 4, a);
  CHECK(N.from_complex({1e-14, 0}).is_zero(1e-9));
  CHECK_FALSE(N.from_complex({1e-3, 0}).is_zero(1e-9));

  const ScalarRing& R = ScalarRing::exact(3, 4);
  CHECK(std::abs(numeric_eval(R.t(2), a) - Complex(3, 0)) < 1e-12);
  const Scalar ab = R.indet(Indet::Alpha1) * R.indet(Indet::Beta1);
  const auto i1 = static_cast<std::size_t>(Indet::Alpha1), i2 = static_cast<std::size_t>(Indet::Beta1);
  CHECK(std::abs(numeric_eval(ab, a) - a.values[i1] * a.values[i2]) < 1e-12);
  CHECK(std::abs(N.import(ab).to_complex() - a.values[i1] * a.values[i2]) < 1e-12);
}

TEST_CASE("geometric tails") {
  const ScalarRing& N = ScalarRing::numeric(3, 1, random_assignment(3, 1));
  CHECK(std::abs(geometric_tail(N.from_complex(0.5), N.one()).to_complex() - Complex(2, 0)) < 1e-12);
  CHECK(std::abs(geometric_tail(N.zero(), N.from_complex({0.3, 0.2})).to_complex() - Complex(0.3, 0.2)) < 1e-12);
  CHECK(std::abs(geometric_tail(N.from_complex(3), N.one()).to_complex() - Complex(-0.5, 0)) < 1e-12);
  CHECK_THROWS_AS(geometric_tail(N.one(), N.one()), ArithmeticError);
}

TEST_CASE("random assignments are reproducible and avoid the excluded set") {
  const Assignment a = random_assignment(5, 42), b = random_assignment(5, 42);
  for (int i = 0; i < kNumIndets; ++i) CHECK(a.values[static_cast<std::size_t>(i)] == b.values[static_cast<std::size_t>(i)]);
  CHECK(std::abs(a.t * a.t - Complex(5, 0)) < 1e-12);
}
