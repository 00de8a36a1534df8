#include "doctest.h"
#include "trilin/padic.hpp"

using namespace trilin;

namespace {

/// Entry-wise agreement modulo p^20 (BOTTOM entries must be BOTTOM on both sides).
bool close(const Mat2& x, const Mat2& y) {
  auto eq = [](const ValuedElement& a, const ValuedElement& b) {
    if (a.is_bottom() || b.is_bottom()) return a.is_bottom() && b.is_bottom();
    return a.congruent(b, 20);
  };
  return eq(x.a, y.a) && eq(x.b, y.b) && eq(x.c, y.c) && eq(x.d, y.d);
}

}  // namespace

TEST_CASE("valued elements") {
  const PadicContext ctx = PadicContext::make(3, 4);
  auto p = ValuedElement::from_int(ctx, 3);
  auto one = ValuedElement::from_int(ctx, 1);

  auto prod = p * p.inverse();
  CHECK(prod.valuation() == 0);
  CHECK(prod.unit_residue(1) == 1);

  CHECK((one + ValuedElement::from_int(ctx, -1)).is_bottom());

  for (std::int64_t u : {1, 2, 4, 5}) {
    auto s = one + ValuedElement::from_parts(ctx, 2, u, 4);
    CHECK(s.valuation() == 0);
    CHECK(s.residue(4) == (1 + 9 * u) % 81);
  }
}

TEST_CASE("precision is tracked through cancellation") {
  const PadicContext ctx = PadicContext::make(2, 6);
  auto a = ValuedElement::from_int_mod(ctx, 5, 3);
  auto b = ValuedElement::from_int(ctx, 5);
  auto d = a - b;
  CHECK(d.is_bottom());
  CHECK(d.absolute_precision() == 3);
  CHECK(d.divisible_by_pi_power(3));
  CHECK_THROWS_AS(d.divisible_by_pi_power(4), PrecisionError);
}

TEST_CASE("iwasawa factorization") {
  const PadicContext ctx = PadicContext::make(3);
  const auto pv = ValuedElement::from_int(ctx, 3);
  const auto one = ValuedElement::from_int(ctx, 1);
  const auto zero = ValuedElement::bottom(ctx, ctx.N);

  SUBCASE("element of K") {
    Mat2 g = Mat2::from_ints(ctx, 1, 0, 3, 1);
    IwasawaFactors f = iwasawa(g);
    CHECK(close(f.b, Mat2::identity(ctx)));
    CHECK(close(f.k, g));
  }
  SUBCASE("upper triangular") {
    Mat2 g{pv.inverse(), zero, zero, one};
    IwasawaFactors f = iwasawa(g);
    CHECK(close(f.k, Mat2::identity(ctx)));
    CHECK(close(f.b, g));
  }
  SUBCASE("lower-left entry of negative valuation") {
    Mat2 g{one, zero, pv.inverse(), one};
    IwasawaFactors f = iwasawa(g);
    CHECK(f.pivot == IwasawaFactors::Pivot::W);
    CHECK(close(f.k, Mat2::from_ints(ctx, 1, 4, 1, 3)));
    CHECK(close(f.b, Mat2{ValuedElement::from_int(ctx, -3), ValuedElement::from_int(ctx, 4), zero, pv.inverse()}));
    CHECK(close(f.b * f.k, g));
  }
}

TEST_CASE("strata of K") {
  const PadicContext ctx = PadicContext::make(3, 4);
  CHECK(stratum(Mat2::from_ints(ctx, 1, 0, 9, 1)) == 2);
  CHECK(stratum(Mat2::weyl(ctx)) == 0);
  CHECK_FALSE(stratum(Mat2::identity(ctx)).has_value());
  CHECK(in_iwahori(Mat2::identity(ctx), 4));
  CHECK_FALSE(in_iwahori(Mat2::weyl(ctx), 1));
}

TEST_CASE("coset enumeration") {
  CHECK(CosetSpace(PadicContext::make(3), 2).size() == 12);
  CHECK(CosetSpace(PadicContext::make(2), 1).size() == 3);

  const auto reps = coset_reps(PadicContext::make(3), 1);
  REQUIRE(reps.size() == 4);
  Rational total = 0;
  for (const auto& [k, w] : reps) {
    CHECK(w == Rational(1, 4));
    total += w;
  }
  CHECK(total == 1);

  for (int p : {2, 3, 5})
    for (int L = 1; L <= 3; ++L) {
      CosetSpace S(PadicContext::make(p), L);
      CHECK(S.weight() * static_cast<long>(S.size()) == 1);
      for (std::size_t i = 0; i < S.size(); ++i) CHECK(S.index_of(iwasawa(S.rep(i))) == i);
    }
}
