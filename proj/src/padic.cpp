#include "trilin/padic.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace trilin {

namespace {

// Absolute precision given to an exact zero.
constexpr int kExactZero = 1 << 20;

int padic_val(std::int64_t n, int p) {
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace

std::int64_t ipow(std::int64_t base, int exp) {
  if (exp < 0) throw DomainError("ipow: negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > LLONG_MAX / base) throw DomainError("ipow: overflow");
    r *= base;
  }
  return r;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int i = 2; i * i <= n; ++i)
    if (n % i == 0) return false;
  return true;
}

std::int64_t reduce(std::int64_t a, std::int64_t mod) {
  std::int64_t r = a % mod;
  return r < 0 ? r + mod : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t mod) {
  return static_cast<std::int64_t>((static_cast<__int128>(reduce(a, mod)) * reduce(b, mod)) % mod);
}

std::int64_t inv_mod(std::int64_t a, std::int64_t mod) {
  if (mod == 1) return 0;
  std::int64_t r0 = mod, r1 = reduce(a, mod);
  __int128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t quot = r0 / r1;
    std::int64_t r2 = r0 - quot * r1;
    __int128 s2 = s0 - quot * s1;
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) throw DomainError("inv_mod: not a unit");
  return reduce(static_cast<std::int64_t>(s0 % mod), mod);
}

// ---------------------------------------------------------------------------

PadicContext PadicContext::make(int p, int N) {
  if (!is_prime(p)) throw DomainError("PadicContext: p must be prime");
  if (N < 1) throw DomainError("PadicContext: N must be >= 1");
  if (N > max_precision(p)) throw DomainError("PadicContext: p^N does not fit in 62 bits");
  return PadicContext{p, N};
}

int PadicContext::max_precision(int p) {
  int n = 0;
  __int128 v = 1;
  while (v * p < (static_cast<__int128>(1) << 62)) {
    v *= p;
    ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------

ValuedElement ValuedElement::bottom(const PadicContext& ctx, int abs) {
  ValuedElement x;
  x.p_ = ctx.p;
  x.cap_ = ctx.N;
  x.bottom_ = true;
  x.abs_ = abs;
  return x;
}

ValuedElement ValuedElement::from_parts(const PadicContext& ctx, int v, std::int64_t u, int rel) {
  if (rel <= 0) throw PrecisionError("from_parts: no significant digits");
  rel = std::min(rel, ctx.N);
  std::int64_t mod = ctx.pow(rel);
  u = reduce(u, mod);
  if (u % ctx.p == 0) throw DomainError("from_parts: unit part divisible by p");
  ValuedElement x;
  x.p_ = ctx.p;
  x.cap_ = ctx.N;
  x.bottom_ = false;
  x.val_ = v;
  x.rel_ = rel;
  x.unit_ = u;
  return x;
}

ValuedElement ValuedElement::from_int(const PadicContext& ctx, std::int64_t n) {
  if (n == 0) return bottom(ctx, kExactZero);
  int v = padic_val(n, ctx.p);
  return from_parts(ctx, v, n / ipow(ctx.p, v), ctx.N);
}

ValuedElement ValuedElement::from_int_mod(const PadicContext& ctx, std::int64_t n, int abs) {
  if (abs <= 0) return bottom(ctx, abs);
  n = reduce(n, ctx.pow(abs));
  if (n == 0) return bottom(ctx, abs);
  int v = padic_val(n, ctx.p);
  return from_parts(ctx, v, n / ipow(ctx.p, v), abs - v);
}

ValuedElement ValuedElement::pi_power(const PadicContext& ctx, int v) { return from_parts(ctx, v, 1, ctx.N); }

int ValuedElement::valuation() const {
  if (bottom_) throw PrecisionError("valuation of BOTTOM element");
  return val_;
}

bool ValuedElement::is_integral() const {
  if (bottom_) {
    if (abs_ < 0) throw PrecisionError("integrality undecidable at precision " + std::to_string(abs_));
    return true;
  }
  return val_ >= 0;
}

bool ValuedElement::divisible_by_pi_power(int k) const {
  if (bottom_) {
    if (abs_ < k) throw PrecisionError("divisibility by p^" + std::to_string(k) + " undecidable");
    return true;
  }
  return val_ >= k;
}

std::int64_t ValuedElement::residue(int k) const {
  if (k <= 0) return 0;
  if (absolute_precision() < k) throw PrecisionError("residue mod p^" + std::to_string(k) + " not known");
  if (bottom_) return 0;
  if (val_ < 0) throw DomainError("residue of non-integral element");
  if (val_ >= k) return 0;
  std::int64_t mod = ipow(p_, k - val_);
  return reduce(unit_, mod) * ipow(p_, val_);
}

std::int64_t ValuedElement::unit_residue(int k) const {
  if (bottom_) throw PrecisionError("unit part of BOTTOM element");
  if (k <= 0) return 0;
  if (k > rel_) throw PrecisionError("unit known only mod p^" + std::to_string(rel_));
  return reduce(unit_, ipow(p_, k));
}

ValuedElement ValuedElement::operator-() const {
  if (bottom_) return *this;
  ValuedElement x = *this;
  x.unit_ = reduce(-unit_, ipow(p_, rel_));
  return x;
}

ValuedElement ValuedElement::inverse() const {
  if (bottom_) throw PrecisionError("inversion of BOTTOM element");
  ValuedElement x = *this;
  x.val_ = -val_;
  x.unit_ = inv_mod(unit_, ipow(p_, rel_));
  return x;
}

ValuedElement operator*(const ValuedElement& x, const ValuedElement& y) {
  PadicContext ctx{x.p_ ? x.p_ : y.p_, std::max(x.cap_, y.cap_)};
  if (x.bottom_ && y.bottom_) return ValuedElement::bottom(ctx, std::min(kExactZero, x.abs_ + y.abs_));
  if (x.bottom_) return ValuedElement::bottom(ctx, std::min(kExactZero, x.abs_ + y.val_));
  if (y.bottom_) return ValuedElement::bottom(ctx, std::min(kExactZero, y.abs_ + x.val_));
  int rel = std::min(x.rel_, y.rel_);
  std::int64_t mod = ipow(ctx.p, rel);
  return ValuedElement::from_parts(ctx, x.val_ + y.val_, mul_mod(x.unit_, y.unit_, mod), rel);
}

ValuedElement operator+(const ValuedElement& x, const ValuedElement& y) {
  PadicContext ctx{x.p_ ? x.p_ : y.p_, std::max(x.cap_, y.cap_)};
  if (x.bottom_ && y.bottom_) return ValuedElement::bottom(ctx, std::min(x.abs_, y.abs_));
  if (y.bottom_) return y + x;
  if (x.bottom_) {
    // y known only modulo p^abs(x).
    if (x.abs_ >= y.absolute_precision()) return y;
    if (y.val_ >= x.abs_) return ValuedElement::bottom(ctx, x.abs_);
    int rel = x.abs_ - y.val_;
    return ValuedElement::from_parts(ctx, y.val_, reduce(y.unit_, ipow(ctx.p, rel)), rel);
  }
  int abs = std::min(x.absolute_precision(), y.absolute_precision());
  int v0 = std::min(x.val_, y.val_);
  if (abs <= v0) return ValuedElement::bottom(ctx, abs);
  int width = abs - v0;
  std::int64_t mod = ipow(ctx.p, width);
  auto term = [&](const ValuedElement& e) -> std::int64_t {
    int shift = e.val_ - v0;
    if (shift >= width) return 0;
    return mul_mod(e.unit_, ipow(ctx.p, shift), mod);
  };
  std::int64_t s = reduce(term(x) + term(y), mod);
  if (s == 0) return ValuedElement::bottom(ctx, abs);
  int k = padic_val(s, ctx.p);
  return ValuedElement::from_parts(ctx, v0 + k, s / ipow(ctx.p, k), width - k);
}

bool ValuedElement::operator==(const ValuedElement& other) const {
  if (bottom_ != other.bottom_) return false;
  if (bottom_) return abs_ == other.abs_;
  return val_ == other.val_ && rel_ == other.rel_ && unit_ == other.unit_;
}

bool ValuedElement::congruent(const ValuedElement& other, int k) const {
  return (*this - other).divisible_by_pi_power(k);
}

std::string ValuedElement::str() const {
  std::ostringstream os;
  if (bottom_) {
    if (abs_ >= kExactZero)
      os << "0";
    else
      os << "O(" << p_ << "^" << abs_ << ")";
  } else {
    os << p_ << "^" << val_ << "*" << unit_ << "+O(" << p_ << "^" << val_ + rel_ << ")";
  }
  return os.str();
}

bool valuation_at_least(const ValuedElement& x, const ValuedElement& y) {
  if (y.is_bottom()) throw PrecisionError("valuation comparison against BOTTOM");
  if (x.is_bottom()) {
    if (x.absolute_precision() >= y.valuation()) return true;
    throw PrecisionError("valuation comparison decided at precision 0");
  }
  return x.valuation() >= y.valuation();
}

// ---------------------------------------------------------------------------

Mat2 Mat2::from_ints(const PadicContext& ctx, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return {ValuedElement::from_int(ctx, a), ValuedElement::from_int(ctx, b), ValuedElement::from_int(ctx, c),
          ValuedElement::from_int(ctx, d)};
}

Mat2 Mat2::identity(const PadicContext& ctx) { return from_ints(ctx, 1, 0, 0, 1); }

Mat2 Mat2::gamma(const PadicContext& ctx, int r) {
  return diag(ValuedElement::pi_power(ctx, -r), ValuedElement::from_int(ctx, 1));
}

Mat2 Mat2::weyl(const PadicContext& ctx) { return from_ints(ctx, 0, 1, 1, 0); }

Mat2 Mat2::diag(const ValuedElement& x, const ValuedElement& y) {
  PadicContext ctx{x.prime(), x.cap()};
  ValuedElement z = ValuedElement::bottom(ctx, kExactZero);
  return {x, z, z, y};
}

ValuedElement Mat2::det() const { return a * d - b * c; }

Mat2 Mat2::inverse() const {
  ValuedElement dt = det();
  if (dt.is_bottom()) throw DomainError("Mat2::inverse: singular to working precision");
  ValuedElement di = dt.inverse();
  return {d * di, -(b * di), -(c * di), a * di};
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

bool Mat2::in_K() const {
  if (!(a.is_integral() && b.is_integral() && c.is_integral() && d.is_integral())) return false;
  return det().is_unit();
}

std::string Mat2::str() const {
  return "(" + a.str() + ", " + b.str() + "; " + c.str() + ", " + d.str() + ")";
}

IwasawaFactors iwasawa(const Mat2& g) {
  PadicContext ctx{g.a.prime() ? g.a.prime() : g.d.prime(), std::max(g.a.cap(), g.d.cap())};
  ValuedElement dt = g.det();
  if (dt.is_bottom()) throw DomainError("iwasawa: matrix not invertible at working precision");
  ValuedElement one = ValuedElement::from_int(ctx, 1);
  ValuedElement zero = ValuedElement::bottom(ctx, kExactZero);

  bool d_pivot;
  if (g.d.is_bottom()) {
    if (g.c.is_bottom()) throw PrecisionError("iwasawa: bottom row indistinguishable from 0");
    d_pivot = false;
  } else {
    d_pivot = valuation_at_least(g.c, g.d);
  }

  IwasawaFactors f;
  if (d_pivot) {
    ValuedElement e = g.c / g.d;
    f.pivot = IwasawaFactors::Pivot::D;
    f.param = e;
    f.b = {dt / g.d, g.b, zero, g.d};
    f.k = {one, zero, e, one};
  } else {
    ValuedElement e = g.d / g.c;
    ValuedElement dc = dt / g.c;
    f.pivot = IwasawaFactors::Pivot::W;
    f.param = e;
    f.b = {-dc, g.a + dc, zero, g.c};
    f.k = {one, one + e, one, e};
  }
  return f;
}

std::optional<int> stratum(const Mat2& k) {
  if (!k.in_K()) throw DomainError("stratum: matrix not in K");
  if (!k.d.is_unit()) return 0;
  if (k.c.is_bottom()) return std::nullopt;
  return k.c.valuation();
}

bool in_iwahori(const Mat2& k, int s) {
  if (!k.in_K()) return false;
  if (s <= 0) return true;
  auto st = stratum(k);
  return !st || *st >= s;
}

// ---------------------------------------------------------------------------

CosetSpace::CosetSpace(const PadicContext& ctx, int level) : ctx_(ctx), level_(level) {
  if (level < 1) throw DomainError("CosetSpace: level must be >= 1");
  if (level > ctx.N) throw DomainError("CosetSpace: level exceeds working precision");
  pL_ = ctx.pow(level);
  size_ = static_cast<std::size_t>(pL_ + pL_ / ctx.p);
}

IwasawaFactors::Pivot CosetSpace::pivot(std::size_t i) const {
  return static_cast<std::int64_t>(i) < pL_ ? IwasawaFactors::Pivot::D : IwasawaFactors::Pivot::W;
}

std::int64_t CosetSpace::param(std::size_t i) const {
  auto j = static_cast<std::int64_t>(i);
  return j < pL_ ? j : (j - pL_) * ctx_.p;
}

Mat2 CosetSpace::rep(std::size_t i) const {
  std::int64_t e = param(i);
  if (pivot(i) == IwasawaFactors::Pivot::D) return Mat2::from_ints(ctx_, 1, 0, e, 1);
  return Mat2::from_ints(ctx_, 1, 1 + e, 1, e);
}

std::size_t CosetSpace::index_of(IwasawaFactors::Pivot pv, std::int64_t e) const {
  e = reduce(e, pL_);
  if (pv == IwasawaFactors::Pivot::D) return static_cast<std::size_t>(e);
  if (e % ctx_.p != 0) throw DomainError("CosetSpace: W-pivot parameter must lie in pZ_p");
  return static_cast<std::size_t>(pL_ + e / ctx_.p);
}

std::size_t CosetSpace::index_of(const IwasawaFactors& f) const { return index_of(f.pivot, f.param.residue(level_)); }

std::size_t CosetSpace::project(const CosetSpace& finer, std::size_t i) const {
  if (finer.level_ < level_) throw DomainError("CosetSpace::project: source is coarser");
  return index_of(finer.pivot(i), finer.param(i));
}

Rational CosetSpace::weight() const { return Rational(1, static_cast<unsigned long>(size_)); }

std::vector<std::pair<Mat2, Rational>> coset_reps(const PadicContext& ctx, int level) {
  CosetSpace space(ctx, level);
  std::vector<std::pair<Mat2, Rational>> out;
  out.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) out.emplace_back(space.rep(i), space.weight());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<ValuedElement, Rational>> if_axis_b(const PadicContext& ctx, int y, bool ramified, int level) {
  if (level < 1 || level + y > ctx.N) throw DomainError("if_axis_b: level out of range");
  std::vector<std::pair<ValuedElement, Rational>> out;
  Rational w(1, static_cast<unsigned long>(ctx.pow(level)));
  ValuedElement shift = ValuedElement::pi_power(ctx, -y);
  std::int64_t count = ctx.pow(level + y);
  for (std::int64_t j = 0; j < count; ++j) {
    if (ramified && j % ctx.p == 0) continue;
    out.emplace_back(ValuedElement::from_int_mod(ctx, j, level + y) * shift, w);
  }
  return out;
}

std::vector<std::pair<ValuedElement, Rational>> if_axis_c(const PadicContext& ctx, int x, bool ramified, int level) {
  if (x < 0 || level <= x || level > ctx.N) throw DomainError("if_axis_c: need 0 <= x < level");
  std::vector<std::pair<ValuedElement, Rational>> out;
  Rational w(1, static_cast<unsigned long>(ctx.pow(level)));
  ValuedElement shift = ValuedElement::pi_power(ctx, x);
  std::int64_t count = ctx.pow(level - x);
  for (std::int64_t i = 0; i < count; ++i) {
    if (ramified && i % ctx.p == 0) continue;
    out.emplace_back(ValuedElement::from_int_mod(ctx, i, level - x) * shift, w);
  }
  return out;
}

std::vector<IfPoint> if_points(const PadicContext& ctx, int x, int y, bool ram1, bool ram2, int level) {
  if (x - y < 1) throw DomainError("if_points: need x - y >= 1");
  auto bs = if_axis_b(ctx, y, ram2, level);
  auto cs = if_axis_c(ctx, x, ram1, level);
  std::vector<IfPoint> out;
  out.reserve(bs.size() * cs.size());
  for (const auto& [c0, wc] : cs)
    for (const auto& [b0, wb] : bs) out.push_back({b0, c0, Rational(wb * wc)});
  return out;
}

}  // namespace trilin
