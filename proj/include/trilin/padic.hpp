#pragma once

// Fixed-precision arithmetic in Q_p, 2x2 matrices over Q_p, the Iwasawa
// factorization G = BK, the Iwahori filtration K = I_0 > I_1 > ... and the
// finite coset spaces (B cap K)\K/K(N) on which level-N vectors live.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace trilin {

using Rational = mpq_class;

/// Raised when a comparison or inversion would have to be decided with no
/// significant digits left.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on violated preconditions (non-invertible matrix, element not in
/// K, bad parameters).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::int64_t ipow(std::int64_t base, int exp);
bool is_prime(int n);
/// Inverse of a unit modulo `mod`.
std::int64_t inv_mod(std::int64_t a, std::int64_t mod);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t mod);
/// Non-negative residue of a modulo mod.
std::int64_t reduce(std::int64_t a, std::int64_t mod);

/// F = Q_p with uniformizer pi = p. `N` is the relative working precision
/// given to elements created from exact integers.
struct PadicContext {
  int p = 0;
  int N = 0;

  static PadicContext make(int p, int N);
  /// Largest N for which p^N still fits comfortably in 62 bits.
  static int max_precision(int p);
  /// Context at the maximal working precision for p.
  static PadicContext make(int p) { return make(p, max_precision(p)); }

  int q() const { return p; }
  std::int64_t pow(int e) const { return ipow(p, e); }
  bool operator==(const PadicContext&) const = default;
};

/// An element pi^v * u of Q_p known modulo p^(v + rel). BOTTOM elements are
/// known only to lie in p^abs Z_p ("zero at this precision").
class ValuedElement {
 public:
  ValuedElement() = default;

  static ValuedElement from_int(const PadicContext& ctx, std::int64_t n);
  /// pi^v * u with u a unit known modulo p^rel.
  static ValuedElement from_parts(const PadicContext& ctx, int v, std::int64_t u, int rel);
  /// The integer n known only modulo p^abs.
  static ValuedElement from_int_mod(const PadicContext& ctx, std::int64_t n, int abs);
  static ValuedElement bottom(const PadicContext& ctx, int abs);
  static ValuedElement pi_power(const PadicContext& ctx, int v);

  bool is_bottom() const { return bottom_; }
  /// Valuation; throws PrecisionError on BOTTOM.
  int valuation() const;
  std::int64_t unit() const { return unit_; }
  int relative_precision() const { return bottom_ ? 0 : rel_; }
  /// Exponent k such that the element is known modulo p^k.
  int absolute_precision() const { return bottom_ ? abs_ : val_ + rel_; }
  int prime() const { return p_; }
  int cap() const { return cap_; }

  bool is_unit() const { return !bottom_ && val_ == 0; }
  bool is_integral() const;
  /// Definitely has valuation >= k (BOTTOM counts when abs >= k).
  bool divisible_by_pi_power(int k) const;

  /// Value modulo p^k as an integer in [0, p^k); requires valuation >= 0 and
  /// enough precision.
  std::int64_t residue(int k) const;
  /// Unit part modulo p^k.
  std::int64_t unit_residue(int k) const;

  ValuedElement operator-() const;
  ValuedElement inverse() const;
  friend ValuedElement operator+(const ValuedElement& x, const ValuedElement& y);
  friend ValuedElement operator-(const ValuedElement& x, const ValuedElement& y) { return x + (-y); }
  friend ValuedElement operator*(const ValuedElement& x, const ValuedElement& y);
  friend ValuedElement operator/(const ValuedElement& x, const ValuedElement& y) { return x * y.inverse(); }

  /// Same value known to the same digits (BOTTOM compares by precision).
  bool operator==(const ValuedElement& other) const;
  /// Congruence modulo p^k; throws if either side is not known that far.
  bool congruent(const ValuedElement& other, int k) const;

  std::string str() const;

 private:
  int p_ = 0;
  int cap_ = 0;
  bool bottom_ = true;
  int val_ = 0;
  int abs_ = 0;
  int rel_ = 0;
  std::int64_t unit_ = 0;
};

/// Decides v(x) >= v(y) when y is not BOTTOM; throws PrecisionError when the
/// available digits cannot tell.
bool valuation_at_least(const ValuedElement& x, const ValuedElement& y);

struct Mat2 {
  ValuedElement a, b, c, d;

  static Mat2 from_ints(const PadicContext& ctx, std::int64_t a, std::int64_t b, std::int64_t c,
                        std::int64_t d);
  static Mat2 identity(const PadicContext& ctx);
  /// gamma^r = diag(pi^{-r}, 1).
  static Mat2 gamma(const PadicContext& ctx, int r = 1);
  /// w = (0 1; 1 0).
  static Mat2 weyl(const PadicContext& ctx);
  static Mat2 diag(const ValuedElement& x, const ValuedElement& y);

  ValuedElement det() const;
  Mat2 inverse() const;
  friend Mat2 operator*(const Mat2& x, const Mat2& y);
  Mat2 scaled(const ValuedElement& s) const { return {a * s, b * s, c * s, d * s}; }

  bool is_upper_triangular() const { return c.is_bottom(); }
  bool in_K() const;
  bool operator==(const Mat2&) const = default;
  std::string str() const;
};

/// g = b * k with b upper triangular and k in K. The chosen k is always of one
/// of two canonical shapes, parametrized by `param`:
///   D-pivot (v(c) >= v(d)):  k = (1 0; e 1),    e = c/d
///   W-pivot (v(c) <  v(d)):  k = (1 1+e; 1 e),  e = d/c in pZ_p
struct IwasawaFactors {
  enum class Pivot { D, W };
  Mat2 b;
  Mat2 k;
  Pivot pivot = Pivot::D;
  ValuedElement param;
};

IwasawaFactors iwasawa(const Mat2& g);

/// The s with k in I_s \ I_{s+1}; std::nullopt is TOP (lower-left entry
/// BOTTOM at the available precision).
std::optional<int> stratum(const Mat2& k);

/// Membership in I_s (s = 0 is K).
bool in_iwahori(const Mat2& k, int s);

/// The coset space (B cap K)\K/K(L). Representatives are exact integer
/// matrices of the two canonical Iwasawa shapes, so every rep is the k-part
/// of its own factorization.
class CosetSpace {
 public:
  CosetSpace(const PadicContext& ctx, int level);

  const PadicContext& context() const { return ctx_; }
  int level() const { return level_; }
  std::size_t size() const { return size_; }

  Mat2 rep(std::size_t i) const;
  IwasawaFactors::Pivot pivot(std::size_t i) const;
  std::int64_t param(std::size_t i) const;

  /// Index of the rep for an Iwasawa k-part whose parameter is known mod p^L.
  std::size_t index_of(const IwasawaFactors& f) const;
  std::size_t index_of(IwasawaFactors::Pivot pivot, std::int64_t param) const;
  /// Index of the rep at this level of rep i of a finer space.
  std::size_t project(const CosetSpace& finer, std::size_t i) const;

  /// Haar weight of each double coset under vol(K) = 1.
  Rational weight() const;

 private:
  PadicContext ctx_;
  int level_;
  std::int64_t pL_;
  std::size_t size_;
};

/// Convenience wrapper matching the enumeration contract: every rep with its
/// Haar weight.
std::vector<std::pair<Mat2, Rational>> coset_reps(const PadicContext& ctx, int level);

/// One grid cell of I_f = (1, pi^{-y} O^{mu'_2}; pi^x O^{mu_1}, 1).
struct IfPoint {
  ValuedElement b0;
  ValuedElement c0;
  Rational weight;
};

/// Grid points of the b0 coordinate: pi^{-y} O (or pi^{-y} O^x when
/// `ramified`) modulo p^level, with additive weights under vol(O) = 1.
std::vector<std::pair<ValuedElement, Rational>> if_axis_b(const PadicContext& ctx, int y, bool ramified,
                                                           int level);
/// Grid points of the c0 coordinate: pi^x O (or pi^x O^x) modulo p^level.
std::vector<std::pair<ValuedElement, Rational>> if_axis_c(const PadicContext& ctx, int x, bool ramified,
                                                           int level);
/// Product grid; requires x - y >= 1 and level > x.
std::vector<IfPoint> if_points(const PadicContext& ctx, int x, int y, bool ram1, bool ram2, int level);

}  // namespace trilin
