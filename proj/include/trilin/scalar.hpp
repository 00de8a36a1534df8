#pragma once

// Coefficient ring for representation values. The exact backend works in
//   Q(zeta_M)[a1^{+-1}, b1^{+-1}, a2^{+-1}, b2^{+-1}, a3^{+-1}, t] / (t^2 - p)
// where a_i, b_i stand for the unramified parameters alpha_i, beta_i and t is
// a square root of q = p. beta_3 is not a separate variable: it is eliminated
// through alpha_3 beta_3 = (alpha_1 beta_1 alpha_2 beta_2)^{-1}.
// The numeric backend evaluates the same expressions in complex doubles at a
// fixed generic assignment.

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace trilin {

using Rational = mpq_class;
using Complex = std::complex<double>;

class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Backend { Exact, Numeric };

/// The Laurent indeterminates, in storage order.
enum class Indet : int { Alpha1 = 0, Beta1, Alpha2, Beta2, Alpha3 };
inline constexpr int kNumIndets = 5;
const char* indet_name(Indet v);

/// Complex values for the indeterminates; t is sqrt(p).
struct Assignment {
  std::array<Complex, kNumIndets> values{};
  Complex t{};
};

/// Multiplication table of Q(zeta_M) in the power basis 1, z, ..., z^{phi-1}.
class CyclotomicTable {
 public:
  explicit CyclotomicTable(int M);
  int order() const { return M_; }
  int degree() const { return phi_; }
  /// z^k in the power basis (k taken mod M).
  const std::vector<long>& power(int k) const;
  /// Coefficients of the M-th cyclotomic polynomial, low degree first.
  const std::vector<long>& cyclotomic_polynomial() const { return phi_poly_; }

 private:
  int M_;
  int phi_;
  std::vector<long> phi_poly_;
  std::vector<std::vector<long>> powers_;
};

/// Element of Q(zeta_M) in the power basis.
struct Cyclo {
  std::vector<Rational> c;

  bool is_zero() const;
  bool operator==(const Cyclo& o) const { return c == o.c; }
};

class ScalarRing;

/// Exponent key of a monomial: exponents of a1,b1,a2,b2,a3 and t in {0,1}.
struct MonoKey {
  std::array<int, kNumIndets> e{};
  int t = 0;
  auto operator<=>(const MonoKey&) const = default;
};

class Scalar {
 public:
  Scalar() = default;

  const ScalarRing* ring() const { return ring_; }
  Backend backend() const;

  friend Scalar operator+(const Scalar& x, const Scalar& y);
  friend Scalar operator-(const Scalar& x, const Scalar& y);
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& y) { return *this = *this + y; }
  Scalar& operator-=(const Scalar& y) { return *this = *this - y; }
  Scalar& operator*=(const Scalar& y) { return *this = *this * y; }

  /// Inverse of a unit: a single monomial in EXACT mode, nonzero in NUMERIC.
  Scalar invert_monomial() const;
  /// Integer power; negative exponents require a unit.
  Scalar pow(int k) const;

  /// EXACT: canonical form empty. NUMERIC: |x| < tol (tol required > 0).
  bool is_zero(double tol = 0.0) const;
  bool is_monomial() const;
  /// Canonical equality in EXACT mode; exact complex equality in NUMERIC.
  bool operator==(const Scalar& o) const;

  /// Value under the ring's assignment (NUMERIC) or under `a` (EXACT).
  Complex to_complex() const;
  Complex eval(const Assignment& a) const;

  std::string str() const;

  struct Term {
    MonoKey key;
    Cyclo coeff;
  };
  const std::vector<Term>& terms() const { return terms_; }

 private:
  friend class ScalarRing;
  const ScalarRing* ring_ = nullptr;
  std::vector<Term> terms_;  // EXACT, sorted by key, no zero coefficients
  Complex num_{};            // NUMERIC
};

/// Shared read-only context. Instances are interned and live for the whole
/// process, so scalars can hold plain pointers to them.
class ScalarRing {
 public:
  static const ScalarRing& exact(int p, int M);
  static const ScalarRing& numeric(int p, int M, const Assignment& a);

  Backend backend() const { return backend_; }
  int prime() const { return p_; }
  int root_order() const { return table_.order(); }
  const CyclotomicTable& table() const { return table_; }
  const Assignment& assignment() const { return assignment_; }

  Scalar zero() const;
  Scalar one() const { return integer(1); }
  Scalar integer(long n) const;
  Scalar rational(const Rational& q) const;
  /// zeta_M^k.
  Scalar zeta(int k) const;
  /// v^k for an indeterminate.
  Scalar indet(Indet v, int k = 1) const;
  /// t^k with t^2 = p.
  Scalar t(int k = 1) const;
  /// beta_3 = (alpha_1 beta_1 alpha_2 beta_2 alpha_3)^{-1}.
  Scalar beta3() const;
  Scalar from_complex(Complex z) const;
  /// Scalar of this ring with the same meaning as `x` from another ring
  /// (EXACT -> NUMERIC evaluation, or identity).
  Scalar import(const Scalar& x) const;

  /// Same parameters on the other backend.
  const ScalarRing& as_exact() const { return exact(p_, table_.order()); }
  const ScalarRing& as_numeric(const Assignment& a) const { return numeric(p_, table_.order(), a); }

  bool same_as(const ScalarRing& o) const { return this == &o; }

  ScalarRing(Backend b, int p, int M, const Assignment& a);

 private:
  Backend backend_;
  int p_;
  CyclotomicTable table_;
  Assignment assignment_;

  friend class Scalar;
  friend Scalar operator+(const Scalar& x, const Scalar& y);
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  Scalar make_exact(std::vector<Scalar::Term> terms) const;
  Scalar make_numeric(Complex z) const;
};

/// Evaluation homomorphism with relation checks: t^2 = p, all values nonzero,
/// and |alpha_i / beta_i| kept at least `margin` (in log-modulus) away from
/// q^{+-1}.
Complex numeric_eval(const Scalar& a, const Assignment& assignment, double margin = 0.0);

/// first / (1 - ratio); the closed form of sum_{j >= 0} first * ratio^j, used
/// as analytic continuation when |ratio| > 1. NUMERIC only.
Scalar geometric_tail(const Scalar& ratio, const Scalar& first, double tol = 1e-9);

/// Assignment with log-moduli drawn uniformly in [-spread, spread] and
/// arguments uniform, rejecting draws closer than `margin` to the excluded
/// set |alpha_i/beta_i| = q^{+-1}.
Assignment random_assignment(int p, std::uint64_t seed, double spread = 0.6, double margin = 0.1);

int euler_phi(int n);
int lcm_int(int a, int b);

}  // namespace trilin
