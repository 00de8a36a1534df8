#pragma once

// Quasi-characters of Q_p^x and characters of the Borel subgroup.
//
// Character values are kept symbolically as Monomial: a root of unity
// exp(2 pi i zeta) with zeta in Q/Z, times a Laurent monomial in
// a1,b1,a2,b2,a3 and a power of t = q^{1/2}. Monomials convert into any
// ScalarRing whose root order is divisible by the denominator of zeta.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "trilin/padic.hpp"
#include "trilin/scalar.hpp"

namespace trilin {

/// Reduce a rational modulo 1 into [0, 1).
Rational frac_mod1(const Rational& x);

struct Monomial {
  std::array<int, kNumIndets> e{};
  int t = 0;
  Rational zeta = 0;  // exponent of exp(2 pi i .), in [0, 1)

  static Monomial one() { return {}; }
  static Monomial indet(Indet v, int k = 1);
  static Monomial t_power(int k);
  static Monomial root_of_unity(const Rational& frac);
  /// beta_3^k written through the other indeterminates.
  static Monomial beta3(int k = 1);

  friend Monomial operator*(const Monomial& x, const Monomial& y);
  Monomial inverse() const;
  Monomial pow(int k) const;
  bool is_one() const;
  bool operator==(const Monomial& o) const;

  /// Smallest M with the root-of-unity factor in mu_M.
  long root_order() const;
  Scalar to_scalar(const ScalarRing& R) const;
  std::string str() const;
};

/// Discrete logarithms on (Z/p^L)^x. Generators are a primitive root g mod
/// p^2 for odd p, and {-1, 5} for p = 2.
class UnitGroup {
 public:
  UnitGroup(int p, int level);

  int prime() const { return p_; }
  int level() const { return level_; }
  /// Orders of the generators at this level.
  const std::vector<std::int64_t>& orders() const { return orders_; }
  /// Generator residues (as integers).
  const std::vector<std::int64_t>& generators() const { return gens_; }
  /// Exponents of u (a unit mod p^level) on the generators.
  std::vector<std::int64_t> log(std::int64_t u) const;
  /// Raw table: for odd p log_g(u); for p = 2 log_5(+-u). -1 marks non-units.
  const std::vector<std::int32_t>& table() const { return table_; }

  /// Adopt a stored table after structural checks (size, unit pattern,
  /// range and the generator chain); throws DomainError when they fail.
  static UnitGroup from_table(int p, int level, std::vector<std::int32_t> table);

 private:
  UnitGroup() = default;
  UnitGroup(int p, int level, bool build);
  void build_table();
  int p_ = 0;
  int level_ = 0;
  std::int64_t mod_ = 1;
  std::vector<std::int64_t> gens_;
  std::vector<std::int64_t> orders_;
  std::vector<std::int32_t> table_;
};

/// Process-wide read-only cache of unit groups.
const UnitGroup& unit_group(int p, int level);
/// Preload a group into the cache (used by the on-disk cache).
void install_unit_group(UnitGroup g);
/// Primitive root modulo p^2 for odd p.
std::int64_t primitive_root(int p);

/// Finite-order character of Z_p^x, described by the images (in Q/Z) of the
/// generators of UnitGroup.
class FiniteCharacter {
 public:
  FiniteCharacter() = default;
  FiniteCharacter(int p, std::vector<Rational> images);
  static FiniteCharacter trivial(int p);

  int prime() const { return p_; }
  const std::vector<Rational>& images() const { return images_; }
  /// Minimal m with the character trivial on 1 + p^m Z_p (0 if trivial).
  int conductor() const { return conductor_; }
  bool is_trivial() const { return conductor_ == 0; }
  /// Order of the character (lcm of image denominators).
  long order() const;

  /// Value at a unit given modulo p^conductor, as an element of Q/Z.
  Rational eval_residue(std::int64_t u) const;
  Rational eval(const ValuedElement& unit) const;

  friend FiniteCharacter operator*(const FiniteCharacter& x, const FiniteCharacter& y);
  FiniteCharacter inverse() const;
  bool operator==(const FiniteCharacter& o) const { return p_ == o.p_ && images_ == o.images_; }
  std::string str() const;

 private:
  int p_ = 0;
  std::vector<Rational> images_;
  int conductor_ = 0;
};

/// Quasi-character mu of Q_p^x: mu(pi^v u) = mu(pi)^v * finite(u).
class QuasiCharacter {
 public:
  QuasiCharacter() = default;
  QuasiCharacter(FiniteCharacter fin, Monomial at_pi) : fin_(std::move(fin)), at_pi_(at_pi) {}

  /// mu_i with mu_i(pi) = alpha_i^{-1} t (i = 1, 2, 3).
  static QuasiCharacter mu(int i, FiniteCharacter fin);
  /// mu'_i with mu'_i(pi) = beta_i^{-1} t^{-1}.
  static QuasiCharacter mu_prime(int i, FiniteCharacter fin);
  /// |.|^{k/2}.
  static QuasiCharacter abs_half_power(int p, int k);
  static QuasiCharacter trivial(int p);

  const FiniteCharacter& finite() const { return fin_; }
  const Monomial& at_pi() const { return at_pi_; }
  int prime() const { return fin_.prime(); }
  int conductor() const { return fin_.conductor(); }
  bool ramified() const { return conductor() > 0; }

  Monomial eval(const ValuedElement& x) const;
  /// Membership in O^mu: O when unramified, O^x when ramified.
  bool in_O_mu(const ValuedElement& x) const;

  friend QuasiCharacter operator*(const QuasiCharacter& x, const QuasiCharacter& y);
  QuasiCharacter inverse() const;
  bool operator==(const QuasiCharacter& o) const { return fin_ == o.fin_ && at_pi_ == o.at_pi_; }
  std::string str() const;

 private:
  FiniteCharacter fin_;
  Monomial at_pi_;
};

Monomial char_eval(const QuasiCharacter& chi, const ValuedElement& x);
QuasiCharacter char_mul(const QuasiCharacter& x, const QuasiCharacter& y);
QuasiCharacter char_inv(const QuasiCharacter& x);
int conductor(const QuasiCharacter& x);

/// chi(b) delta(b)^{delta2/2} for b = (a *; 0 d): mu(a) mu'(d) |a/d|^{delta2/2}.
struct BorelCharacter {
  QuasiCharacter mu;
  QuasiCharacter mu_prime;
  int delta2 = 1;

  int prime() const { return mu.prime(); }
  /// n = cond(mu) + cond(mu').
  int n() const { return mu.conductor() + mu_prime.conductor(); }
  /// m = cond(mu').
  int m() const { return mu_prime.conductor(); }
  bool unramified() const { return n() == 0; }
  QuasiCharacter omega() const { return mu * mu_prime; }
  Monomial eval(const Mat2& b) const;
  bool operator==(const BorelCharacter& o) const {
    return mu == o.mu && mu_prime == o.mu_prime && delta2 == o.delta2;
  }
  std::string str() const;
};

Monomial borel_eval(const BorelCharacter& chi, const Mat2& b);

struct CentralCheck {
  bool ok = true;
  /// A unit generator residue on which omega_1 omega_2 omega_3 is nontrivial.
  std::optional<std::int64_t> unit_witness;
  /// The value of omega_1 omega_2 omega_3 at pi.
  Monomial at_pi;
  std::string message;
};

CentralCheck central_check(const QuasiCharacter& w1, const QuasiCharacter& w2, const QuasiCharacter& w3);
CentralCheck central_check(const BorelCharacter& c1, const BorelCharacter& c2, const BorelCharacter& c3);

/// lcm of the orders of the given characters (at least 1).
long root_order_for(const std::vector<QuasiCharacter>& chars);

}  // namespace trilin
