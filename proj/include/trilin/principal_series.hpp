#pragma once

// Level-L models of Ind_B^G(chi) restricted to K. A vector is determined by
// its values on the representatives of (B cap K)\K/K(L); the value at any g
// follows from g = b k and v(bk) = chi(b) delta(b)^{delta2/2} v(k).

#include <optional>
#include <string>
#include <vector>

#include "trilin/character.hpp"
#include "trilin/padic.hpp"
#include "trilin/scalar.hpp"

namespace trilin {

/// alpha with alpha^{-1} = mu(pi)|pi|^{1/2}.
Monomial alpha_of(const BorelCharacter& chi);
/// beta with beta^{-1} = mu'(pi)|pi|^{-1/2}.
Monomial beta_of(const BorelCharacter& chi);

class KModelVector {
 public:
  KModelVector(const PadicContext& ctx, BorelCharacter chi, const ScalarRing& R, int level);

  const PadicContext& context() const { return space_.context(); }
  const BorelCharacter& character() const { return chi_; }
  const ScalarRing& ring() const { return *ring_; }
  int level() const { return space_.level(); }
  const CosetSpace& space() const { return space_; }
  std::size_t size() const { return values_.size(); }

  const Scalar& value(std::size_t i) const { return values_[i]; }
  void set(std::size_t i, Scalar s) { values_[i] = std::move(s); }
  const std::vector<Scalar>& values() const { return values_; }

  /// v(g) for any invertible g.
  Scalar at(const Mat2& g) const;
  /// The same function stored at a finer level.
  KModelVector lift(int level) const;

  friend KModelVector operator+(const KModelVector& x, const KModelVector& y);
  friend KModelVector operator-(const KModelVector& x, const KModelVector& y);
  friend KModelVector operator*(const Scalar& s, const KModelVector& v);

  /// EXACT: every value zero. NUMERIC: max |value| < tol.
  bool is_zero(double tol = 0.0) const;
  /// Value-wise comparison at the common level (max-norm with tol in NUMERIC).
  bool equals(const KModelVector& o, double tol = 0.0) const;
  /// Indices of reps with a nonzero value.
  std::vector<bool> support(double tol = 0.0) const;

 private:
  BorelCharacter chi_;
  const ScalarRing* ring_;
  CosetSpace space_;
  std::vector<Scalar> values_;
};

/// Level increase needed so that g^{-1} K(L') g lies in K(L).
int level_spread(const Mat2& g);

/// (g . v)(k) = v(k g), stored at level max(level(v) + spread(g), level).
KModelVector act(const Mat2& g, const KModelVector& v, int level = 0);

/// gamma^r . v.
KModelVector gamma_act(const KModelVector& v, int r);

struct EigenspaceResult {
  int dimension = 0;
  std::vector<KModelVector> basis;
};

/// V^{I_s, omega} inside the level-L model of Ind(chi): vectors with
/// k . v = omega(d) v for k in I_s (s = 0 means V^K).
EigenspaceResult eigenspace(const PadicContext& ctx, const BorelCharacter& chi, const ScalarRing& R, int level,
                            int s, const QuasiCharacter& omega);

/// The new vector, normalized by v((1 0; pi^m 1)) = 1; level >= n + 1.
KModelVector model_new_vector(const PadicContext& ctx, const BorelCharacter& chi, const ScalarRing& R, int level);

enum class LemmaCase { NR, SP0, SP1, SP2 };
/// Which translate the closed form describes.
enum class GammaVariant {
  Plain,           // gamma^r v
  MinusAlphaNext,  // gamma^r v - alpha^{-1} gamma^{r+1} v   (NR, SP1)
  MinusBetaPrev,   // gamma^r v - beta gamma^{r-1} v, r >= 1 (NR, SP2)
};

const char* lemma_case_name(LemmaCase c);
LemmaCase lemma_case_of(const BorelCharacter& chi);

/// The closed-form value of the chosen translate of the new vector at k in K.
Scalar gamma_closed_form(LemmaCase c, const BorelCharacter& chi, const ScalarRing& R, int r, const Mat2& k,
                         GammaVariant variant = GammaVariant::Plain);

/// The brute-force counterpart: the same translate built with act.
KModelVector gamma_translate(const PadicContext& ctx, const BorelCharacter& chi, const ScalarRing& R, int r,
                             GammaVariant variant = GammaVariant::Plain);

/// v_1^* (side 1, exponent x) or v_2^* (side 2, exponent y) built from the
/// new vector of chi.
KModelVector star_vector(const PadicContext& ctx, const BorelCharacter& chi, const ScalarRing& R, int side,
                         int exponent);

/// Predicted support of a star vector: I_a \ I_b with b = nullopt meaning I_a.
struct StrataBand {
  int from = 0;
  std::optional<int> to_exclusive;
  bool contains(const std::optional<int>& stratum) const;
  std::string str() const;
};
StrataBand star_support(const BorelCharacter& chi, int side, int exponent);

/// Two-variable function on K x K, F(b1 k1, b2 k2) = chi1(b1) chi2(b2) ... F(k1, k2).
class TensorVector {
 public:
  TensorVector(const PadicContext& ctx, BorelCharacter chi1, BorelCharacter chi2, const ScalarRing& R,
               int level);
  static TensorVector pure(const KModelVector& v1, const KModelVector& v2);

  const BorelCharacter& chi1() const { return chi1_; }
  const BorelCharacter& chi2() const { return chi2_; }
  const CosetSpace& space() const { return space_; }
  const ScalarRing& ring() const { return *ring_; }
  int level() const { return space_.level(); }

  const Scalar& value(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, Scalar s) { values_[i * n_ + j] = std::move(s); }
  Scalar at(const Mat2& g1, const Mat2& g2) const;

 private:
  BorelCharacter chi1_, chi2_;
  const ScalarRing* ring_;
  CosetSpace space_;
  std::size_t n_;
  std::vector<Scalar> values_;
};

/// The quotient of Ind(chi1 chi2 delta^{1/2}) by the line eta o det.
struct SteinbergModel {
  QuasiCharacter eta;
  /// Character of the induced model containing the kernel line.
  BorelCharacter induced;
  /// eta o det at level L.
  KModelVector kernel_line(const PadicContext& ctx, const ScalarRing& R, int level) const;
};

struct SteinbergPairing {
  /// w - w(1) eta o det: zero iff w lies on the kernel line.
  KModelVector residue;
  bool in_kernel = false;
  /// <w, u> for the supplied vector of the dual (0 when absent).
  Scalar pairing;
};

/// Class of w in the quotient by eta o det, and its pairing with `dual`
/// (a vector of the annihilator of the kernel line in the dual model).
SteinbergPairing steinberg_pair(const SteinbergModel& st, const KModelVector& w,
                                const std::optional<KModelVector>& dual = std::nullopt);

/// Invariant pairing of Ind(chi) with Ind(chi^{-1}) (delta-twists adding up
/// to the modulus): sum over reps of weight * f(k) * w(k).
Scalar k_pairing(const KModelVector& f, const KModelVector& w);

}  // namespace trilin
