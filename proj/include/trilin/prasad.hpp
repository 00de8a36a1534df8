#pragma once

// The exact sequence 0 -> ind_T^G(chi1 chi'2) -> V1 (x) V2 -> Ind(chi1 chi2 delta^{1/2}) -> 0,
// the orbit function f, the T-equivariant functional phi on V3, and the
// assembly of the invariant trilinear form along the chain.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "trilin/character.hpp"
#include "trilin/padic.hpp"
#include "trilin/principal_series.hpp"
#include "trilin/scalar.hpp"

namespace trilin {

// ---------------------------------------------------------------------------
// The third representation.

/// V3 is either a principal series Ind(chi3) or eta (x) St, realized as the
/// subrepresentation of Ind(eta|.|^{1/2}, eta|.|^{-1/2}) killed by pairing
/// with eta^{-1} o det.
class V3Model {
 public:
  enum class Kind { PrincipalSeries, Steinberg };

  static V3Model principal_series(BorelCharacter chi3);
  static V3Model steinberg(QuasiCharacter eta);

  Kind kind() const { return kind_; }
  const BorelCharacter& ambient() const { return ambient_; }
  const std::optional<QuasiCharacter>& eta() const { return eta_; }
  int conductor() const;
  QuasiCharacter central() const;
  V3Model dual() const;

  /// Steinberg: the functional f -> sum_K eta^{-1}(det k) f(k) defining the
  /// subspace; zero vector check for principal series.
  Scalar defining_functional(const KModelVector& f) const;
  bool contains(const KModelVector& f) const;

  EigenspaceResult eigenspace(const PadicContext& ctx, const ScalarRing& R, int level, int s,
                              const QuasiCharacter& omega) const;
  /// A basis vector of the new line (normalized as in model_new_vector for
  /// principal series; division-free for Steinberg).
  KModelVector new_vector(const PadicContext& ctx, const ScalarRing& R, int level) const;
  std::string str() const;

 private:
  Kind kind_ = Kind::PrincipalSeries;
  BorelCharacter ambient_;
  std::optional<QuasiCharacter> eta_;
};

// ---------------------------------------------------------------------------
// res and the simple case.

/// Character of Ind(chi1 chi2 delta^{1/2}) as a space of functions:
/// f(bg) = chi1 chi2 (b) delta(b) f(g).
BorelCharacter res_character(const BorelCharacter& chi1, const BorelCharacter& chi2);
KModelVector res_diag(const KModelVector& v1, const KModelVector& v2);
KModelVector res_tensor(const TensorVector& F);

enum class SimpleKind { Iso, SteinbergKernel, None };
const char* simple_kind_name(SimpleKind k);

struct SimpleDetection {
  SimpleKind kind = SimpleKind::None;
  /// chi1 chi2 delta = eta o det in the Steinberg case.
  std::optional<QuasiCharacter> eta;
  /// V3 was given with its two parameters swapped.
  bool weyl_swapped = false;
};

/// The V3 that pairs with res(V1 (x) V2): Ind((chi1 chi2)^{-1} delta^{-1/2}).
BorelCharacter simple_v3_character(const BorelCharacter& chi1, const BorelCharacter& chi2);
SimpleDetection detect_simple_case(const BorelCharacter& chi1, const BorelCharacter& chi2, const V3Model& v3);

// ---------------------------------------------------------------------------
// The orbit function f on T \ G.

struct OrbitFunction {
  int x = 1;
  int y = 0;
  QuasiCharacter mu1, mu1p, mu2, mu2p;  // mu_1, mu'_1, mu_2, mu'_2
  /// Hypothesis data of the factorization lemma (not used by f itself).
  int n3 = 0;
  int z = 0;

  int n1() const { return mu1.conductor() + mu1p.conductor(); }
  int n2() const { return mu2.conductor() + mu2p.conductor(); }
  int m1() const { return mu1p.conductor(); }
  int m2() const { return mu2p.conductor(); }
  /// x - n3 >= z >= y >= 0 and x - y >= max(n1 - m1, n2 - m2, 1).
  bool fv_hypotheses() const;

  /// f((1 b0; c0 1)) per the four-case table; 0 outside I_f.
  Monomial value(const ValuedElement& b0, const ValuedElement& c0) const;
  bool in_If(const ValuedElement& b0, const ValuedElement& c0) const;
  /// f(g) for any g, using f(tg) = chi1 chi'2 (t) f(g).
  std::optional<Monomial> at(const Mat2& g) const;
};

/// Builds f; `strict` enforces x - y >= max(n1 - m1, n2 - m2, 1).
OrbitFunction build_f(int x, int y, const BorelCharacter& chi1, const BorelCharacter& chi2, bool strict = true);

/// Closed-form F(k1, k2) of the factorization lemma; nullopt-free: returns
/// the zero monomial flag through `nonzero`.
struct ExtValue {
  bool nonzero = false;
  Monomial value;
};
ExtValue ext_closed(const OrbitFunction& f, const Mat2& k1, const Mat2& k2);

/// F(k1, k2) by searching I_f cells for k0 with k1 k0^{-1}, k2 k0^{-1} w in B.
ExtValue ext_bruteforce(const OrbitFunction& f, const Mat2& k1, const Mat2& k2, int grid_level);

/// F(g1, g2) for arbitrary g1, g2 through the Iwasawa factorization.
ExtValue ext_eval(const OrbitFunction& f, const Mat2& g1, const Mat2& g2);

/// F restricted to rep pairs at `level`.
TensorVector ext_tensor(const PadicContext& ctx, const OrbitFunction& f, const BorelCharacter& chi1,
                        const BorelCharacter& chi2, const ScalarRing& R, int level);

/// Grid level making f constant on I_f cells (both coordinates).
int if_grid_level(const OrbitFunction& f);
/// sum over I_f cells of f(k0) * weight.
Scalar integral_If(const PadicContext& ctx, const OrbitFunction& f, const ScalarRing& R);

// ---------------------------------------------------------------------------
// Values that may carry geometric tails.

/// finite + sum_i first_i / (1 - ratio_i), all divided by `denominator`.
struct Form {
  struct Tail {
    Scalar first;
    Scalar ratio;
  };
  Scalar finite;
  std::vector<Tail> tails;
  std::optional<Scalar> denominator;

  static Form exact(Scalar s) { return {std::move(s), {}, std::nullopt}; }
  Form scaled(const Scalar& s) const;
  Form divided(const Scalar& d) const;
  friend Form operator+(const Form& a, const Form& b);
  /// Exactly zero (finite part zero and every tail numerator zero).
  bool exact_zero() const;
  /// finite * prod (1 - r_i) + sum_i first_i prod_{j != i} (1 - r_j), the
  /// value times the cleared denominators; nullopt when some 1 - r_i is 0.
  std::optional<Scalar> cleared_numerator() const;
  /// Numeric value under an assignment; throws ArithmeticError when a tail
  /// ratio lies within `unit_tol` of the unit circle.
  Complex evaluate(const Assignment& a, double unit_tol = 1e-6) const;
  std::string str() const;
};

/// phi(v) = sum_{x in F} v(w n(x)) theta(x) dx on vectors of a fixed level,
/// theta = (mu1 mu'2 mu'3)^{-1} |.|^{-1/2}.
class PhiFunctional {
 public:
  PhiFunctional(const PadicContext& ctx, const BorelCharacter& ambient, const QuasiCharacter& theta,
                const ScalarRing& R, int level, int shells);

  int level() const { return level_; }
  int shells() const { return J_; }
  const QuasiCharacter& theta() const { return theta_; }
  const Scalar& ratio_pos() const { return ratio_pos_; }
  const Scalar& ratio_neg() const { return ratio_neg_; }

  /// Exact shell sums j = -J..J (index j + J).
  std::vector<Scalar> shell_values(const KModelVector& v) const;
  /// Full value with geometric tails beyond +-J.
  Form apply(const KModelVector& v) const;

 private:
  const ScalarRing* ring_;
  BorelCharacter ambient_;
  QuasiCharacter theta_;
  int level_;
  int J_;
  std::size_t idx_one_ = 0, idx_w0_ = 0;
  std::vector<std::vector<Scalar>> kernel_;  // [shell][rep]
  Scalar ratio_pos_, ratio_neg_;
};

QuasiCharacter phi_theta(const BorelCharacter& chi1, const BorelCharacter& chi2, const BorelCharacter& chi3);

/// Standard shell count for a vector level and V3 conductor.
int phi_shell_count(int level, int n3);

PhiFunctional phi_build(const PadicContext& ctx, const V3Model& v3, const BorelCharacter& chi1,
                        const BorelCharacter& chi2, const ScalarRing& R, int level);

/// A group gamma^z I_s gamma^{-z} acting on w through omega(d) of the
/// conjugated element.
struct OrbitStabilizer {
  int z = 0;
  int s = 0;
  QuasiCharacter omega;
};
/// Exact check of k . w = omega(d) w on generators of the group.
bool verify_stabilizer(const KModelVector& w, const OrbitStabilizer& st);

struct OrbitAverageStats {
  std::size_t cells = 0;
  std::size_t via_stabilizer = 0;
  std::size_t via_action = 0;
};

/// W = sum over I_f cells of f(k0) weight (k0 . w); Phi(f)(w) = phi(W).
/// With a verified stabilizer, cells inside it contribute f(k0) weight w
/// without applying k0.
KModelVector orbit_average(const PadicContext& ctx, const OrbitFunction& f, const KModelVector& w,
                           const std::optional<OrbitStabilizer>& st = std::nullopt,
                           OrbitAverageStats* stats = nullptr);
Form Phi_f(const PadicContext& ctx, const OrbitFunction& f, const KModelVector& w, const V3Model& v3,
           const BorelCharacter& chi1, const BorelCharacter& chi2,
           const std::optional<OrbitStabilizer>& st = std::nullopt);

// ---------------------------------------------------------------------------
// The constant relating F to v1* (x) v2*.

struct CalcFConstant {
  /// mu_2(-1) alpha_1^{m1 - x} alpha_2^{m2} beta_2^{-y}.
  Scalar monomial_part;
  /// prod over unramified V_i of lambda_i^{-1} = 1 - beta_i / alpha_i.
  Scalar lambda_inverse;
};
CalcFConstant calculF_constant(const BorelCharacter& chi1, const BorelCharacter& chi2, int x, int y,
                               const ScalarRing& R);

struct CalcFCheck {
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  std::size_t support = 0;
  std::string first_mismatch;
};
/// Cross-multiplied comparison lambda^{-1} F = c (v1* (x) v2*) on all rep
/// pairs at the level of the star vectors.
CalcFCheck calculF_check(const PadicContext& ctx, const BorelCharacter& chi1, const BorelCharacter& chi2, int x,
                         int y, const ScalarRing& R);

// ---------------------------------------------------------------------------
// Assembly of l.

enum class Mode { Simple, Chain };

struct ExtImage {
  OrbitFunction f;
  KModelVector w;
  std::optional<OrbitStabilizer> stabilizer;
};
struct PureTensor {
  KModelVector v1, v2, w;
};
struct TranslateTerm;
/// Formal linear combination sum coef * g.(element); l is G-invariant so
/// the translate g only records provenance.
struct Combination {
  std::vector<TranslateTerm> terms;
};
using Element = std::variant<ExtImage, PureTensor, Combination>;
struct TranslateTerm {
  Scalar coef;
  Mat2 g;
  std::vector<Element> element;  // exactly one entry
};

struct TrilinearEvaluator {
  PadicContext ctx;
  BorelCharacter chi1, chi2;
  V3Model v3;
  const ScalarRing* ring = nullptr;
  Mode mode = Mode::Chain;
  SimpleDetection simple;
};

TrilinearEvaluator chain_assemble(const PadicContext& ctx, const BorelCharacter& chi1, const BorelCharacter& chi2,
                                  const V3Model& v3, const ScalarRing& R);

struct EllValue {
  bool evaluable = false;
  Form value;
  std::string reason;
};

EllValue ell_eval(const TrilinearEvaluator& L, const Element& e);

}  // namespace trilin
