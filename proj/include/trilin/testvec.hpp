#pragma once

// Theorem-level drivers: pick the theorem that applies to a triple, build
// the prescribed vectors, evaluate l, and justify every discarded term by a
// computed eigenspace dimension.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "trilin/prasad.hpp"

namespace trilin {

/// How the V3 parameters and any specialization are chosen.
enum class V3Spec {
  PrincipalSeries,  // Ind(mu3, mu'3) with generic value at pi
  Steinberg,        // eta3 (x) St, eta3(pi) = a3^{-1}, beta2 eliminated
  SimpleIso,        // V3 = Ind((chi1 chi2)^{-1} delta^{-1/2})
  SimpleSteinberg,  // chi1 chi2 delta = eta o det, V3 = eta^{-1} (x) St
};
const char* v3_spec_name(V3Spec s);

struct CaseSpec {
  std::string name;
  int p = 3;
  FiniteCharacter mu1, mu1p, mu2, mu2p;
  V3Spec v3 = V3Spec::PrincipalSeries;
  /// Finite parts of (mu3, mu'3) or of eta3; unused for the simple kinds.
  FiniteCharacter fin3, fin3p;
  /// Swap the two V3 parameters (SimpleIso only).
  bool swap = false;
  /// Exponents for the non-vanishing-free theorem; chosen minimally when absent.
  std::optional<int> x, y, z;
};

struct TrilinearCase {
  std::string name;
  PadicContext ctx;
  BorelCharacter chi1, chi2;
  V3Model v3;
  int n1 = 0, n2 = 0, n3 = 0, m1 = 0, m2 = 0;
  int x = 0, y = 0, z = 0;
  bool exponents_given = false;
};

/// Builds the characters and checks omega1 omega2 omega3 = 1.
TrilinearCase make_case(const CaseSpec& spec);
/// Root order of a ring holding every character value of the case.
int case_root_order(const TrilinearCase& c);

enum class Outcome { Nonzero, Zero, NotEvaluable, OutOfScope };
const char* outcome_name(Outcome o);

enum class Theorem { VT000, VT00n, VTmkn, NoVT, None };
const char* theorem_name(Theorem t);

/// gamma^a v1 (x) gamma^b v2 (x) gamma^c v3.
struct Recipe {
  int a = 0, b = 0, c = 0;
  std::string str() const;
};

struct Plan {
  Theorem theorem = Theorem::None;
  Mode mode = Mode::Chain;
  SimpleDetection simple;
  Recipe target;
  /// Exceptional recipe of the main theorem, when its hypotheses hold.
  std::optional<Recipe> alternative;
  std::string alternative_reason;
  int x = 0, y = 0, z = 0;  // exponents of the star vectors / ext-image
  Outcome expected = Outcome::Nonzero;
  std::string out_of_scope;
};

Plan plan_case(const TrilinearCase& c);

struct Certificate {
  std::string statement;
  int s = 0;
  int dimension = 0;
  bool certified() const { return dimension == 0; }
};

/// dim of the (I_s, omega3^{-1})-eigenspace of the contragredient of V3.
Certificate vanishing_certificate(const PadicContext& ctx, const V3Model& v3, const ScalarRing& R, int s);

struct VerifyOptions {
  int samples = 10;
  std::uint64_t seed = 1;
  double zero_tol = 1e-9;
  double nonzero_tol = 1e-6;
};

struct Verdict {
  std::string case_name;
  Theorem theorem = Theorem::None;
  Mode mode = Mode::Chain;
  std::string recipe;
  Outcome outcome = Outcome::NotEvaluable;
  Outcome expected = Outcome::Nonzero;
  bool exact = false;
  std::string value;  // serialized l-value
  std::vector<double> sample_abs;
  std::vector<Certificate> certificates;
  std::vector<std::string> steps;
  /// Boundary cases: the two functionals share a line of this dimension.
  std::optional<int> proportional_line_dimension;
  bool passed = false;
  std::string detail;
};

Verdict verify_theorem(const TrilinearCase& c, const VerifyOptions& opt = {});

}  // namespace trilin
