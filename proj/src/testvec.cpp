#include "trilin/testvec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace trilin {

const char* v3_spec_name(V3Spec s) {
  switch (s) {
    case V3Spec::PrincipalSeries: return "principal_series";
    case V3Spec::Steinberg: return "steinberg";
    case V3Spec::SimpleIso: return "simple_iso";
    case V3Spec::SimpleSteinberg: return "simple_steinberg";
  }
  return "?";
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Nonzero: return "NONZERO";
    case Outcome::Zero: return "ZERO";
    case Outcome::NotEvaluable: return "NOT_EVALUABLE";
    case Outcome::OutOfScope: return "OUT_OF_SCOPE";
  }
  return "?";
}

const char* theorem_name(Theorem t) {
  switch (t) {
    case Theorem::VT000: return "vt-000";
    case Theorem::VT00n: return "vt-00n";
    case Theorem::VTmkn: return "vt-mkn";
    case Theorem::NoVT: return "no-vt";
    case Theorem::None: return "none";
  }
  return "?";
}

std::string Recipe::str() const {
  auto part = [](int e, const char* v) {
    if (e == 0) return std::string(v);
    if (e == 1) return std::string("gamma ") + v;
    return "gamma^" + std::to_string(e) + " " + v;
  };
  return part(a, "v1") + " (x) " + part(b, "v2") + " (x) " + part(c, "v3");
}

// ---------------------------------------------------------------------------
// Cases

TrilinearCase make_case(const CaseSpec& spec) {
  const int p = spec.p;
  TrilinearCase c;
  c.name = spec.name;
  c.ctx = PadicContext::make(p);
  const QuasiCharacter mu1 = QuasiCharacter::mu(1, spec.mu1), mu1p = QuasiCharacter::mu_prime(1, spec.mu1p);
  const QuasiCharacter mu2 = QuasiCharacter::mu(2, spec.mu2), mu2p = QuasiCharacter::mu_prime(2, spec.mu2p);
  c.chi1 = {mu1, mu1p, 1};
  c.chi2 = {mu2, mu2p, 1};
  switch (spec.v3) {
    case V3Spec::PrincipalSeries:
      c.v3 = V3Model::principal_series(
          {QuasiCharacter::mu(3, spec.fin3), QuasiCharacter::mu_prime(3, spec.fin3p), 1});
      break;
    case V3Spec::Steinberg: {
      c.v3 = V3Model::steinberg(QuasiCharacter(spec.fin3, Monomial::indet(Indet::Alpha3, -1)));
      // beta2 is the unknown fixed by omega1 omega2 omega3 (pi) = 1.
      Monomial at = (c.chi1.omega().at_pi() * mu2.at_pi() * c.v3.central().at_pi()).inverse();
      c.chi2.mu_prime = QuasiCharacter(spec.mu2p, at);
      break;
    }
    case V3Spec::SimpleIso: {
      BorelCharacter s = simple_v3_character(c.chi1, c.chi2);
      if (spec.swap) std::swap(s.mu, s.mu_prime);
      c.v3 = V3Model::principal_series(s);
      break;
    }
    case V3Spec::SimpleSteinberg: {
      // mu'1 mu'2 |.|^{-1} = mu1 mu2 |.| =: eta.
      c.chi2.mu_prime = mu1 * mu2 * mu1p.inverse() * QuasiCharacter::abs_half_power(p, 4);
      QuasiCharacter eta = mu1 * mu2 * QuasiCharacter::abs_half_power(p, 2);
      c.v3 = V3Model::steinberg(eta.inverse());
      break;
    }
  }
  CentralCheck cc = central_check(c.chi1.omega(), c.chi2.omega(), c.v3.central());
  if (!cc.ok) throw DomainError("case " + spec.name + ": " + cc.message);
  c.n1 = c.chi1.n();
  c.n2 = c.chi2.n();
  c.n3 = c.v3.conductor();
  c.m1 = c.chi1.m();
  c.m2 = c.chi2.m();
  if (spec.x || spec.y || spec.z) {
    c.exponents_given = true;
    c.y = spec.y.value_or(c.m2);
    c.z = spec.z.value_or(c.y);
    c.x = spec.x.value_or(std::max({c.m1, c.n3 + c.z, c.y + std::max({c.n1 - c.m1, c.n2 - c.m2, 1})}));
  }
  return c;
}

int case_root_order(const TrilinearCase& c) {
  return static_cast<int>(root_order_for({c.chi1.mu, c.chi1.mu_prime, c.chi2.mu, c.chi2.mu_prime,
                                          c.v3.ambient().mu, c.v3.ambient().mu_prime}));
}

// ---------------------------------------------------------------------------
// Plans

Plan plan_case(const TrilinearCase& c) {
  Plan plan;
  plan.simple = detect_simple_case(c.chi1, c.chi2, c.v3);
  plan.mode = plan.simple.kind == SimpleKind::None ? Mode::Chain : Mode::Simple;
  if (c.chi1.mu.ramified() || c.chi2.mu_prime.ramified()) {
    plan.theorem = Theorem::NoVT;
    plan.expected = Outcome::Zero;
    if (c.exponents_given) {
      plan.x = c.x;
      plan.y = c.y;
      plan.z = c.z;
    } else {
      plan.y = c.m2;
      plan.z = plan.y;
      plan.x = std::max({c.m1, c.n3 + plan.z, plan.y + std::max({c.n1 - c.m1, c.n2 - c.m2, 1})});
    }
    if (plan.x < c.m1 || plan.y < c.m2 || plan.x - c.n3 < plan.z || plan.z < plan.y || plan.y < 0 ||
        plan.x - plan.y < std::max({c.n1 - c.m1, c.n2 - c.m2, 1})) {
      plan.expected = Outcome::OutOfScope;
      plan.out_of_scope = "exponents outside the hypotheses of the vanishing theorem";
    }
    return plan;
  }
  if (c.n1 == 0 && c.n2 == 0) {
    if (c.n3 == 0) {
      plan.theorem = Theorem::VT000;
      plan.target = {0, 0, 0};
      if (plan.mode == Mode::Chain) {
        plan.expected = Outcome::OutOfScope;
        plan.out_of_scope = "all three representations unramified outside the simple case";
      }
      return plan;
    }
    plan.theorem = Theorem::VT00n;
    plan.target = {c.n3, 0, 0};
    plan.x = c.n3;
    return plan;
  }
  plan.theorem = Theorem::VTmkn;
  plan.target = {std::max(c.n2 - c.n1, c.n3 - c.n1), 0, 0};
  plan.x = std::max({c.n1, c.n2, c.n3, 1});
  if (c.n1 == 0 && c.n2 == c.n3 && c.n2 > 0) {
    plan.alternative = Recipe{c.n2 - 1, 0, 0};
    plan.alternative_reason = "n1 = 0 and n2 = n3 > 0";
  } else if (c.n2 == 0 && c.n1 == c.n3 && c.n1 > 0) {
    plan.alternative = Recipe{0, 1, 0};
    plan.alternative_reason = "n2 = 0 and n1 = n3 > 0";
  } else if (plan.simple.kind != SimpleKind::None && c.n1 + c.n2 == c.n3) {
    plan.alternative = Recipe{0, c.n1, 0};
    plan.alternative_reason = "dual of V3 is a quotient of Ind(chi1 chi2 delta^{1/2}) and n1 + n2 = n3";
  }
  return plan;
}

Certificate vanishing_certificate(const PadicContext& ctx, const V3Model& v3, const ScalarRing& R, int s) {
  const V3Model d = v3.dual();
  EigenspaceResult e = d.eigenspace(ctx, R, std::max(s, 1) + 1, s, d.central());
  std::ostringstream os;
  os << "dim (dual V3)^{I_" << s << ", omega3^-1} = " << e.dimension;
  return {os.str(), s, e.dimension};
}

// ---------------------------------------------------------------------------
// Verification

namespace {

struct Term {
  Scalar coef;
  int a = 0;
  int b = 0;
};

/// The star vector of the given side as sum coef * gamma^e v.
std::vector<std::pair<Scalar, int>> star_terms(const BorelCharacter& chi, const ScalarRing& R, int side,
                                               int exponent) {
  if (side == 1) {
    if (chi.mu_prime.ramified()) return {{R.one(), exponent - chi.m()}};
    return {{R.one(), exponent}, {-beta_of(chi).to_scalar(R), exponent - 1}};
  }
  if (chi.mu.ramified()) return {{R.one(), exponent - chi.m()}};
  return {{R.one(), exponent - chi.n()}, {-alpha_of(chi).inverse().to_scalar(R), exponent - chi.n() + 1}};
}

KModelVector combine(const std::vector<std::pair<Scalar, int>>& terms, const KModelVector& v) {
  std::optional<KModelVector> acc;
  for (const auto& [coef, e] : terms) {
    KModelVector t = coef * gamma_act(v, e);
    if (!acc) {
      acc = t;
    } else {
      const int L = std::max(acc->level(), t.level());
      acc = acc->lift(L) + t.lift(L);
    }
  }
  return *acc;
}

using Key = std::tuple<int, int, int>;  // gamma exponents on v1, v2, v3

std::string key_str(const Key& k) {
  return Recipe{std::get<0>(k), std::get<1>(k), std::get<2>(k)}.str();
}

struct Expansion {
  std::map<Key, Scalar> groups;
  bool matches_star = false;
};

/// v1*(x) (x) v2*(y) (x) gamma^z v3 as gamma-translate terms, each shifted so
/// that min(a, b) = 0 (l is invariant under gamma).
Expansion expand(const TrilinearCase& c, const ScalarRing& R, int x, int y, int z) {
  Expansion out;
  auto t1 = star_terms(c.chi1, R, 1, x), t2 = star_terms(c.chi2, R, 2, y);
  for (const auto& [c1, a] : t1)
    for (const auto& [c2, b] : t2) {
      const int m = std::min(a, b);
      Key k{a - m, b - m, z - m};
      auto it = out.groups.find(k);
      if (it == out.groups.end())
        out.groups.emplace(k, c1 * c2);
      else
        it->second += c1 * c2;
    }
  for (auto it = out.groups.begin(); it != out.groups.end();)
    it = it->second.is_zero() ? out.groups.erase(it) : std::next(it);
  KModelVector v1 = model_new_vector(c.ctx, c.chi1, R, c.n1 + 1);
  KModelVector v2 = model_new_vector(c.ctx, c.chi2, R, c.n2 + 1);
  out.matches_star = combine(t1, v1).equals(star_vector(c.ctx, c.chi1, R, 1, x)) &&
                     combine(t2, v2).equals(star_vector(c.ctx, c.chi2, R, 2, y));
  return out;
}

std::vector<double> sample_abs(const Form& v, int p, const VerifyOptions& opt) {
  std::vector<double> out;
  for (int i = 0; static_cast<int>(out.size()) < opt.samples && i < 5 * opt.samples; ++i) {
    Assignment a = random_assignment(p, opt.seed + static_cast<std::uint64_t>(i));
    try {
      out.push_back(std::abs(v.evaluate(a)));
    } catch (const ArithmeticError&) {
      // degenerate assignment (tail ratio on the unit circle)
    }
  }
  return out;
}

/// Sets outcome, exactness, samples and the numeric consistency flag.
bool classify(Verdict& v, const Form& value, int p, const VerifyOptions& opt) {
  v.value = value.str();
  v.sample_abs = sample_abs(value, p, opt);
  if (value.denominator && value.denominator->is_zero()) {
    v.outcome = Outcome::NotEvaluable;
    v.detail = "vanishing denominator";
    return false;
  }
  if (value.exact_zero()) {
    v.outcome = Outcome::Zero;
    v.exact = true;
  } else if (auto n = value.cleared_numerator()) {
    v.outcome = n->is_zero() ? Outcome::Zero : Outcome::Nonzero;
    v.exact = true;
  } else {
    const bool small = std::all_of(v.sample_abs.begin(), v.sample_abs.end(),
                                   [&](double a) { return a < opt.zero_tol; });
    v.outcome = small ? Outcome::Zero : Outcome::Nonzero;
  }
  if (static_cast<int>(v.sample_abs.size()) < opt.samples) {
    v.detail = "too few non-degenerate assignments";
    return false;
  }
  if (v.outcome == Outcome::Nonzero)
    return std::all_of(v.sample_abs.begin(), v.sample_abs.end(), [&](double a) { return a > opt.nonzero_tol; });
  return std::all_of(v.sample_abs.begin(), v.sample_abs.end(), [&](double a) { return a < opt.zero_tol; });
}

Form divide_by(const Form& f, const Scalar& s) {
  return s.is_monomial() ? f.scaled(s.invert_monomial()) : f.divided(s);
}

KModelVector v1_term(const TrilinearCase& c, const ScalarRing& R, int a) {
  return gamma_act(model_new_vector(c.ctx, c.chi1, R, c.n1 + 1), a);
}
KModelVector v2_term(const TrilinearCase& c, const ScalarRing& R, int b) {
  return gamma_act(model_new_vector(c.ctx, c.chi2, R, c.n2 + 1), b);
}

struct TermAnalysis {
  Key key;
  Scalar coef;
  int s = 0;
  Certificate cert;
  bool eigen_checked = false;
};

/// Certificates for every term: gamma^a v1 (x) gamma^b v2 is checked to be an
/// (I_s, omega1 omega2)-eigenvector, so l(. (x) .  (x) -) lies in the
/// (I_s, omega3^{-1})-eigenspace of the dual of V3.
std::vector<TermAnalysis> analyse(const TrilinearCase& c, const ScalarRing& R, const Expansion& e,
                                  Verdict& v) {
  std::vector<TermAnalysis> out;
  std::map<int, Certificate> by_s;
  for (const auto& [k, coef] : e.groups) {
    TermAnalysis t{k, coef, 0, {}, false};
    const int a = std::get<0>(k), b = std::get<1>(k);
    const int s1 = c.n1 + a, s2 = c.n2 + b;
    t.s = std::max(s1, s2);
    t.eigen_checked = verify_stabilizer(v1_term(c, R, a), {0, s1, c.chi1.omega()}) &&
                      verify_stabilizer(v2_term(c, R, b), {0, s2, c.chi2.omega()});
    auto it = by_s.find(t.s);
    if (it == by_s.end()) it = by_s.emplace(t.s, vanishing_certificate(c.ctx, c.v3, R, t.s)).first;
    t.cert = it->second;
    t.cert.statement = key_str(k) + ": " + t.cert.statement;
    v.certificates.push_back(t.cert);
    std::ostringstream os;
    os << "term " << key_str(k) << " coef " << coef.str() << " fixed by I_" << t.s
       << (t.eigen_checked ? "" : " (eigen check FAILED)") << (t.cert.certified() ? ", vanishes" : ", survives");
    v.steps.push_back(os.str());
    out.push_back(t);
  }
  return out;
}

Mat2 g_twist(const PadicContext& ctx) {
  const ValuedElement zero = ValuedElement::from_int(ctx, 0), one = ValuedElement::from_int(ctx, 1);
  return {zero, one, ValuedElement::pi_power(ctx, 1), zero};
}

struct Lifted {
  KModelVector a, b;
};
Lifted common(const KModelVector& x, const KModelVector& y) {
  const int L = std::max(x.level(), y.level());
  return {x.lift(L), y.lift(L)};
}

/// l(v1 (x) gamma v2 (x) v3) = omega1(pi) l(gamma v1 (x) v2 (x) g v3) with
/// g v3 = eps v3; returns (num, den) with eps = num / den, or nullopt when a
/// check fails.
std::optional<std::pair<Scalar, Scalar>> g_twist_factor(const TrilinearCase& c, const ScalarRing& R,
                                                        const KModelVector& v3, Verdict& v) {
  const Mat2 g = g_twist(c.ctx);
  KModelVector v1 = model_new_vector(c.ctx, c.chi1, R, c.n1 + 1);
  KModelVector v2 = model_new_vector(c.ctx, c.chi2, R, c.n2 + 1);
  const Scalar w1 = c.chi1.omega().at_pi().to_scalar(R);
  const bool ok1 = act(g, v1).equals(w1 * gamma_act(v1, 1));
  const bool ok2 = act(g * Mat2::gamma(c.ctx, 1), v2).equals(v2);
  v.steps.push_back(std::string("g v1 = omega1(pi) gamma v1: ") + (ok1 ? "verified" : "FAILED"));
  v.steps.push_back(std::string("g gamma v2 = v2: ") + (ok2 ? "verified" : "FAILED"));
  if (!ok1 || !ok2) return std::nullopt;
  Lifted l = common(act(g, v3), v3);
  std::optional<std::size_t> j0;
  for (std::size_t i = 0; i < l.b.size() && !j0; ++i)
    if (!l.b.value(i).is_zero()) j0 = i;
  if (!j0) return std::nullopt;
  bool prop = true;
  for (std::size_t i = 0; i < l.b.size() && prop; ++i)
    prop = l.a.value(i) * l.b.value(*j0) == l.a.value(*j0) * l.b.value(i);
  v.steps.push_back(std::string("g v3 proportional to v3: ") + (prop ? "verified" : "FAILED"));
  if (!prop) return std::nullopt;
  return std::make_pair(l.a.value(*j0), l.b.value(*j0));
}

void finish(Verdict& v, bool numeric_ok, bool checks_ok) {
  v.passed = numeric_ok && checks_ok && v.outcome == v.expected;
  if (!numeric_ok && v.detail.empty()) v.detail = "numeric samples disagree with the exact verdict";
  if (!checks_ok && v.detail.empty()) v.detail = "a structural check failed";
}

Verdict verify_simple(const TrilinearCase& c, const Plan& plan, const ScalarRing& R, const VerifyOptions& opt,
                      Verdict v) {
  TrilinearEvaluator L = chain_assemble(c.ctx, c.chi1, c.chi2, c.v3, R);
  v.steps.push_back(std::string("simple case ") + simple_kind_name(L.simple.kind) +
                    (L.simple.weyl_swapped ? " (V3 realized without the Weyl swap)" : ""));
  const KModelVector v3 = L.v3.new_vector(c.ctx, R, c.n3 + 1);
  auto value_of = [&](const Recipe& r) {
    EllValue e = ell_eval(L, PureTensor{v1_term(c, R, r.a), v2_term(c, R, r.b), gamma_act(v3, r.c)});
    return e.value;
  };
  if (plan.theorem == Theorem::NoVT) {
    v.recipe = "v1*(x=" + std::to_string(plan.x) + ") (x) v2*(y=" + std::to_string(plan.y) + ") (x) gamma^" +
               std::to_string(plan.z) + " v3";
    EllValue e = ell_eval(L, PureTensor{star_vector(c.ctx, c.chi1, R, 1, plan.x),
                                        star_vector(c.ctx, c.chi2, R, 2, plan.y), gamma_act(v3, plan.z)});
    const bool num = classify(v, e.value, c.ctx.p, opt);
    finish(v, num, true);
    return v;
  }
  v.recipe = plan.target.str();
  Form main = value_of(plan.target);
  bool num = classify(v, main, c.ctx.p, opt);
  v.steps.push_back("l(" + plan.target.str() + ") " + outcome_name(v.outcome));
  if (v.outcome != Outcome::Nonzero && plan.alternative) {
    Verdict alt = v;
    Form a = value_of(*plan.alternative);
    num = classify(alt, a, c.ctx.p, opt);
    v.steps.push_back("l(" + plan.alternative->str() + ") " + outcome_name(alt.outcome) + " [" +
                      plan.alternative_reason + "]");
    alt.recipe = plan.alternative->str();
    v = alt;
  }
  // The expansion used by the chain, checked term by term.
  bool checks = true;
  if (plan.theorem != Theorem::VT000) {
    Expansion e = expand(c, R, plan.x, 0, 0);
    checks = e.matches_star;
    for (const auto& t : analyse(c, R, e, v)) {
      checks = checks && t.eigen_checked;
      if (!t.cert.certified()) continue;
      Form tv = value_of({std::get<0>(t.key), std::get<1>(t.key), std::get<2>(t.key)});
      const bool z = tv.exact_zero();
      checks = checks && z;
      v.steps.push_back("certified term " + key_str(t.key) + " evaluates to " + (z ? "0" : "NONZERO"));
    }
  }
  finish(v, num, checks);
  return v;
}

Verdict verify_chain(const TrilinearCase& c, const Plan& plan, const ScalarRing& R, const VerifyOptions& opt,
                     Verdict v) {
  TrilinearEvaluator L = chain_assemble(c.ctx, c.chi1, c.chi2, c.v3, R);
  const int x = plan.x, y = plan.y, z = plan.z;
  OrbitFunction f = build_f(x, y, c.chi1, c.chi2);
  f.n3 = c.n3;
  f.z = z;
  const KModelVector v3 = L.v3.new_vector(c.ctx, R, c.n3 + 1);
  EllValue phi = ell_eval(L, ExtImage{f, gamma_act(v3, z), OrbitStabilizer{z, c.n3, L.v3.central()}});
  CalcFConstant k = calculF_constant(c.chi1, c.chi2, x, y, R);
  // v1* (x) v2* = lambda^{-1} c^{-1} F.
  Form total = phi.value.scaled(k.lambda_inverse * k.monomial_part.invert_monomial());
  {
    std::ostringstream os;
    os << "l(v1*(x=" << x << ") (x) v2*(y=" << y << ") (x) gamma^" << z << " v3) via Phi(f), I_f integral "
       << integral_If(c.ctx, f, R).str();
    v.steps.push_back(os.str());
  }
  if (plan.theorem == Theorem::NoVT) {
    v.recipe = "v1*(x=" + std::to_string(x) + ") (x) v2*(y=" + std::to_string(y) + ") (x) gamma^" +
               std::to_string(z) + " v3";
    const bool num = classify(v, total, c.ctx.p, opt);
    finish(v, num, true);
    return v;
  }
  Verdict tot = v;
  const bool tot_num = classify(tot, total, c.ctx.p, opt);
  v.steps.push_back(std::string("l(v1* (x) v2* (x) v3) ") + outcome_name(tot.outcome) +
                    (tot.exact ? " (exact)" : " (numeric)"));
  if (tot.outcome != Outcome::Nonzero || !tot_num) {
    v.outcome = Outcome::NotEvaluable;
    v.detail = "the ext-image value is not certified nonzero";
    v.value = total.str();
    finish(v, false, false);
    return v;
  }
  Expansion e = expand(c, R, x, y, z);
  bool checks = e.matches_star;
  std::vector<TermAnalysis> terms = analyse(c, R, e, v);
  std::vector<TermAnalysis> live;
  for (const auto& t : terms) {
    checks = checks && t.eigen_checked;
    if (!t.cert.certified()) live.push_back(t);
  }
  const Key target{plan.target.a, plan.target.b, plan.target.c};
  auto find = [&](const Key& k) -> const TermAnalysis* {
    for (const auto& t : live)
      if (t.key == k) return &t;
    return nullptr;
  };
  const TermAnalysis* tgt = find(target);
  v.recipe = plan.target.str();
  if (live.size() == 1 && tgt) {
    Form value = divide_by(total, tgt->coef);
    const bool num = classify(v, value, c.ctx.p, opt);
    finish(v, num, checks);
    return v;
  }
  if (live.size() == 2 && tgt && plan.theorem == Theorem::VT00n && c.n3 == 1) {
    const TermAnalysis* other = find(Key{0, 1, 0});
    auto eps = other ? g_twist_factor(c, R, v3, v) : std::nullopt;
    if (eps) {
      const Scalar w1 = c.chi1.omega().at_pi().to_scalar(R);
      // total = T (coef_t + coef_o omega1(pi) eps).
      Scalar den = tgt->coef * eps->second + other->coef * w1 * eps->first;
      v.steps.push_back("g-twist denominator " + den.str());
      Form value = total.scaled(eps->second).divided(den);
      const bool num = classify(v, value, c.ctx.p, opt);
      finish(v, num, checks);
      return v;
    }
  }
  if (live.size() == 2 && tgt && plan.alternative) {
    const TermAnalysis* other = find(Key{plan.alternative->a, plan.alternative->b, plan.alternative->c});
    if (other && other->s == tgt->s) {
      v.recipe = plan.target.str() + " | " + plan.alternative->str();
      v.proportional_line_dimension = tgt->cert.dimension;
      v.steps.push_back("the two surviving forms lie in a line of dimension " +
                        std::to_string(tgt->cert.dimension) + " [" + plan.alternative_reason + "]");
      v.steps.push_back("l(" + plan.target.str() + ") and l(" + plan.alternative->str() +
                        ") separately: not determined by the chain; the reported value is their combination, "
                        "so at least one of them is nonzero");
      v.outcome = tot.outcome;
      v.exact = tot.exact;
      v.value = tot.value;
      v.sample_abs = tot.sample_abs;
      finish(v, tot_num, checks && tgt->cert.dimension == 1);
      return v;
    }
  }
  v.outcome = Outcome::NotEvaluable;
  v.value = total.str();
  std::ostringstream os;
  os << live.size() << " terms survive the certificates:";
  for (const auto& t : live) os << " " << key_str(t.key);
  v.detail = os.str();
  finish(v, false, false);
  return v;
}

}  // namespace

Verdict verify_theorem(const TrilinearCase& c, const VerifyOptions& opt) {
  Plan plan = plan_case(c);
  Verdict v;
  v.case_name = c.name;
  v.theorem = plan.theorem;
  v.mode = plan.mode;
  v.expected = plan.expected;
  v.recipe = plan.target.str();
  if (plan.expected == Outcome::OutOfScope) {
    v.outcome = Outcome::OutOfScope;
    v.detail = plan.out_of_scope;
    v.passed = true;
    return v;
  }
  const ScalarRing& R = ScalarRing::exact(c.ctx.p, case_root_order(c));
  if (plan.mode == Mode::Simple) return verify_simple(c, plan, R, opt, std::move(v));
  return verify_chain(c, plan, R, opt, std::move(v));
}

}  // namespace trilin
