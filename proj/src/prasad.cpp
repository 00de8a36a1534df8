#include "trilin/prasad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace trilin {

namespace {

ValuedElement zero_el(const PadicContext& ctx) { return ValuedElement::from_int(ctx, 0); }
ValuedElement one_el(const PadicContext& ctx) { return ValuedElement::from_int(ctx, 1); }

Mat2 make_k0(const PadicContext& ctx, const ValuedElement& b0, const ValuedElement& c0) {
  return {one_el(ctx), b0, c0, one_el(ctx)};
}

/// alpha = mu(pi)^{-1} t, beta = mu'(pi)^{-1} t^{-1}.
Monomial alpha_mu(const QuasiCharacter& mu) { return mu.at_pi().inverse() * Monomial::t_power(1); }
Monomial beta_mu(const QuasiCharacter& mup) { return mup.at_pi().inverse() * Monomial::t_power(-1); }

}  // namespace

// ---------------------------------------------------------------------------
// V3Model

V3Model V3Model::principal_series(BorelCharacter chi3) {
  if (chi3.delta2 != 1) throw DomainError("V3Model: principal series needs delta2 = 1");
  V3Model m;
  m.kind_ = Kind::PrincipalSeries;
  m.ambient_ = std::move(chi3);
  return m;
}

V3Model V3Model::steinberg(QuasiCharacter eta) {
  const int p = eta.prime();
  V3Model m;
  m.kind_ = Kind::Steinberg;
  m.ambient_ = {eta * QuasiCharacter::abs_half_power(p, 1), eta * QuasiCharacter::abs_half_power(p, -1), 1};
  m.eta_ = std::move(eta);
  return m;
}

int V3Model::conductor() const {
  if (kind_ == Kind::PrincipalSeries) return ambient_.n();
  return eta_->ramified() ? 2 * eta_->conductor() : 1;
}

QuasiCharacter V3Model::central() const { return ambient_.omega(); }

V3Model V3Model::dual() const {
  if (kind_ == Kind::Steinberg) return steinberg(eta_->inverse());
  return principal_series({ambient_.mu.inverse(), ambient_.mu_prime.inverse(), 1});
}

Scalar V3Model::defining_functional(const KModelVector& f) const {
  if (kind_ == Kind::PrincipalSeries) return f.ring().zero();
  const int p = eta_->prime();
  QuasiCharacter inv = eta_->inverse();
  SteinbergModel line{inv, {inv * QuasiCharacter::abs_half_power(p, -1), inv * QuasiCharacter::abs_half_power(p, 1), 1}};
  return k_pairing(f, line.kernel_line(f.context(), f.ring(), f.level()));
}

bool V3Model::contains(const KModelVector& f) const {
  if (!(f.character() == ambient_)) return false;
  const double tol = f.ring().backend() == Backend::Numeric ? 1e-9 : 0.0;
  return defining_functional(f).is_zero(tol);
}

EigenspaceResult V3Model::eigenspace(const PadicContext& ctx, const ScalarRing& R, int level, int s,
                                     const QuasiCharacter& omega) const {
  EigenspaceResult amb = trilin::eigenspace(ctx, ambient_, R, level, s, omega);
  if (kind_ == Kind::PrincipalSeries) return amb;
  std::vector<Scalar> c;
  std::optional<std::size_t> pivot;
  for (std::size_t i = 0; i < amb.basis.size(); ++i) {
    c.push_back(defining_functional(amb.basis[i]));
    if (!pivot && !c.back().is_zero()) pivot = i;
  }
  if (!pivot) return amb;
  EigenspaceResult out;
  for (std::size_t i = 0; i < amb.basis.size(); ++i) {
    if (i == *pivot) continue;
    out.basis.push_back(c[*pivot] * amb.basis[i] - c[i] * amb.basis[*pivot]);
  }
  out.dimension = static_cast<int>(out.basis.size());
  return out;
}

KModelVector V3Model::new_vector(const PadicContext& ctx, const ScalarRing& R, int level) const {
  if (kind_ == Kind::PrincipalSeries) return model_new_vector(ctx, ambient_, R, level);
  const int n = conductor();
  if (level < n + 1) throw DomainError("V3Model::new_vector: level below conductor + 1");
  EigenspaceResult e = eigenspace(ctx, R, level, n, central());
  if (e.dimension != 1)
    throw DomainError("V3Model::new_vector: Steinberg new line has dimension " + std::to_string(e.dimension));
  return e.basis.front();
}

std::string V3Model::str() const {
  if (kind_ == Kind::Steinberg) return "St(" + eta_->str() + ")";
  return "Ind(" + ambient_.str() + ")";
}

// ---------------------------------------------------------------------------
// res and the simple case

BorelCharacter res_character(const BorelCharacter& chi1, const BorelCharacter& chi2) {
  return {chi1.mu * chi2.mu, chi1.mu_prime * chi2.mu_prime, chi1.delta2 + chi2.delta2};
}

KModelVector res_diag(const KModelVector& v1, const KModelVector& v2) {
  if (!v1.ring().same_as(v2.ring())) throw DomainError("res_diag: different scalar rings");
  const int L = std::max(v1.level(), v2.level());
  KModelVector a = v1.lift(L), b = v2.lift(L);
  KModelVector out(v1.context(), res_character(v1.character(), v2.character()), v1.ring(), L);
  for (std::size_t i = 0; i < out.size(); ++i) out.set(i, a.value(i) * b.value(i));
  return out;
}

KModelVector res_tensor(const TensorVector& F) {
  KModelVector out(F.space().context(), res_character(F.chi1(), F.chi2()), F.ring(), F.level());
  for (std::size_t i = 0; i < out.size(); ++i) out.set(i, F.value(i, i));
  return out;
}

const char* simple_kind_name(SimpleKind k) {
  switch (k) {
    case SimpleKind::Iso: return "ISO";
    case SimpleKind::SteinbergKernel: return "STEINBERG_KERNEL";
    case SimpleKind::None: return "NONE";
  }
  return "?";
}

BorelCharacter simple_v3_character(const BorelCharacter& chi1, const BorelCharacter& chi2) {
  const int p = chi1.prime();
  return {(chi1.mu * chi2.mu).inverse() * QuasiCharacter::abs_half_power(p, -1),
          (chi1.mu_prime * chi2.mu_prime).inverse() * QuasiCharacter::abs_half_power(p, 1), 1};
}

SimpleDetection detect_simple_case(const BorelCharacter& chi1, const BorelCharacter& chi2, const V3Model& v3) {
  const int p = chi1.prime();
  SimpleDetection out;
  QuasiCharacter a = chi1.mu * chi2.mu * QuasiCharacter::abs_half_power(p, 2);
  QuasiCharacter b = chi1.mu_prime * chi2.mu_prime * QuasiCharacter::abs_half_power(p, -2);
  if (v3.kind() == V3Model::Kind::Steinberg) {
    // chi1 chi2 delta = eta o det and V3 = eta^{-1} (x) St.
    if (a == b && a == v3.eta()->inverse()) {
      out.kind = SimpleKind::SteinbergKernel;
      out.eta = a;
    }
    return out;
  }
  BorelCharacter want = simple_v3_character(chi1, chi2);
  const BorelCharacter& have = v3.ambient();
  if (have.mu == want.mu && have.mu_prime == want.mu_prime) {
    out.kind = SimpleKind::Iso;
  } else if (have.mu == want.mu_prime && have.mu_prime == want.mu) {
    out.kind = SimpleKind::Iso;
    out.weyl_swapped = true;
  }
  return out;
}

// ---------------------------------------------------------------------------
// OrbitFunction

bool OrbitFunction::fv_hypotheses() const {
  return x - n3 >= z && z >= y && y >= 0 && x - y >= std::max({n1() - m1(), n2() - m2(), 1});
}

bool OrbitFunction::in_If(const ValuedElement& b0, const ValuedElement& c0) const {
  if (!c0.divisible_by_pi_power(x)) {
    if (c0.is_bottom()) throw PrecisionError("OrbitFunction: c0 not known far enough");
    return false;
  }
  if (mu1.ramified() && (c0.is_bottom() || c0.valuation() != x)) {
    if (c0.is_bottom() && c0.absolute_precision() <= x) throw PrecisionError("OrbitFunction: c0 undecided");
    return false;
  }
  if (!b0.divisible_by_pi_power(-y)) {
    if (b0.is_bottom()) throw PrecisionError("OrbitFunction: b0 not known far enough");
    return false;
  }
  if (mu2p.ramified() && (b0.is_bottom() || b0.valuation() != -y)) {
    if (b0.is_bottom() && b0.absolute_precision() <= -y) throw PrecisionError("OrbitFunction: b0 undecided");
    return false;
  }
  return true;
}

Monomial OrbitFunction::value(const ValuedElement& b0, const ValuedElement& c0) const {
  Monomial v = Monomial::one();
  if (mu1.ramified()) v = v * mu1.at_pi().pow(x) * mu1.eval(c0).inverse();
  if (mu2p.ramified()) v = v * mu2p.eval(b0) * mu2p.at_pi().pow(y);
  return v;
}

std::optional<Monomial> OrbitFunction::at(const Mat2& g) const {
  if (g.a.is_bottom() || g.d.is_bottom()) return std::nullopt;
  ValuedElement b0 = g.b / g.a, c0 = g.c / g.d;
  if (!in_If(b0, c0)) return std::nullopt;
  return mu1.eval(g.a) * mu2p.eval(g.a) * mu1p.eval(g.d) * mu2.eval(g.d) * value(b0, c0);
}

OrbitFunction build_f(int x, int y, const BorelCharacter& chi1, const BorelCharacter& chi2, bool strict) {
  OrbitFunction f;
  f.x = x;
  f.y = y;
  f.mu1 = chi1.mu;
  f.mu1p = chi1.mu_prime;
  f.mu2 = chi2.mu;
  f.mu2p = chi2.mu_prime;
  f.z = y;
  f.n3 = 0;
  if (y < 0 || x < 0) throw DomainError("build_f: need x, y >= 0");
  if (strict && x - y < std::max({f.n1() - f.m1(), f.n2() - f.m2(), 1}))
    throw DomainError("build_f: x - y < max(n1 - m1, n2 - m2, 1)");
  return f;
}

ExtValue ext_closed(const OrbitFunction& f, const Mat2& k1, const Mat2& k2) {
  if (!k1.in_K() || !k2.in_K()) throw DomainError("ext_closed: arguments must lie in K");
  if (f.y < 0 || f.x - f.y < std::max({f.n1() - f.m1(), f.n2() - f.m2(), 1}))
    throw DomainError("ext_closed: factorization lemma hypotheses fail");
  const ValuedElement &c1 = k1.c, &d1 = k1.d, &c2 = k2.c, &d2 = k2.d;
  if (d1.is_bottom() || c2.is_bottom()) return {};
  ValuedElement r1 = c1 / d1, r2 = d2 / c2;
  if (!f.in_If(r2, r1)) return {};
  const PadicContext ctx = PadicContext::make(c2.prime(), c2.cap());
  const int s = c2.valuation();
  Monomial v = f.mu1p.eval(d1);
  v = v * f.mu2.eval(-k2.det() / (ValuedElement::pi_power(ctx, -s) * c2));
  v = v * (alpha_mu(f.mu2) * beta_mu(f.mu2p).inverse()).pow(s);
  if (f.mu1.ramified()) v = v * f.mu1.eval(k1.det() / (ValuedElement::pi_power(ctx, -f.x) * c1));
  if (f.mu2p.ramified()) v = v * f.mu2p.eval(d2);
  return {true, v};
}

ExtValue ext_bruteforce(const OrbitFunction& f, const Mat2& k1, const Mat2& k2, int grid_level) {
  const PadicContext ctx = PadicContext::make(k1.c.prime(), k1.c.cap());
  const Mat2 w = Mat2::weyl(ctx);
  const BorelCharacter c1{f.mu1, f.mu1p, 1}, c2{f.mu2, f.mu2p, 1};
  const int lc = std::max(grid_level, f.x + 1);
  auto cs = if_axis_c(ctx, f.x, f.mu1.ramified(), lc);
  auto bs = if_axis_b(ctx, f.y, f.mu2p.ramified(), grid_level);
  std::optional<ExtValue> found;
  for (const auto& [c0, wc] : cs) {
    // k0 = (1 0; c0 1)(1 b0; 0 det k0), so k1 k0^{-1} in B depends on c0 only.
    Mat2 low{one_el(ctx), zero_el(ctx), c0, one_el(ctx)};
    if (!(k1 * low.inverse()).is_upper_triangular()) continue;
    for (const auto& [b0, wb] : bs) {
      Mat2 k0 = make_k0(ctx, b0, c0);
      Mat2 k0inv;
      try {
        k0inv = k0.inverse();
      } catch (const PrecisionError&) {
        continue;  // det k0 vanishes at grid precision
      }
      Mat2 B1 = k1 * k0inv;
      Mat2 B2 = k2 * k0inv * w;
      if (!B1.is_upper_triangular() || !B2.is_upper_triangular()) continue;
      if (!f.in_If(b0, c0)) continue;
      ExtValue v{true, borel_eval(c1, B1) * borel_eval(c2, B2) * f.value(b0, c0)};
      if (found && !(found->value == v.value))
        throw PrecisionError("ext_bruteforce: two matching cells with different values");
      found = v;
    }
  }
  return found.value_or(ExtValue{});
}

ExtValue ext_eval(const OrbitFunction& f, const Mat2& g1, const Mat2& g2) {
  IwasawaFactors a = iwasawa(g1), b = iwasawa(g2);
  ExtValue v = ext_closed(f, a.k, b.k);
  if (!v.nonzero) return v;
  const BorelCharacter c1{f.mu1, f.mu1p, 1}, c2{f.mu2, f.mu2p, 1};
  return {true, borel_eval(c1, a.b) * borel_eval(c2, b.b) * v.value};
}

TensorVector ext_tensor(const PadicContext& ctx, const OrbitFunction& f, const BorelCharacter& chi1,
                        const BorelCharacter& chi2, const ScalarRing& R, int level) {
  TensorVector F(ctx, chi1, chi2, R, level);
  const CosetSpace& S = F.space();
  std::vector<Mat2> reps;
  for (std::size_t i = 0; i < S.size(); ++i) reps.push_back(S.rep(i));
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < S.size(); ++j) {
      ExtValue v = ext_closed(f, reps[i], reps[j]);
      F.set(i, j, v.nonzero ? v.value.to_scalar(R) : R.zero());
    }
  return F;
}

int if_grid_level(const OrbitFunction& f) {
  int lc = f.x + 1;
  if (f.mu1.ramified()) lc = std::max(lc, f.x + f.mu1.conductor());
  int lb = 1;
  if (f.mu2p.ramified()) lb = std::max(lb, f.mu2p.conductor() - f.y);
  return std::max(lb, lc);
}

Scalar integral_If(const PadicContext& ctx, const OrbitFunction& f, const ScalarRing& R) {
  const int L = if_grid_level(f);
  auto cs = if_axis_c(ctx, f.x, f.mu1.ramified(), L);
  auto bs = if_axis_b(ctx, f.y, f.mu2p.ramified(), L);
  Scalar acc = R.zero();
  for (const auto& [c0, wc] : cs)
    for (const auto& [b0, wb] : bs) {
      if (!f.in_If(b0, c0)) continue;
      acc += R.rational(wb * wc) * f.value(b0, c0).to_scalar(R);
    }
  return acc;
}

}  // namespace trilin

namespace trilin {

// ---------------------------------------------------------------------------
// Form

Form Form::scaled(const Scalar& s) const {
  Form out{finite * s, {}, denominator};
  for (const auto& t : tails) out.tails.push_back({t.first * s, t.ratio});
  return out;
}

Form Form::divided(const Scalar& d) const {
  Form out = *this;
  out.denominator = denominator ? *denominator * d : d;
  return out;
}

Form operator+(const Form& a, const Form& b) {
  if (a.denominator || b.denominator) {
    // Bring both to the common denominator da * db.
    const Scalar one = a.finite.ring()->one();
    Scalar da = a.denominator.value_or(one), db = b.denominator.value_or(one);
    Form x = a.scaled(db), y = b.scaled(da);
    Form out{x.finite + y.finite, x.tails, da * db};
    out.tails.insert(out.tails.end(), y.tails.begin(), y.tails.end());
    return out;
  }
  Form out{a.finite + b.finite, a.tails, std::nullopt};
  out.tails.insert(out.tails.end(), b.tails.begin(), b.tails.end());
  return out;
}

bool Form::exact_zero() const {
  if (!finite.is_zero()) return false;
  return std::all_of(tails.begin(), tails.end(), [](const Tail& t) { return t.first.is_zero(); });
}

std::optional<Scalar> Form::cleared_numerator() const {
  const Scalar one = finite.ring()->one();
  std::vector<Scalar> gaps;
  for (const auto& t : tails) {
    gaps.push_back(one - t.ratio);
    if (gaps.back().is_zero()) return std::nullopt;
  }
  Scalar all = one;
  for (const auto& g : gaps) all *= g;
  Scalar out = finite * all;
  for (std::size_t i = 0; i < tails.size(); ++i) {
    Scalar rest = one;
    for (std::size_t j = 0; j < tails.size(); ++j)
      if (j != i) rest *= gaps[j];
    out += tails[i].first * rest;
  }
  return out;
}

Complex Form::evaluate(const Assignment& a, double unit_tol) const {
  const ScalarRing& N = finite.ring()->as_numeric(a);
  Complex v = N.import(finite).to_complex();
  for (const auto& t : tails) {
    if (t.first.is_zero()) continue;
    v += geometric_tail(N.import(t.ratio), N.import(t.first), unit_tol).to_complex();
  }
  if (denominator) {
    Complex d = N.import(*denominator).to_complex();
    if (std::abs(d) < 1e-300) throw ArithmeticError("Form: denominator vanishes at this assignment");
    v /= d;
  }
  return v;
}

std::string Form::str() const {
  std::ostringstream os;
  os << finite.str();
  for (const auto& t : tails) os << " + (" << t.first.str() << ")/(1 - " << t.ratio.str() << ")";
  if (denominator) os << " all over (" << denominator->str() << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// phi

namespace {

struct MonoLess {
  bool operator()(const Monomial& x, const Monomial& y) const {
    if (x.e != y.e) return x.e < y.e;
    if (x.t != y.t) return x.t < y.t;
    return cmp(x.zeta, y.zeta) < 0;
  }
};

using MonoSum = std::map<Monomial, Rational, MonoLess>;

Scalar to_scalar(const MonoSum& m, const ScalarRing& R) {
  Scalar acc = R.zero();
  for (const auto& [mono, q] : m)
    if (q != 0) acc += R.rational(q) * mono.to_scalar(R);
  return acc;
}

}  // namespace

QuasiCharacter phi_theta(const BorelCharacter& chi1, const BorelCharacter& chi2, const BorelCharacter& chi3) {
  const int p = chi1.prime();
  return (chi1.mu * chi2.mu_prime * chi3.mu_prime).inverse() * QuasiCharacter::abs_half_power(p, -1);
}

int phi_shell_count(int level, int n3) { return level + n3 + 2; }

PhiFunctional::PhiFunctional(const PadicContext& ctx, const BorelCharacter& ambient, const QuasiCharacter& theta,
                             const ScalarRing& R, int level, int shells)
    : ring_(&R), ambient_(ambient), theta_(theta), level_(level), J_(shells) {
  if (ambient.delta2 != 1) throw DomainError("PhiFunctional: ambient model must have delta2 = 1");
  if (J_ < level + 1) throw DomainError("PhiFunctional: too few shells to reach the asymptotic regime");
  CosetSpace S(ctx, level);
  idx_one_ = S.index_of(IwasawaFactors::Pivot::D, 0);
  idx_w0_ = S.index_of(IwasawaFactors::Pivot::W, 0);
  const int c = std::max({level, theta.conductor(), ambient.mu.conductor(), ambient.mu_prime.conductor(), 1});
  if (c + J_ > ctx.N) throw DomainError("PhiFunctional: working precision too small");
  const std::int64_t pc = ctx.pow(c);
  const Rational cell(1, static_cast<unsigned long>(pc));
  const Mat2 w = Mat2::weyl(ctx);
  kernel_.assign(2 * J_ + 1, std::vector<Scalar>(S.size(), R.zero()));
  for (int j = -J_; j <= J_; ++j) {
    std::vector<MonoSum> acc(S.size());
    // vol(pi^j u (1 + p^c O)) = q^{-j} p^{-c}
    const Monomial measure = Monomial::t_power(-2 * j);
    for (std::int64_t u = 1; u < pc; ++u) {
      if (u % ctx.p == 0) continue;
      ValuedElement x = ValuedElement::from_parts(ctx, j, u, c);
      Mat2 g = w * Mat2{one_el(ctx), x, zero_el(ctx), one_el(ctx)};
      IwasawaFactors fac = iwasawa(g);
      std::size_t idx = S.index_of(fac);
      acc[idx][borel_eval(ambient, fac.b) * theta.eval(x) * measure] += cell;
    }
    for (std::size_t i = 0; i < S.size(); ++i) kernel_[j + J_][i] = to_scalar(acc[i], R);
  }
  ratio_pos_ = (theta.at_pi() * Monomial::t_power(-2)).to_scalar(R);
  ratio_neg_ = (ambient.mu.at_pi() * ambient.mu_prime.at_pi().inverse() * theta.at_pi().inverse()).to_scalar(R);
  // The outermost shells must already be geometric and concentrated on the
  // reps (1 1; 1 0) and 1.
  for (std::size_t i = 0; i < S.size(); ++i) {
    const Scalar& top = kernel_[2 * J_][i];
    const Scalar& bot = kernel_[0][i];
    if (i != idx_w0_ && !top.is_zero()) throw PrecisionError("PhiFunctional: positive tail not concentrated");
    if (i != idx_one_ && !bot.is_zero()) throw PrecisionError("PhiFunctional: negative tail not concentrated");
    if (!(top == ratio_pos_ * kernel_[2 * J_ - 1][i]))
      throw PrecisionError("PhiFunctional: positive shells not yet geometric");
    if (!(bot == ratio_neg_ * kernel_[1][i])) throw PrecisionError("PhiFunctional: negative shells not yet geometric");
  }
}

std::vector<Scalar> PhiFunctional::shell_values(const KModelVector& v0) const {
  if (v0.level() > level_) throw DomainError("PhiFunctional: vector level above functional level");
  KModelVector v = v0.lift(level_);
  if (!(v.character() == ambient_)) throw DomainError("PhiFunctional: vector not in the ambient model");
  std::vector<Scalar> out;
  for (const auto& row : kernel_) {
    Scalar acc = ring_->zero();
    for (std::size_t i = 0; i < row.size(); ++i)
      if (!row[i].is_zero() && !v.value(i).is_zero()) acc += row[i] * v.value(i);
    out.push_back(std::move(acc));
  }
  return out;
}

Form PhiFunctional::apply(const KModelVector& v0) const {
  std::vector<Scalar> sh = shell_values(v0);
  Form out = Form::exact(ring_->zero());
  for (const auto& s : sh) out.finite += s;
  out.tails.push_back({sh.back() * ratio_pos_, ratio_pos_});
  out.tails.push_back({sh.front() * ratio_neg_, ratio_neg_});
  return out;
}

PhiFunctional phi_build(const PadicContext& ctx, const V3Model& v3, const BorelCharacter& chi1,
                        const BorelCharacter& chi2, const ScalarRing& R, int level) {
  CentralCheck cc = central_check(chi1.omega(), chi2.omega(), v3.central());
  if (!cc.ok) throw DomainError("phi_build: omega1 omega2 omega3 is not trivial: " + cc.message);
  return PhiFunctional(ctx, v3.ambient(), phi_theta(chi1, chi2, v3.ambient()), R, level,
                       phi_shell_count(level, v3.conductor()));
}

// ---------------------------------------------------------------------------
// Phi(f)

bool verify_stabilizer(const KModelVector& w, const OrbitStabilizer& st) {
  const PadicContext& ctx = w.context();
  const ScalarRing& R = w.ring();
  const ValuedElement one = one_el(ctx), zero = zero_el(ctx);
  struct Gen {
    Mat2 k;
    Monomial factor;
  };
  std::vector<Gen> gens;
  gens.push_back({{one, ValuedElement::pi_power(ctx, -st.z), zero, one}, Monomial::one()});
  gens.push_back({{one, zero, ValuedElement::pi_power(ctx, st.z + st.s), one}, Monomial::one()});
  for (std::int64_t g : unit_group(ctx.p, 3).generators()) {
    ValuedElement u = ValuedElement::from_int(ctx, g);
    gens.push_back({Mat2::diag(u, one), Monomial::one()});
    gens.push_back({Mat2::diag(one, u), st.s == 0 ? Monomial::one() : st.omega.eval(u)});
  }
  for (const auto& g : gens) {
    KModelVector kw = act(g.k, w);
    if (!kw.equals(g.factor.to_scalar(R) * w.lift(kw.level()))) return false;
  }
  return true;
}

KModelVector orbit_average(const PadicContext& ctx, const OrbitFunction& f, const KModelVector& w,
                           const std::optional<OrbitStabilizer>& st, OrbitAverageStats* stats) {
  const ScalarRing& R = w.ring();
  const int Lw = w.level();
  const bool use_st = st && verify_stabilizer(w, *st);
  // Cells small enough that k0^{-1} k0' lies in K(Lw) and f is constant.
  int lb = std::max(Lw, 1);
  if (f.mu2p.ramified()) lb = std::max(lb, f.mu2p.conductor() - f.y);
  int lc = std::max({Lw + f.y, f.x + 1, f.mu1.ramified() ? f.x + f.mu1.conductor() : 0});
  if (use_st) lc = std::max(lc, st->z + st->s + 1);
  auto cs = if_axis_c(ctx, f.x, f.mu1.ramified(), lc);
  auto bs = if_axis_b(ctx, f.y, f.mu2p.ramified(), lb);
  Scalar fixed = R.zero();
  std::optional<KModelVector> acc;
  OrbitAverageStats local;
  const Mat2 gz = Mat2::gamma(ctx, use_st ? st->z : 0), gzi = gz.inverse();
  for (const auto& [c0, wc] : cs)
    for (const auto& [b0, wb] : bs) {
      if (!f.in_If(b0, c0)) continue;
      ++local.cells;
      Scalar coef = R.rational(wb * wc) * f.value(b0, c0).to_scalar(R);
      Mat2 k0 = make_k0(ctx, b0, c0);
      if (use_st && in_iwahori(gzi * k0 * gz, st->s)) {
        ++local.via_stabilizer;
        fixed += coef;
        continue;
      }
      ++local.via_action;
      KModelVector term = coef * act(k0, w, Lw + 2 * f.y);
      if (!acc) {
        acc = term;
      } else {
        const int L = std::max(acc->level(), term.level());
        acc = acc->lift(L) + term.lift(L);
      }
    }
  if (stats) *stats = local;
  KModelVector out = fixed * w;
  if (acc) {
    const int L = std::max(acc->level(), out.level());
    out = out.lift(L) + acc->lift(L);
  }
  return out;
}

Form Phi_f(const PadicContext& ctx, const OrbitFunction& f, const KModelVector& w, const V3Model& v3,
           const BorelCharacter& chi1, const BorelCharacter& chi2, const std::optional<OrbitStabilizer>& st) {
  KModelVector W = orbit_average(ctx, f, w, st);
  PhiFunctional phi = phi_build(ctx, v3, chi1, chi2, w.ring(), W.level());
  return phi.apply(W);
}

}  // namespace trilin

namespace trilin {

// ---------------------------------------------------------------------------
// F versus v1* (x) v2*

CalcFConstant calculF_constant(const BorelCharacter& chi1, const BorelCharacter& chi2, int x, int y,
                               const ScalarRing& R) {
  const PadicContext ctx = PadicContext::make(chi1.prime());
  Monomial m = chi2.mu.eval(ValuedElement::from_int(ctx, -1)) * alpha_of(chi1).pow(chi1.m() - x) *
               alpha_of(chi2).pow(chi2.m()) * beta_of(chi2).pow(-y);
  Scalar lam = R.one();
  for (const BorelCharacter* c : {&chi1, &chi2})
    if (c->unramified()) lam *= R.one() - (beta_of(*c) * alpha_of(*c).inverse()).to_scalar(R);
  return {m.to_scalar(R), lam};
}

CalcFCheck calculF_check(const PadicContext& ctx, const BorelCharacter& chi1, const BorelCharacter& chi2, int x,
                         int y, const ScalarRing& R) {
  OrbitFunction f = build_f(x, y, chi1, chi2);
  KModelVector s1 = star_vector(ctx, chi1, R, 1, x);
  KModelVector s2 = star_vector(ctx, chi2, R, 2, y);
  TensorVector pure = TensorVector::pure(s1, s2);
  TensorVector F = ext_tensor(ctx, f, chi1, chi2, R, pure.level());
  CalcFConstant c = calculF_constant(chi1, chi2, x, y, R);
  CalcFCheck out;
  const std::size_t n = pure.space().size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ++out.pairs;
      Scalar lhs = c.lambda_inverse * F.value(i, j);
      Scalar rhs = c.monomial_part * pure.value(i, j);
      if (!F.value(i, j).is_zero()) ++out.support;
      if (!(lhs == rhs)) {
        if (out.mismatches == 0)
          out.first_mismatch = pure.space().rep(i).str() + " x " + pure.space().rep(j).str() + ": " + lhs.str() +
                               " vs " + rhs.str();
        ++out.mismatches;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// l

TrilinearEvaluator chain_assemble(const PadicContext& ctx, const BorelCharacter& chi1, const BorelCharacter& chi2,
                                  const V3Model& v3, const ScalarRing& R) {
  CentralCheck cc = central_check(chi1.omega(), chi2.omega(), v3.central());
  if (!cc.ok) throw DomainError("chain_assemble: " + cc.message);
  TrilinearEvaluator L{ctx, chi1, chi2, v3, &R, Mode::Chain, detect_simple_case(chi1, chi2, v3)};
  if (L.simple.kind != SimpleKind::None) {
    L.mode = Mode::Simple;
    // Ind(mu, mu') and Ind(mu', mu) are isomorphic; work in the realization
    // that pairs directly with res.
    if (L.simple.weyl_swapped) L.v3 = V3Model::principal_series(simple_v3_character(chi1, chi2));
  }
  return L;
}

namespace {

EllValue not_evaluable(std::string why) { return {false, Form::exact(Scalar()), std::move(why)}; }

}  // namespace

EllValue ell_eval(const TrilinearEvaluator& L, const Element& e) {
  const ScalarRing& R = *L.ring;
  if (const auto* c = std::get_if<Combination>(&e)) {
    Form acc = Form::exact(R.zero());
    for (const auto& t : c->terms) {
      if (t.element.size() != 1) throw DomainError("ell_eval: translate term must hold one element");
      EllValue v = ell_eval(L, t.element.front());
      if (!v.evaluable) return v;
      acc = acc + v.value.scaled(t.coef);
    }
    return {true, acc, {}};
  }
  if (const auto* x = std::get_if<ExtImage>(&e)) {
    if (!L.v3.contains(x->w)) throw DomainError("ell_eval: third vector not in V3");
    if (L.mode == Mode::Chain) return {true, Phi_f(L.ctx, x->f, x->w, L.v3, L.chi1, L.chi2, x->stabilizer), {}};
    // res o ext = 0.
    const int level = std::max(x->w.level(), x->f.x + 2);
    TensorVector F = ext_tensor(L.ctx, x->f, L.chi1, L.chi2, R, level);
    return {true, Form::exact(k_pairing(res_tensor(F), x->w)), {}};
  }
  const auto& t = std::get<PureTensor>(e);
  if (L.mode == Mode::Chain)
    return not_evaluable("pure tensors are only reachable through ext-images outside the simple case");
  if (!(t.v1.character() == L.chi1) || !(t.v2.character() == L.chi2))
    throw DomainError("ell_eval: tensor factors not in V1, V2");
  if (!L.v3.contains(t.w)) throw DomainError("ell_eval: third vector not in V3");
  return {true, Form::exact(k_pairing(res_diag(t.v1, t.v2), t.w)), {}};
}

}  // namespace trilin
