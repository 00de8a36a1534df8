#include "trilin/principal_series.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace trilin {

Monomial alpha_of(const BorelCharacter& chi) { return chi.mu.at_pi().inverse() * Monomial::t_power(1); }

Monomial beta_of(const BorelCharacter& chi) { return chi.mu_prime.at_pi().inverse() * Monomial::t_power(-1); }

// ---------------------------------------------------------------------------

KModelVector::KModelVector(const PadicContext& ctx, BorelCharacter chi, const ScalarRing& R, int level)
    : chi_(std::move(chi)), ring_(&R), space_(ctx, level), values_(space_.size(), R.zero()) {
  if (chi_.mu.conductor() > level || chi_.mu_prime.conductor() > level)
    throw DomainError("KModelVector: level below the conductor of the inducing character");
}

Scalar KModelVector::at(const Mat2& g) const {
  IwasawaFactors f = iwasawa(g);
  const Scalar& v = values_[space_.index_of(f)];
  if (ring_->backend() == Backend::Exact && v.is_zero()) return v;
  return chi_.eval(f.b).to_scalar(*ring_) * v;
}

KModelVector KModelVector::lift(int level) const {
  if (level == space_.level()) return *this;
  if (level < space_.level()) throw DomainError("lift: target level is coarser");
  KModelVector out(space_.context(), chi_, *ring_, level);
  for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = values_[space_.project(out.space_, i)];
  return out;
}

namespace {

void check_compatible(const KModelVector& x, const KModelVector& y) {
  if (!(x.character() == y.character())) throw DomainError("vectors from different models");
  if (!x.ring().same_as(y.ring())) throw DomainError("vectors over different scalar rings");
}

}  // namespace

KModelVector operator+(const KModelVector& x, const KModelVector& y) {
  check_compatible(x, y);
  int L = std::max(x.level(), y.level());
  KModelVector a = x.lift(L), b = y.lift(L);
  for (std::size_t i = 0; i < a.size(); ++i) a.values_[i] += b.values_[i];
  return a;
}

KModelVector operator-(const KModelVector& x, const KModelVector& y) {
  return x + y.ring().integer(-1) * y;
}

KModelVector operator*(const Scalar& s, const KModelVector& v) {
  KModelVector out = v;
  for (auto& x : out.values_) x = s * x;
  return out;
}

bool KModelVector::is_zero(double tol) const {
  return std::all_of(values_.begin(), values_.end(), [&](const Scalar& s) {
    return ring_->backend() == Backend::Exact ? s.is_zero() : s.is_zero(tol);
  });
}

bool KModelVector::equals(const KModelVector& o, double tol) const { return (*this - o).is_zero(tol); }

std::vector<bool> KModelVector::support(double tol) const {
  std::vector<bool> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i)
    out[i] = ring_->backend() == Backend::Exact ? !values_[i].is_zero() : !values_[i].is_zero(tol);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

int min_valuation(const Mat2& g) {
  int m = 1 << 20;
  for (const auto* x : {&g.a, &g.b, &g.c, &g.d})
    if (!x->is_bottom()) m = std::min(m, x->valuation());
  return m;
}

}  // namespace

int level_spread(const Mat2& g) { return std::max(0, -(min_valuation(g) + min_valuation(g.inverse()))); }

KModelVector act(const Mat2& g, const KModelVector& v, int level) {
  int L = std::max(v.level() + level_spread(g), level);
  KModelVector out(v.context(), v.character(), v.ring(), L);
  for (std::size_t i = 0; i < out.size(); ++i) out.set(i, v.at(out.space().rep(i) * g));
  return out;
}

KModelVector gamma_act(const KModelVector& v, int r) {
  if (r == 0) return v;
  return act(Mat2::gamma(v.context(), r), v);
}

// ---------------------------------------------------------------------------

namespace {

struct Generator {
  Mat2 k;
  Rational omega_d;  // omega(d_k) as an element of Q/Z
};

std::vector<Generator> iwahori_generators(const PadicContext& ctx, int s, const QuasiCharacter& omega) {
  std::vector<Generator> gens;
  auto omega_at = [&](std::int64_t d) -> Rational {
    if (s == 0) return 0;
    return omega.finite().eval(ValuedElement::from_int(ctx, d));
  };
  gens.push_back({Mat2::from_ints(ctx, 1, 1, 0, 1), 0});
  gens.push_back({Mat2::from_ints(ctx, 1, 0, s == 0 ? 1 : ctx.pow(s), 1), 0});
  for (std::int64_t g : unit_group(ctx.p, 3).generators()) {
    gens.push_back({Mat2::from_ints(ctx, g, 0, 0, 1), 0});
    gens.push_back({Mat2::from_ints(ctx, 1, 0, 0, g), omega_at(g)});
  }
  return gens;
}

}  // namespace

EigenspaceResult eigenspace(const PadicContext& ctx, const BorelCharacter& chi, const ScalarRing& R, int level,
                            int s, const QuasiCharacter& omega) {
  if (s < 0 || s > level) throw DomainError("eigenspace: need 0 <= s <= level");
  EigenspaceResult res;
  if (s >= 1 && omega.conductor() > s) return res;  // omega(d) is not a character of I_s

  CosetSpace space(ctx, level);
  const auto gens = iwahori_generators(ctx, s, omega);
  const std::size_t n = space.size();
  std::vector<std::optional<Rational>> val(n);
  std::vector<int> orbit_of(n, -1);

  for (std::size_t root = 0; root < n; ++root) {
    if (orbit_of[root] >= 0) continue;
    const int id = static_cast<int>(root);
    std::vector<std::size_t> members;
    bool consistent = true;
    std::deque<std::size_t> queue{root};
    val[root] = Rational(0);
    orbit_of[root] = id;
    while (!queue.empty()) {
      std::size_t r = queue.front();
      queue.pop_front();
      members.push_back(r);
      Mat2 rk = space.rep(r);
      for (const auto& g : gens) {
        IwasawaFactors f = iwasawa(rk * g.k);
        std::size_t target = space.index_of(f);
        Monomial cb = chi.eval(f.b);
        if (cb.t != 0 || std::any_of(cb.e.begin(), cb.e.end(), [](int x) { return x != 0; }))
          throw std::logic_error("eigenspace: Borel part outside B cap K");
        // v(target) = omega(d_k) chi(b)^{-1} v(r)
        Rational want = frac_mod1(*val[r] + g.omega_d - cb.zeta);
        if (!val[target]) {
          val[target] = want;
          orbit_of[target] = id;
          queue.push_back(target);
        } else if (*val[target] != want) {
          consistent = false;
        }
      }
    }
    if (!consistent) continue;
    KModelVector b(ctx, chi, R, level);
    for (std::size_t m : members) b.set(m, Monomial::root_of_unity(*val[m]).to_scalar(R));
    res.basis.push_back(std::move(b));
  }
  res.dimension = static_cast<int>(res.basis.size());
  return res;
}

KModelVector model_new_vector(const PadicContext& ctx, const BorelCharacter& chi, const ScalarRing& R, int level) {
  const int n = chi.n();
  if (level < n + 1) throw DomainError("model_new_vector: level must be at least conductor + 1");
  EigenspaceResult e = eigenspace(ctx, chi, R, level, n, chi.omega());
  if (e.dimension != 1)
    throw std::logic_error("model_new_vector: eigenspace at the conductor has dimension " +
                           std::to_string(e.dimension));
  KModelVector v = e.basis.front();
  std::size_t anchor = v.space().index_of(IwasawaFactors::Pivot::D, ctx.pow(chi.m()));
  const Scalar& a = v.value(anchor);
  if (a.is_zero(R.backend() == Backend::Numeric ? 1e-12 : 0.0))
    throw std::logic_error("model_new_vector: new vector vanishes at the normalization point");
  return a.invert_monomial() * v;
}

// ---------------------------------------------------------------------------

const char* lemma_case_name(LemmaCase c) {
  switch (c) {
    case LemmaCase::NR: return "NR";
    case LemmaCase::SP0: return "SP0";
    case LemmaCase::SP1: return "SP1";
    case LemmaCase::SP2: return "SP2";
  }
  return "?";
}

LemmaCase lemma_case_of(const BorelCharacter& chi) {
  const bool rm = chi.mu.ramified(), rmp = chi.mu_prime.ramified();
  if (!rm && !rmp) return LemmaCase::NR;
  if (rm && rmp) return LemmaCase::SP0;
  if (!rm) return LemmaCase::SP1;
  return LemmaCase::SP2;
}

Scalar gamma_closed_form(LemmaCase c, const BorelCharacter& chi, const ScalarRing& R, int r, const Mat2& k,
                         GammaVariant variant) {
  if (lemma_case_of(chi) != c) throw DomainError("gamma_closed_form: case does not match the character");
  if (r < 0) throw DomainError("gamma_closed_form: r must be >= 0");
  const PadicContext ctx{k.a.prime() ? k.a.prime() : k.d.prime(), std::max(k.a.cap(), k.d.cap())};
  const std::optional<int> st = stratum(k);
  auto in_I = [&](int s) { return !st || *st >= s; };
  auto exactly = [&](int s) { return st && *st == s; };
  const Scalar alpha = alpha_of(chi).to_scalar(R);
  const Scalar beta = beta_of(chi).to_scalar(R);
  auto ab = [&](int i, int j) { return alpha.pow(i) * beta.pow(j); };
  // mu(det k / (pi^{-s} c))
  auto mu_ratio = [&](int s) {
    return chi.mu.eval(k.det() * ValuedElement::pi_power(ctx, s) / k.c).to_scalar(R);
  };
  auto mu_p_d = [&] { return chi.mu_prime.eval(k.d).to_scalar(R); };
  const int m = chi.m(), n = chi.n();

  switch (c) {
    case LemmaCase::NR:
      switch (variant) {
        case GammaVariant::Plain:
          if (in_I(r)) return alpha.pow(r);
          return ab(*st, r - *st);
        case GammaVariant::MinusAlphaNext:
          if (in_I(r + 1)) return R.zero();
          return ab(*st, r - *st) - ab(*st - 1, r + 1 - *st);
        case GammaVariant::MinusBetaPrev:
          if (r < 1) throw DomainError("gamma_closed_form: r >= 1 required");
          if (in_I(r)) return alpha.pow(r) - ab(r - 1, 1);
          return R.zero();
      }
      break;
    case LemmaCase::SP0:
      if (variant != GammaVariant::Plain) throw DomainError("gamma_closed_form: no such variant for SP0");
      if (exactly(m + r)) return alpha.pow(r) * mu_ratio(m + r) * mu_p_d();
      return R.zero();
    case LemmaCase::SP1:
      switch (variant) {
        case GammaVariant::Plain:
          if (in_I(n + r)) return alpha.pow(r) * mu_p_d();
          return R.zero();
        case GammaVariant::MinusAlphaNext:
          if (exactly(n + r)) return alpha.pow(r) * mu_p_d();
          return R.zero();
        case GammaVariant::MinusBetaPrev:
          throw DomainError("gamma_closed_form: no such variant for SP1");
      }
      break;
    case LemmaCase::SP2:
      switch (variant) {
        case GammaVariant::Plain:
          if (in_I(r + 1)) return R.zero();
          return ab(*st, r - *st) * mu_ratio(*st);
        case GammaVariant::MinusBetaPrev:
          if (r < 1) throw DomainError("gamma_closed_form: r >= 1 required");
          if (exactly(r)) return alpha.pow(r) * mu_ratio(r);
          return R.zero();
        case GammaVariant::MinusAlphaNext:
          throw DomainError("gamma_closed_form: no such variant for SP2");
      }
      break;
  }
  throw std::logic_error("gamma_closed_form: unreachable");
}

KModelVector gamma_translate(const PadicContext& ctx, const BorelCharacter& chi, const ScalarRing& R, int r,
                             GammaVariant variant) {
  KModelVector v = model_new_vector(ctx, chi, R, chi.n() + 1);
  switch (variant) {
    case GammaVariant::Plain:
      return gamma_act(v, r);
    case GammaVariant::MinusAlphaNext:
      return gamma_act(v, r) - alpha_of(chi).inverse().to_scalar(R) * gamma_act(v, r + 1);
    case GammaVariant::MinusBetaPrev:
      if (r < 1) throw DomainError("gamma_translate: r >= 1 required");
      return gamma_act(v, r) - beta_of(chi).to_scalar(R) * gamma_act(v, r - 1);
  }
  throw std::logic_error("gamma_translate: unreachable");
}

KModelVector star_vector(const PadicContext& ctx, const BorelCharacter& chi, const ScalarRing& R, int side,
                         int exponent) {
  const int m = chi.m(), n = chi.n();
  KModelVector v = model_new_vector(ctx, chi, R, n + 1);
  if (side == 1) {
    if (chi.mu_prime.ramified()) {
      if (exponent < m) throw DomainError("star_vector: need x >= m1");
      return gamma_act(v, exponent - m);
    }
    if (exponent < 1) throw DomainError("star_vector: need x >= 1 when mu'_1 is unramified");
    return gamma_act(v, exponent) - beta_of(chi).to_scalar(R) * gamma_act(v, exponent - 1);
  }
  if (side == 2) {
    if (exponent < m) throw DomainError("star_vector: need y >= m2");
    if (chi.mu.ramified()) return gamma_act(v, exponent - m);
    return gamma_act(v, exponent - n) - alpha_of(chi).inverse().to_scalar(R) * gamma_act(v, exponent - n + 1);
  }
  throw DomainError("star_vector: side must be 1 or 2");
}

bool StrataBand::contains(const std::optional<int>& s) const {
  if (!s) return !to_exclusive.has_value();
  return *s >= from && (!to_exclusive || *s < *to_exclusive);
}

std::string StrataBand::str() const {
  std::string a = from == 0 ? "K" : "I_" + std::to_string(from);
  if (!to_exclusive) return a;
  return a + " \\ I_" + std::to_string(*to_exclusive);
}

StrataBand star_support(const BorelCharacter& chi, int side, int exponent) {
  if (side == 1) {
    if (chi.mu.ramified()) return {exponent, exponent + 1};
    return {exponent, std::nullopt};
  }
  if (chi.mu_prime.ramified()) return {exponent, exponent + 1};
  return {0, exponent + 1};
}

// ---------------------------------------------------------------------------

TensorVector::TensorVector(const PadicContext& ctx, BorelCharacter chi1, BorelCharacter chi2, const ScalarRing& R,
                           int level)
    : chi1_(std::move(chi1)),
      chi2_(std::move(chi2)),
      ring_(&R),
      space_(ctx, level),
      n_(space_.size()),
      values_(n_ * n_, R.zero()) {}

TensorVector TensorVector::pure(const KModelVector& v1, const KModelVector& v2) {
  if (!v1.ring().same_as(v2.ring())) throw DomainError("TensorVector::pure: different scalar rings");
  int L = std::max(v1.level(), v2.level());
  KModelVector a = v1.lift(L), b = v2.lift(L);
  TensorVector t(v1.context(), v1.character(), v2.character(), v1.ring(), L);
  for (std::size_t i = 0; i < t.n_; ++i)
    for (std::size_t j = 0; j < t.n_; ++j) t.values_[i * t.n_ + j] = a.value(i) * b.value(j);
  return t;
}

Scalar TensorVector::at(const Mat2& g1, const Mat2& g2) const {
  IwasawaFactors f1 = iwasawa(g1), f2 = iwasawa(g2);
  const Scalar& v = value(space_.index_of(f1), space_.index_of(f2));
  return (chi1_.eval(f1.b) * chi2_.eval(f2.b)).to_scalar(*ring_) * v;
}

// ---------------------------------------------------------------------------

KModelVector SteinbergModel::kernel_line(const PadicContext& ctx, const ScalarRing& R, int level) const {
  const int p = eta.prime();
  if (!(induced.mu * QuasiCharacter::abs_half_power(p, induced.delta2) == eta) ||
      !(induced.mu_prime * QuasiCharacter::abs_half_power(p, -induced.delta2) == eta))
    throw DomainError("SteinbergModel: eta o det is not in the induced model");
  KModelVector k(ctx, induced, R, level);
  for (std::size_t i = 0; i < k.size(); ++i) k.set(i, eta.eval(k.space().rep(i).det()).to_scalar(R));
  return k;
}

SteinbergPairing steinberg_pair(const SteinbergModel& st, const KModelVector& w,
                                const std::optional<KModelVector>& dual) {
  if (!(w.character() == st.induced)) throw DomainError("steinberg_pair: vector not in the induced model");
  KModelVector line = st.kernel_line(w.context(), w.ring(), w.level());
  KModelVector residue = w - w.value(0) * line;
  const double tol = w.ring().backend() == Backend::Numeric ? 1e-9 : 0.0;
  bool in_kernel = residue.is_zero(tol);
  Scalar pairing = dual ? k_pairing(w, *dual) : w.ring().zero();
  return {std::move(residue), in_kernel, std::move(pairing)};
}

Scalar k_pairing(const KModelVector& f, const KModelVector& w) {
  if (!f.ring().same_as(w.ring())) throw DomainError("k_pairing: different scalar rings");
  const int p = f.character().prime();
  const int d = f.character().delta2 + w.character().delta2;
  QuasiCharacter mu = f.character().mu * w.character().mu * QuasiCharacter::abs_half_power(p, d);
  QuasiCharacter mup = f.character().mu_prime * w.character().mu_prime * QuasiCharacter::abs_half_power(p, -d);
  if (!(mu == QuasiCharacter::abs_half_power(p, 2)) || !(mup == QuasiCharacter::abs_half_power(p, -2)))
    throw DomainError("k_pairing: the product of the two models is not the modulus character");
  int L = std::max(f.level(), w.level());
  KModelVector a = f.lift(L), b = w.lift(L);
  Scalar acc = f.ring().zero();
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.value(i) * b.value(i);
  return f.ring().rational(a.space().weight()) * acc;
}

}  // namespace trilin
