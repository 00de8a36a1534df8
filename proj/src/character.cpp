#include "trilin/character.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace trilin {

Rational frac_mod1(const Rational& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------

Monomial Monomial::indet(Indet v, int k) {
  Monomial m;
  m.e[static_cast<int>(v)] = k;
  return m;
}

Monomial Monomial::t_power(int k) {
  Monomial m;
  m.t = k;
  return m;
}

Monomial Monomial::root_of_unity(const Rational& frac) {
  Monomial m;
  m.zeta = frac_mod1(frac);
  return m;
}

Monomial Monomial::beta3(int k) {
  Monomial m;
  for (auto& x : m.e) x = -k;
  return m;
}

Monomial operator*(const Monomial& x, const Monomial& y) {
  Monomial r;
  for (int i = 0; i < kNumIndets; ++i) r.e[i] = x.e[i] + y.e[i];
  r.t = x.t + y.t;
  r.zeta = frac_mod1(x.zeta + y.zeta);
  return r;
}

Monomial Monomial::inverse() const { return pow(-1); }

Monomial Monomial::pow(int k) const {
  Monomial r;
  for (int i = 0; i < kNumIndets; ++i) r.e[i] = e[i] * k;
  r.t = t * k;
  r.zeta = frac_mod1(zeta * k);
  return r;
}

bool Monomial::is_one() const { return *this == Monomial{}; }

bool Monomial::operator==(const Monomial& o) const { return e == o.e && t == o.t && zeta == o.zeta; }

long Monomial::root_order() const { return zeta.get_den().get_si(); }

Scalar Monomial::to_scalar(const ScalarRing& R) const {
  Rational k = zeta * R.root_order();
  if (k.get_den() != 1)
    throw ArithmeticError("root of unity of order " + std::to_string(root_order()) + " not in Q(zeta_" +
                          std::to_string(R.root_order()) + ")");
  Scalar s = R.zeta(static_cast<int>(k.get_num().get_si())) * R.t(t);
  for (int i = 0; i < kNumIndets; ++i)
    if (e[i] != 0) s = s * R.indet(static_cast<Indet>(i), e[i]);
  return s;
}

std::string Monomial::str() const {
  std::ostringstream os;
  bool any = false;
  auto sep = [&] {
    if (any) os << "*";
    any = true;
  };
  if (zeta != 0) {
    sep();
    os << "e(" << zeta.get_str() << ")";
  }
  for (int i = 0; i < kNumIndets; ++i) {
    if (e[i] == 0) continue;
    sep();
    os << indet_name(static_cast<Indet>(i));
    if (e[i] != 1) os << "^" << e[i];
  }
  if (t != 0) {
    sep();
    os << "t";
    if (t != 1) os << "^" << t;
  }
  return any ? os.str() : "1";
}

// ---------------------------------------------------------------------------

std::int64_t primitive_root(int p) {
  if (p == 2 || !is_prime(p)) throw DomainError("primitive_root: odd prime expected");
  const std::int64_t mod = static_cast<std::int64_t>(p) * p;
  const std::int64_t order = static_cast<std::int64_t>(p) * (p - 1);
  for (std::int64_t g = 2; g < mod; ++g) {
    if (g % p == 0) continue;
    bool ok = true;
    for (std::int64_t f = 2; f <= order && ok; ++f) {
      if (order % f != 0 || !is_prime(static_cast<int>(f))) continue;
      std::int64_t x = 1;
      for (std::int64_t i = 0; i < order / f; ++i) x = x * g % mod;
      if (x == 1) ok = false;
    }
    if (ok) return g;
  }
  throw DomainError("no primitive root found");
}

UnitGroup::UnitGroup(int p, int level) : UnitGroup(p, level, true) {}

UnitGroup::UnitGroup(int p, int level, bool build) : p_(p), level_(level) {
  if (!is_prime(p) || level < 0) throw DomainError("UnitGroup: bad parameters");
  mod_ = ipow(p, level);
  if (p == 2) {
    gens_ = {-1, 5};
    orders_ = {level >= 2 ? 2 : 1, level >= 3 ? ipow(2, level - 2) : 1};
  } else {
    gens_ = {primitive_root(p)};
    orders_ = {level >= 1 ? ipow(p, level - 1) * (p - 1) : 1};
  }
  if (build) build_table();
}

void UnitGroup::build_table() {
  table_.assign(static_cast<std::size_t>(mod_), -1);
  if (mod_ == 1) {
    table_[0] = 0;
    return;
  }
  const std::int64_t g = p_ == 2 ? 5 : gens_[0];
  const std::int64_t ord = p_ == 2 ? orders_[1] : orders_[0];
  std::int64_t x = 1;
  for (std::int64_t k = 0; k < ord; ++k) {
    table_[x] = static_cast<std::int32_t>(k);
    if (p_ == 2) table_[reduce(-x, mod_)] = static_cast<std::int32_t>(k);
    x = x * g % mod_;
  }
}

std::vector<std::int64_t> UnitGroup::log(std::int64_t u) const {
  u = reduce(u, mod_);
  std::int32_t l = table_[static_cast<std::size_t>(u)];
  if (l < 0) throw DomainError("discrete log of a non-unit");
  if (p_ != 2) return {l};
  std::int64_t sign = (level_ >= 2 && u % 4 == 3) ? 1 : 0;
  return {sign, l};
}

UnitGroup UnitGroup::from_table(int p, int level, std::vector<std::int32_t> table) {
  UnitGroup g(p, level, false);
  if (static_cast<std::int64_t>(table.size()) != g.mod_) throw DomainError("unit group table has the wrong size");
  const std::int64_t ord = p == 2 ? g.orders_[1] : g.orders_[0];
  for (std::int64_t u = 0; u < g.mod_; ++u) {
    const std::int32_t l = table[static_cast<std::size_t>(u)];
    const bool unit = g.mod_ == 1 || u % p != 0;
    if (unit != (l >= 0) || l >= ord) throw DomainError("unit group table is inconsistent");
  }
  // The generator chain g^k -> k for every k.
  const std::int64_t gen = p == 2 ? 5 : g.gens_[0];
  std::int64_t x = 1 % g.mod_;
  for (std::int64_t k = 0; k < ord; ++k) {
    if (table[static_cast<std::size_t>(x)] != k) throw DomainError("unit group table does not match");
    x = x * gen % g.mod_;
  }
  g.table_ = std::move(table);
  return g;
}

namespace {
std::mutex g_units_mu;
std::map<std::pair<int, int>, std::unique_ptr<UnitGroup>>& units_cache() {
  static std::map<std::pair<int, int>, std::unique_ptr<UnitGroup>> cache;
  return cache;
}
}  // namespace

const UnitGroup& unit_group(int p, int level) {
  std::lock_guard lock(g_units_mu);
  auto& slot = units_cache()[{p, level}];
  if (!slot) slot = std::make_unique<UnitGroup>(p, level);
  return *slot;
}

void install_unit_group(UnitGroup g) {
  std::lock_guard lock(g_units_mu);
  auto& slot = units_cache()[{g.prime(), g.level()}];
  if (!slot) slot = std::make_unique<UnitGroup>(std::move(g));
}

// ---------------------------------------------------------------------------

namespace {

bool is_integer(const Rational& q) { return q.get_den() == 1; }

int compute_conductor(int p, const std::vector<Rational>& images) {
  bool trivial = true;
  for (const auto& f : images) trivial = trivial && sgn(f) == 0;
  if (trivial) return 0;
  if (p == 2) {
    // 1 + 2^c Z_2 is topologically generated by 5^{2^{c-2}} for c >= 2.
    for (int c = 2;; ++c)
      if (is_integer(images[1] * Rational(ipow(2, c - 2)))) return c;
  }
  // The character factors through (Z/p^c)^x iff f * phi(p^c) is integral.
  for (int c = 1;; ++c)
    if (is_integer(images[0] * Rational(ipow(p, c - 1) * (p - 1)))) return c;
}

}  // namespace

FiniteCharacter::FiniteCharacter(int p, std::vector<Rational> images) : p_(p), images_(std::move(images)) {
  if (!is_prime(p)) throw DomainError("FiniteCharacter: p must be prime");
  const std::size_t want = p == 2 ? 2 : 1;
  if (images_.size() != want) throw DomainError("FiniteCharacter: wrong number of generator images");
  for (auto& f : images_) f = frac_mod1(f);
  if (p == 2 && sgn(images_[0]) != 0 && images_[0] != Rational(1, 2))
    throw DomainError("FiniteCharacter: the image of -1 must have order dividing 2");
  for (const auto& f : images_) {
    // Denominators must divide (p - 1) p^k, the possible orders of characters
    // of Z_p^x (for p = 2, powers of 2).
    mpz_class den = f.get_den();
    if (p != 2) {
      mpz_class g;
      mpz_gcd_ui(g.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(p - 1));
      den /= g;
    }
    while (den % p == 0) den /= p;
    if (den != 1) throw DomainError("FiniteCharacter: image order is not a possible character order");
  }
  conductor_ = compute_conductor(p_, images_);
}

FiniteCharacter FiniteCharacter::trivial(int p) {
  return FiniteCharacter(p, std::vector<Rational>(p == 2 ? 2 : 1, Rational(0)));
}

long FiniteCharacter::order() const {
  long o = 1;
  for (const auto& f : images_) o = std::lcm(o, f.get_den().get_si());
  return o;
}

Rational FiniteCharacter::eval_residue(std::int64_t u) const {
  if (conductor_ == 0) return 0;
  const UnitGroup& G = unit_group(p_, conductor_);
  auto logs = G.log(u);
  Rational r = 0;
  for (std::size_t i = 0; i < images_.size(); ++i) r += images_[i] * Rational(logs[i]);
  return frac_mod1(r);
}

Rational FiniteCharacter::eval(const ValuedElement& unit) const {
  if (!unit.is_unit()) throw DomainError("finite character evaluated at a non-unit");
  if (conductor_ == 0) return 0;
  return eval_residue(unit.unit_residue(conductor_));
}

FiniteCharacter operator*(const FiniteCharacter& x, const FiniteCharacter& y) {
  if (x.p_ != y.p_) throw DomainError("characters over different primes");
  std::vector<Rational> im(x.images_.size());
  for (std::size_t i = 0; i < im.size(); ++i) im[i] = x.images_[i] + y.images_[i];
  return FiniteCharacter(x.p_, std::move(im));
}

FiniteCharacter FiniteCharacter::inverse() const {
  std::vector<Rational> im(images_.size());
  for (std::size_t i = 0; i < im.size(); ++i) im[i] = -images_[i];
  return FiniteCharacter(p_, std::move(im));
}

std::string FiniteCharacter::str() const {
  std::ostringstream os;
  os << "fin[p=" << p_ << ", cond=" << conductor_ << ", images=";
  for (std::size_t i = 0; i < images_.size(); ++i) os << (i ? "," : "") << images_[i].get_str();
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------

QuasiCharacter QuasiCharacter::mu(int i, FiniteCharacter fin) {
  static constexpr Indet alphas[] = {Indet::Alpha1, Indet::Alpha2, Indet::Alpha3};
  if (i < 1 || i > 3) throw DomainError("mu index must be 1, 2 or 3");
  return {std::move(fin), Monomial::indet(alphas[i - 1], -1) * Monomial::t_power(1)};
}

QuasiCharacter QuasiCharacter::mu_prime(int i, FiniteCharacter fin) {
  if (i < 1 || i > 3) throw DomainError("mu' index must be 1, 2 or 3");
  Monomial beta_inv = i == 1   ? Monomial::indet(Indet::Beta1, -1)
                      : i == 2 ? Monomial::indet(Indet::Beta2, -1)
                               : Monomial::beta3(-1);
  return {std::move(fin), beta_inv * Monomial::t_power(-1)};
}

QuasiCharacter QuasiCharacter::abs_half_power(int p, int k) {
  // |pi|^{k/2} = q^{-k/2} = t^{-k}
  return {FiniteCharacter::trivial(p), Monomial::t_power(-k)};
}

QuasiCharacter QuasiCharacter::trivial(int p) { return {FiniteCharacter::trivial(p), Monomial::one()}; }

Monomial QuasiCharacter::eval(const ValuedElement& x) const {
  if (x.is_bottom()) throw PrecisionError("character evaluated at BOTTOM");
  int v = x.valuation();
  Monomial r = at_pi_.pow(v);
  if (fin_.conductor() > 0) r = r * Monomial::root_of_unity(fin_.eval_residue(x.unit_residue(fin_.conductor())));
  return r;
}

bool QuasiCharacter::in_O_mu(const ValuedElement& x) const { return ramified() ? x.is_unit() : x.is_integral(); }

QuasiCharacter operator*(const QuasiCharacter& x, const QuasiCharacter& y) {
  return {x.fin_ * y.fin_, x.at_pi_ * y.at_pi_};
}

QuasiCharacter QuasiCharacter::inverse() const { return {fin_.inverse(), at_pi_.inverse()}; }

std::string QuasiCharacter::str() const { return "{" + fin_.str() + ", pi->" + at_pi_.str() + "}"; }

Monomial char_eval(const QuasiCharacter& chi, const ValuedElement& x) { return chi.eval(x); }
QuasiCharacter char_mul(const QuasiCharacter& x, const QuasiCharacter& y) { return x * y; }
QuasiCharacter char_inv(const QuasiCharacter& x) { return x.inverse(); }
int conductor(const QuasiCharacter& x) { return x.conductor(); }

// ---------------------------------------------------------------------------

Monomial BorelCharacter::eval(const Mat2& b) const {
  if (!b.is_upper_triangular()) throw DomainError("borel_eval: matrix is not upper triangular");
  if (b.a.is_bottom() || b.d.is_bottom()) throw DomainError("borel_eval: BOTTOM diagonal entry");
  int dv = b.a.valuation() - b.d.valuation();
  return mu.eval(b.a) * mu_prime.eval(b.d) * Monomial::t_power(-delta2 * dv);
}

std::string BorelCharacter::str() const {
  return "chi(mu=" + mu.str() + ", mu'=" + mu_prime.str() + ", delta^" + std::to_string(delta2) + "/2)";
}

Monomial borel_eval(const BorelCharacter& chi, const Mat2& b) { return chi.eval(b); }

CentralCheck central_check(const QuasiCharacter& w1, const QuasiCharacter& w2, const QuasiCharacter& w3) {
  CentralCheck r;
  QuasiCharacter w = w1 * w2 * w3;
  r.at_pi = w.at_pi();
  const UnitGroup& G = unit_group(w.prime(), std::max(w.conductor(), 1));
  for (std::size_t i = 0; i < w.finite().images().size(); ++i) {
    if (sgn(w.finite().images()[i]) != 0) {
      r.ok = false;
      r.unit_witness = reduce(G.generators()[i], ipow(w.prime(), std::max(w.conductor(), 1)));
      r.message = "omega1*omega2*omega3 is nontrivial on the unit " + std::to_string(*r.unit_witness);
      return r;
    }
  }
  if (!r.at_pi.is_one()) {
    r.ok = false;
    r.message = "omega1*omega2*omega3(pi) = " + r.at_pi.str();
  }
  return r;
}

CentralCheck central_check(const BorelCharacter& c1, const BorelCharacter& c2, const BorelCharacter& c3) {
  return central_check(c1.omega(), c2.omega(), c3.omega());
}

long root_order_for(const std::vector<QuasiCharacter>& chars) {
  long M = 1;
  for (const auto& c : chars) {
    M = std::lcm(M, c.finite().order());
    M = std::lcm(M, c.at_pi().root_order());
  }
  return M;
}

}  // namespace trilin
