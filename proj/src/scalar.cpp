#include "trilin/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

namespace trilin {

const char* indet_name(Indet v) {
  switch (v) {
    case Indet::Alpha1: return "a1";
    case Indet::Beta1: return "b1";
    case Indet::Alpha2: return "a2";
    case Indet::Beta2: return "b2";
    case Indet::Alpha3: return "a3";
  }
  return "?";
}

int euler_phi(int n) {
  int r = n;
  for (int f = 2; f * f <= n; ++f) {
    if (n % f == 0) {
      while (n % f == 0) n /= f;
      r -= r / f;
    }
  }
  if (n > 1) r -= r / n;
  return r;
}

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

// ---------------------------------------------------------------------------

namespace {

using Poly = std::vector<long>;

Poly poly_divide_exact(Poly num, const Poly& den) {
  // Both monic-leading over Z; den's leading coefficient is 1.
  Poly q(num.size() - den.size() + 1, 0);
  for (int i = static_cast<int>(num.size()) - 1; i >= static_cast<int>(den.size()) - 1; --i) {
    long coef = num[i];
    int shift = i - static_cast<int>(den.size()) + 1;
    q[shift] = coef;
    for (std::size_t j = 0; j < den.size(); ++j) num[shift + j] -= coef * den[j];
  }
  return q;
}

Poly cyclotomic_poly(int n) {
  Poly num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) num = poly_divide_exact(num, cyclotomic_poly(d));
  return num;
}

}  // namespace

CyclotomicTable::CyclotomicTable(int M) : M_(M), phi_(euler_phi(M)) {
  if (M < 1) throw ArithmeticError("CyclotomicTable: order must be >= 1");
  phi_poly_ = cyclotomic_poly(M);
  powers_.assign(M, Poly(phi_, 0));
  Poly cur(phi_, 0);
  cur[0] = 1;
  for (int k = 0; k < M; ++k) {
    powers_[k] = cur;
    // cur *= z, reducing z^phi = -sum_{j<phi} Phi_j z^j.
    long top = cur[phi_ - 1];
    for (int j = phi_ - 1; j > 0; --j) cur[j] = cur[j - 1];
    cur[0] = 0;
    for (int j = 0; j < phi_; ++j) cur[j] -= top * phi_poly_[j];
  }
}

const std::vector<long>& CyclotomicTable::power(int k) const { return powers_[((k % M_) + M_) % M_]; }

bool Cyclo::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Rational& r) { return sgn(r) == 0; });
}

namespace {

Cyclo cyclo_add(const Cyclo& x, const Cyclo& y) {
  Cyclo r{x.c};
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += y.c[i];
  return r;
}

Cyclo cyclo_mul(const Cyclo& x, const Cyclo& y, const CyclotomicTable& tab) {
  const int phi = tab.degree();
  std::vector<Rational> raw(2 * phi - 1);
  for (int i = 0; i < phi; ++i) {
    if (sgn(x.c[i]) == 0) continue;
    for (int j = 0; j < phi; ++j)
      if (sgn(y.c[j]) != 0) raw[i + j] += x.c[i] * y.c[j];
  }
  Cyclo r{std::vector<Rational>(raw.begin(), raw.begin() + phi)};
  for (int k = phi; k < 2 * phi - 1; ++k) {
    if (sgn(raw[k]) == 0) continue;
    const auto& pw = tab.power(k);
    for (int j = 0; j < phi; ++j)
      if (pw[j] != 0) r.c[j] += raw[k] * pw[j];
  }
  return r;
}

Cyclo cyclo_scale(const Cyclo& x, const Rational& s) {
  Cyclo r{x.c};
  for (auto& v : r.c) v *= s;
  return r;
}

Cyclo cyclo_inverse(const Cyclo& x, const CyclotomicTable& tab) {
  const int phi = tab.degree();
  // Columns are x * z^j; solve for y with x*y = 1.
  std::vector<std::vector<Rational>> m(phi, std::vector<Rational>(phi + 1));
  Cyclo basis{std::vector<Rational>(phi)};
  for (int j = 0; j < phi; ++j) {
    std::fill(basis.c.begin(), basis.c.end(), Rational(0));
    basis.c[j] = 1;
    Cyclo col = cyclo_mul(x, basis, tab);
    for (int i = 0; i < phi; ++i) m[i][j] = col.c[i];
  }
  m[0][phi] = 1;
  for (int col = 0; col < phi; ++col) {
    int piv = -1;
    for (int r = col; r < phi; ++r)
      if (sgn(m[r][col]) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw ArithmeticError("cyclotomic inverse of zero");
    std::swap(m[piv], m[col]);
    Rational inv = 1 / m[col][col];
    for (auto& v : m[col]) v *= inv;
    for (int r = 0; r < phi; ++r) {
      if (r == col || sgn(m[r][col]) == 0) continue;
      Rational f = m[r][col];
      for (int k = col; k <= phi; ++k) m[r][k] -= f * m[col][k];
    }
  }
  Cyclo y{std::vector<Rational>(phi)};
  for (int i = 0; i < phi; ++i) y.c[i] = m[i][phi];
  return y;
}

Complex cyclo_value(const Cyclo& x, int M) {
  Complex r{};
  for (std::size_t k = 0; k < x.c.size(); ++k) {
    if (sgn(x.c[k]) == 0) continue;
    double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / M;
    r += x.c[k].get_d() * Complex(std::cos(ang), std::sin(ang));
  }
  return r;
}

std::string cyclo_str(const Cyclo& x) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < x.c.size(); ++k) {
    if (sgn(x.c[k]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << x.c[k].get_str();
    if (k == 1) os << "*z";
    if (k > 1) os << "*z^" << k;
  }
  return first ? "0" : os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

ScalarRing::ScalarRing(Backend b, int p, int M, const Assignment& a)
    : backend_(b), p_(p), table_(M), assignment_(a) {}

const ScalarRing& ScalarRing::exact(int p, int M) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<ScalarRing>> rings;
  std::lock_guard lock(mu);
  auto& slot = rings[{p, M}];
  if (!slot) {
    Assignment a;
    a.t = std::sqrt(static_cast<double>(p));
    slot = std::make_unique<ScalarRing>(Backend::Exact, p, M, a);
  }
  return *slot;
}

const ScalarRing& ScalarRing::numeric(int p, int M, const Assignment& a) {
  using Key = std::tuple<int, int, std::vector<double>>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<ScalarRing>> rings;
  std::vector<double> flat;
  for (const auto& v : a.values) {
    flat.push_back(v.real());
    flat.push_back(v.imag());
  }
  flat.push_back(a.t.real());
  std::lock_guard lock(mu);
  auto& slot = rings[Key{p, M, flat}];
  if (!slot) slot = std::make_unique<ScalarRing>(Backend::Numeric, p, M, a);
  return *slot;
}

Scalar ScalarRing::make_exact(std::vector<Scalar::Term> terms) const {
  Scalar s;
  s.ring_ = this;
  s.terms_ = std::move(terms);
  return s;
}

Scalar ScalarRing::make_numeric(Complex z) const {
  Scalar s;
  s.ring_ = this;
  s.num_ = z;
  return s;
}

Scalar ScalarRing::zero() const { return backend_ == Backend::Exact ? make_exact({}) : make_numeric(0.0); }

Scalar ScalarRing::rational(const Rational& q) const {
  if (backend_ == Backend::Numeric) return make_numeric(q.get_d());
  if (sgn(q) == 0) return zero();
  Cyclo c{std::vector<Rational>(table_.degree())};
  c.c[0] = q;
  return make_exact({{MonoKey{}, c}});
}

Scalar ScalarRing::integer(long n) const { return rational(Rational(n)); }

Scalar ScalarRing::zeta(int k) const {
  int M = table_.order();
  k = ((k % M) + M) % M;
  if (backend_ == Backend::Numeric) {
    double ang = 2.0 * std::numbers::pi * k / M;
    return make_numeric(Complex(std::cos(ang), std::sin(ang)));
  }
  Cyclo c{std::vector<Rational>(table_.degree())};
  const auto& pw = table_.power(k);
  for (int j = 0; j < table_.degree(); ++j) c.c[j] = pw[j];
  return make_exact({{MonoKey{}, c}});
}

Scalar ScalarRing::indet(Indet v, int k) const {
  if (backend_ == Backend::Numeric) return make_numeric(std::pow(assignment_.values[static_cast<int>(v)], k));
  MonoKey key;
  key.e[static_cast<int>(v)] = k;
  Cyclo c{std::vector<Rational>(table_.degree())};
  c.c[0] = 1;
  return make_exact({{key, c}});
}

Scalar ScalarRing::t(int k) const {
  if (backend_ == Backend::Numeric) return make_numeric(std::pow(assignment_.t, k));
  // t^k = p^{floor(k/2)} t^{k mod 2}
  int half = k >= 0 ? k / 2 : -((-k + 1) / 2);
  int bit = k - 2 * half;
  Rational coef = 1;
  Rational pp(p_);
  for (int i = 0; i < std::abs(half); ++i) coef = half > 0 ? Rational(coef * pp) : Rational(coef / pp);
  MonoKey key;
  key.t = bit;
  Cyclo c{std::vector<Rational>(table_.degree())};
  c.c[0] = coef;
  return make_exact({{key, c}});
}

Scalar ScalarRing::beta3() const {
  return (indet(Indet::Alpha1) * indet(Indet::Beta1) * indet(Indet::Alpha2) * indet(Indet::Beta2) *
          indet(Indet::Alpha3))
      .invert_monomial();
}

Scalar ScalarRing::from_complex(Complex z) const {
  if (backend_ != Backend::Numeric) throw UnsupportedError("from_complex on EXACT ring");
  return make_numeric(z);
}

Scalar ScalarRing::import(const Scalar& x) const {
  if (x.ring_ == this) return x;
  if (x.ring_ == nullptr) throw ArithmeticError("import of an uninitialized scalar");
  if (backend_ == Backend::Numeric && x.backend() == Backend::Exact) return make_numeric(x.eval(assignment_));
  throw UnsupportedError("cannot import a NUMERIC scalar into an EXACT ring");
}

// ---------------------------------------------------------------------------

Backend Scalar::backend() const {
  if (!ring_) throw ArithmeticError("uninitialized scalar");
  return ring_->backend();
}

namespace {

const ScalarRing& common_ring(const Scalar& x, const Scalar& y) {
  if (!x.ring() || !y.ring()) throw ArithmeticError("uninitialized scalar");
  if (x.ring() != y.ring()) throw ArithmeticError("scalars from different rings");
  return *x.ring();
}

}  // namespace

Scalar operator+(const Scalar& x, const Scalar& y) {
  const ScalarRing& R = common_ring(x, y);
  if (R.backend() == Backend::Numeric) return R.make_numeric(x.num_ + y.num_);
  std::vector<Scalar::Term> out;
  out.reserve(x.terms_.size() + y.terms_.size());
  auto i = x.terms_.begin(), j = y.terms_.begin();
  while (i != x.terms_.end() || j != y.terms_.end()) {
    if (j == y.terms_.end() || (i != x.terms_.end() && i->key < j->key)) {
      out.push_back(*i++);
    } else if (i == x.terms_.end() || j->key < i->key) {
      out.push_back(*j++);
    } else {
      Cyclo s = cyclo_add(i->coeff, j->coeff);
      if (!s.is_zero()) out.push_back({i->key, std::move(s)});
      ++i;
      ++j;
    }
  }
  return R.make_exact(std::move(out));
}

Scalar Scalar::operator-() const {
  if (backend() == Backend::Numeric) return ring_->make_numeric(-num_);
  std::vector<Term> out = terms_;
  for (auto& t : out) t.coeff = cyclo_scale(t.coeff, Rational(-1));
  return ring_->make_exact(std::move(out));
}

Scalar operator-(const Scalar& x, const Scalar& y) { return x + (-y); }

Scalar operator*(const Scalar& x, const Scalar& y) {
  const ScalarRing& R = common_ring(x, y);
  if (R.backend() == Backend::Numeric) return R.make_numeric(x.num_ * y.num_);
  if (x.terms_.empty() || y.terms_.empty()) return R.zero();
  std::vector<Scalar::Term> raw;
  raw.reserve(x.terms_.size() * y.terms_.size());
  Rational pp(R.prime());
  for (const auto& a : x.terms_) {
    for (const auto& b : y.terms_) {
      MonoKey k;
      for (int v = 0; v < kNumIndets; ++v) k.e[v] = a.key.e[v] + b.key.e[v];
      Cyclo c = cyclo_mul(a.coeff, b.coeff, R.table());
      k.t = a.key.t + b.key.t;
      if (k.t == 2) {
        k.t = 0;
        c = cyclo_scale(c, pp);
      }
      raw.push_back({k, std::move(c)});
    }
  }
  std::sort(raw.begin(), raw.end(), [](const Scalar::Term& u, const Scalar::Term& v) { return u.key < v.key; });
  std::vector<Scalar::Term> out;
  for (auto& t : raw) {
    if (!out.empty() && out.back().key == t.key)
      out.back().coeff = cyclo_add(out.back().coeff, t.coeff);
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const Scalar::Term& t) { return t.coeff.is_zero(); });
  return R.make_exact(std::move(out));
}

bool Scalar::is_monomial() const { return backend() == Backend::Exact && terms_.size() == 1; }

Scalar Scalar::invert_monomial() const {
  if (backend() == Backend::Numeric) {
    if (num_ == Complex(0.0)) throw ArithmeticError("inversion of zero");
    return ring_->make_numeric(1.0 / num_);
  }
  if (terms_.size() != 1) throw ArithmeticError("invert_monomial: not a single monomial: " + str());
  const Term& t = terms_.front();
  MonoKey k;
  for (int v = 0; v < kNumIndets; ++v) k.e[v] = -t.key.e[v];
  Cyclo c = cyclo_inverse(t.coeff, ring_->table());
  k.t = t.key.t;
  if (k.t == 1) c = cyclo_scale(c, Rational(1, ring_->prime()));  // t^{-1} = t / p
  return ring_->make_exact({{k, std::move(c)}});
}

Scalar Scalar::pow(int k) const {
  Scalar base = k < 0 ? invert_monomial() : *this;
  Scalar r = ring_->one();
  for (int i = 0; i < std::abs(k); ++i) r = r * base;
  return r;
}

bool Scalar::is_zero(double tol) const {
  if (backend() == Backend::Exact) return terms_.empty();
  if (!(tol > 0.0)) throw ArithmeticError("is_zero: NUMERIC mode needs a positive tolerance");
  return std::abs(num_) < tol;
}

bool Scalar::operator==(const Scalar& o) const {
  if (ring_ != o.ring_) return false;
  if (backend() == Backend::Numeric) return num_ == o.num_;
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].key == o.terms_[i].key) || !(terms_[i].coeff == o.terms_[i].coeff)) return false;
  return true;
}

Complex Scalar::eval(const Assignment& a) const {
  if (backend() == Backend::Numeric) return num_;
  Complex r{};
  for (const auto& t : terms_) {
    Complex m = cyclo_value(t.coeff, ring_->root_order());
    for (int v = 0; v < kNumIndets; ++v)
      if (t.key.e[v] != 0) m *= std::pow(a.values[v], t.key.e[v]);
    if (t.key.t) m *= a.t;
    r += m;
  }
  return r;
}

Complex Scalar::to_complex() const { return eval(ring_->assignment()); }

std::string Scalar::str() const {
  if (!ring_) return "<null>";
  if (backend() == Backend::Numeric) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", num_.real(), num_.imag());
    return buf;
  }
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << cyclo_str(t.coeff) << ")";
    for (int v = 0; v < kNumIndets; ++v) {
      if (t.key.e[v] == 0) continue;
      os << "*" << indet_name(static_cast<Indet>(v));
      if (t.key.e[v] != 1) os << "^" << t.key.e[v];
    }
    if (t.key.t) os << "*t";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void check_assignment(const Assignment& a, int p, double margin) {
  if (std::abs(a.t * a.t - static_cast<double>(p)) > 1e-9 * p)
    throw ArithmeticError("assignment violates t^2 = p");
  for (const auto& v : a.values)
    if (std::abs(v) == 0.0) throw ArithmeticError("assignment sends an indeterminate to 0");
  if (margin <= 0.0) return;
  Complex b3 = 1.0 / (a.values[0] * a.values[1] * a.values[2] * a.values[3] * a.values[4]);
  const double lq = std::log(static_cast<double>(p));
  auto ok = [&](Complex al, Complex be) {
    double lr = std::abs(std::log(std::abs(al / be)));
    return std::abs(lr - lq) > margin;
  };
  if (!ok(a.values[0], a.values[1]) || !ok(a.values[2], a.values[3]) || !ok(a.values[4], b3))
    throw ArithmeticError("assignment too close to a reducible principal series");
}

}  // namespace

Complex numeric_eval(const Scalar& a, const Assignment& assignment, double margin) {
  check_assignment(assignment, a.ring()->prime(), margin);
  return a.eval(assignment);
}

Scalar geometric_tail(const Scalar& ratio, const Scalar& first, double tol) {
  if (ratio.backend() == Backend::Exact || first.backend() == Backend::Exact)
    throw UnsupportedError("geometric_tail: rational functions are not part of the EXACT ring");
  Complex r = ratio.to_complex();
  if (std::abs(std::abs(r) - 1.0) < tol) throw ArithmeticError("geometric_tail: ratio on the unit circle");
  return ratio.ring()->from_complex(first.to_complex() / (1.0 - r));
}

Assignment random_assignment(int p, std::uint64_t seed, double spread, double margin) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> logmod(-spread, spread);
  std::uniform_real_distribution<double> arg(0.0, 2.0 * std::numbers::pi);
  for (;;) {
    Assignment a;
    a.t = std::sqrt(static_cast<double>(p));
    for (auto& v : a.values) v = std::polar(std::exp(logmod(gen)), arg(gen));
    try {
      check_assignment(a, p, margin);
      return a;
    } catch (const ArithmeticError&) {
    }
  }
}

}  // namespace trilin
