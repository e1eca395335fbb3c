#include "kronsheaf/field.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <sstream>

#include "kronsheaf/errors.hpp"

namespace ks {

namespace {

using Poly = std::vector<uint32_t>;  // low degree first, over F_p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

uint32_t inv_mod(uint32_t a, uint32_t p) {
  // p is prime, a != 0
  uint64_t result = 1, base = a % p, k = p - 2;
  while (k) {
    if (k & 1) result = result * base % p;
    base = base * base % p;
    k >>= 1;
  }
  return static_cast<uint32_t>(result);
}

Poly poly_mod(Poly a, const Poly& m, uint32_t p) {
  trim(a);
  Poly mm = m;
  trim(mm);
  const size_t dm = mm.size() - 1;
  const uint32_t lead_inv = inv_mod(mm.back(), p);
  while (a.size() > dm) {
    uint64_t c = uint64_t{a.back()} * lead_inv % p;
    size_t shift = a.size() - 1 - dm;
    for (size_t i = 0; i <= dm; ++i) {
      uint64_t t = c * mm[i] % p;
      a[shift + i] = static_cast<uint32_t>((a[shift + i] + p - t) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<uint32_t>((c[i + j] + uint64_t{a[i]} * b[j]) % p);
  return poly_mod(std::move(c), m, p);
}

Poly poly_gcd(Poly a, Poly b, uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) mod m
Poly frobenius_power(const Poly& m, uint32_t p, uint32_t k) {
  Poly x = poly_mod(Poly{0, 1}, m, p);
  for (uint32_t step = 0; step < k; ++step) {
    Poly result{1}, base = x;
    uint64_t e = p;
    while (e) {
      if (e & 1) result = poly_mulmod(result, base, m, p);
      base = poly_mulmod(base, base, m, p);
      e >>= 1;
    }
    x = result;
  }
  return x;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> out;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Conway polynomials for the small fields used most often.
const std::map<std::pair<uint32_t, uint32_t>, Poly>& conway_table() {
  static const std::map<std::pair<uint32_t, uint32_t>, Poly> table = {
      {{2, 2}, {1, 1, 1}},       {{2, 3}, {1, 1, 0, 1}},    {{2, 4}, {1, 1, 0, 0, 1}},
      {{3, 2}, {2, 2, 1}},       {{3, 3}, {1, 2, 0, 1}},    {{3, 4}, {2, 0, 0, 2, 1}},
      {{5, 2}, {2, 4, 1}},       {{5, 3}, {3, 3, 0, 1}},    {{5, 4}, {2, 4, 4, 0, 1}},
      {{7, 2}, {3, 6, 1}},       {{7, 3}, {4, 0, 6, 1}},    {{7, 4}, {3, 4, 5, 0, 1}},
  };
  return table;
}

uint64_t checked_power(uint64_t p, uint32_t e) {
  uint64_t q = 1;
  for (uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q > Field::kMaxOrder) throw InvalidField("field order exceeds supported size");
  }
  return q;
}

bool element_is_primitive(const Poly& g, const Poly& m, uint32_t p, uint64_t q) {
  for (uint64_t l : prime_factors(q - 1)) {
    uint64_t k = (q - 1) / l;
    Poly result{1}, base = g;
    while (k) {
      if (k & 1) result = poly_mulmod(result, base, m, p);
      base = poly_mulmod(base, base, m, p);
      k >>= 1;
    }
    trim(result);
    if (result.size() == 1 && result[0] == 1) return false;
  }
  return true;
}

Poly default_min_poly(uint32_t p, uint32_t e) {
  auto it = conway_table().find({p, e});
  if (it != conway_table().end()) return it->second;
  const uint64_t q = checked_power(p, e);
  // First primitive monic polynomial, constant term varying fastest.
  for (uint64_t code = 0; code < q; ++code) {
    Poly f(e + 1, 0);
    uint64_t c = code;
    for (uint32_t i = 0; i < e; ++i) {
      f[i] = static_cast<uint32_t>(c % p);
      c /= p;
    }
    f[e] = 1;
    if (f[0] == 0 || !is_irreducible(p, f)) continue;
    if (element_is_primitive(Poly{0, 1}, f, p, q)) return f;
  }
  throw InvalidField("no primitive polynomial found");
}

std::string trim_ws(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

mpq_class parse_rational(std::string_view text) {
  std::string s = trim_ws(text);
  if (s.empty()) throw ParseError("empty scalar");
  for (char ch : s)
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '/'))
      throw ParseError("malformed scalar '" + s + "'");
  if (s[0] == '+') s = s.substr(1);
  mpq_class v;
  if (v.set_str(s, 10) != 0) throw ParseError("malformed scalar '" + s + "'");
  if (v.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  v.canonicalize();
  return v;
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_irreducible(uint32_t p, const std::vector<uint32_t>& poly) {
  Poly f = poly;
  trim(f);
  if (f.size() < 2) return false;
  const uint32_t e = static_cast<uint32_t>(f.size() - 1);
  // Rabin: x^(p^e) = x mod f and gcd(x^(p^(e/l)) - x, f) = 1 for primes l | e.
  Poly xe = frobenius_power(f, p, e);
  Poly x = poly_mod(Poly{0, 1}, f, p);
  trim(xe);
  if (xe != x) return false;
  for (uint64_t l : prime_factors(e)) {
    Poly h = frobenius_power(f, p, static_cast<uint32_t>(e / l));
    h.resize(std::max<size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    Poly g = poly_gcd(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

FieldSpec FieldSpec::rationals() { return FieldSpec{}; }

FieldSpec FieldSpec::prime(uint32_t p) {
  FieldSpec s;
  s.kind = FieldKind::Prime;
  s.p = p;
  s.e = 1;
  return s;
}

FieldSpec FieldSpec::extension(uint32_t p, uint32_t e, std::vector<uint32_t> min_poly) {
  if (e == 0) throw InvalidField("extension degree must be positive");
  if (!is_prime(p)) throw InvalidField("characteristic " + std::to_string(p) + " is not prime");
  if (e == 1 && min_poly.empty()) return prime(p);
  FieldSpec s;
  s.kind = FieldKind::Extension;
  s.p = p;
  s.e = e;
  s.min_poly = min_poly.empty() ? default_min_poly(p, e) : std::move(min_poly);
  return s;
}

FieldSpec FieldSpec::parse(std::string_view text) {
  std::string s = trim_ws(text);
  auto num = [&](const std::string& part) -> uint32_t {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("malformed field '" + s + "'");
    unsigned long v = std::stoul(part);
    if (v > 0x7fffffffUL) throw ParseError("field parameter too large in '" + s + "'");
    return static_cast<uint32_t>(v);
  };
  if (s == "Q" || s == "QQ") return rationals();
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 2 && parts[0] == "Fp") {
      uint32_t p = num(parts[1]);
      if (!is_prime(p)) throw InvalidField("characteristic is not prime");
      return prime(p);
    }
    if (parts.size() == 3 && parts[0] == "Fq") return extension(num(parts[1]), num(parts[2]));
    if (parts.size() == 1 && s.size() > 1 && s[0] == 'F') {
      uint32_t p = num(s.substr(1));
      if (!is_prime(p)) throw InvalidField("characteristic is not prime");
      return prime(p);
    }
  } catch (const InvalidField& ex) {
    throw ParseError(std::string("invalid field '") + s + "': " + ex.what());
  }
  throw ParseError("malformed field '" + s + "'");
}

std::string FieldSpec::name() const {
  switch (kind) {
    case FieldKind::Rational: return "Q";
    case FieldKind::Prime: return "Fp:" + std::to_string(p);
    case FieldKind::Extension: return "Fq:" + std::to_string(p) + ":" + std::to_string(e);
  }
  return "?";
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  if (spec_.kind == FieldKind::Rational) return;
  if (!is_prime(spec_.p)) throw InvalidField("characteristic " + std::to_string(spec_.p) + " is not prime");
  if (spec_.kind == FieldKind::Prime) {
    if (spec_.e != 1 || !spec_.min_poly.empty()) throw InvalidField("prime field with extension data");
    q_ = spec_.p;
    return;
  }
  const uint32_t p = spec_.p, e = spec_.e;
  if (spec_.min_poly.size() != e + 1 || spec_.min_poly.back() != 1)
    throw InvalidField("min_poly must be monic of degree " + std::to_string(e));
  for (uint32_t c : spec_.min_poly)
    if (c >= p) throw InvalidField("min_poly coefficient out of range");
  if (!is_irreducible(p, spec_.min_poly)) throw InvalidField("min_poly is not irreducible over F_" + std::to_string(p));
  q_ = checked_power(p, e);
  pow_p_.resize(e);
  uint32_t pp = 1;
  for (uint32_t i = 0; i < e; ++i) {
    pow_p_[i] = pp;
    pp *= p;
  }
  // Find a generator of the multiplicative group and build log tables.
  const Poly& m = spec_.min_poly;
  uint32_t gen = 0;
  for (uint32_t cand = p; cand < q_; ++cand) {
    Poly g(e, 0);
    for (uint32_t i = 0; i < e; ++i) g[i] = (cand / pow_p_[i]) % p;
    trim(g);
    if (element_is_primitive(g, m, p, q_)) {
      gen = cand;
      break;
    }
  }
  if (gen == 0) throw InvalidField("no generator found");
  exp_.resize(q_ - 1);
  log_.assign(q_, 0);
  uint32_t x = 1;
  for (uint64_t i = 0; i + 1 < q_; ++i) {
    exp_[i] = x;
    log_[x] = static_cast<uint32_t>(i);
    x = poly_mul(x, gen);
  }
}

FieldPtr Field::make(const FieldSpec& spec) {
  static std::mutex mu;
  static std::map<std::string, FieldPtr> cache;
  std::string key = spec.name();
  for (uint32_t c : spec.min_poly) key += "," + std::to_string(c);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  FieldPtr f(new Field(spec));
  cache.emplace(key, f);
  return f;
}

uint32_t Field::digit(uint32_t a, uint32_t i) const {
  if (spec_.e == 1) return i == 0 ? a : 0;
  return (a / pow_p_[i]) % spec_.p;
}

uint32_t Field::add_slow(uint32_t a, uint32_t b) const {
  uint32_t r = 0;
  const uint32_t p = spec_.p;
  for (uint32_t i = 0; i < spec_.e; ++i) {
    uint32_t da = a % p, db = b % p;
    a /= p;
    b /= p;
    uint32_t s = da + db;
    if (s >= p) s -= p;
    r += s * pow_p_[i];
  }
  return r;
}

uint32_t Field::neg_slow(uint32_t a) const {
  uint32_t r = 0;
  const uint32_t p = spec_.p;
  for (uint32_t i = 0; i < spec_.e; ++i) {
    uint32_t d = a % p;
    a /= p;
    r += (d == 0 ? 0 : p - d) * pow_p_[i];
  }
  return r;
}

uint32_t Field::poly_mul(uint32_t a, uint32_t b) const {
  const uint32_t p = spec_.p, e = spec_.e;
  Poly pa(e), pb(e);
  for (uint32_t i = 0; i < e; ++i) {
    pa[i] = (a / pow_p_[i]) % p;
    pb[i] = (b / pow_p_[i]) % p;
  }
  trim(pa);
  trim(pb);
  Poly c = poly_mulmod(pa, pb, spec_.min_poly, p);
  uint32_t r = 0;
  for (size_t i = 0; i < c.size(); ++i) r += c[i] * pow_p_[i];
  return r;
}

uint32_t Field::inv(uint32_t a) const {
  if (a == 0) throw std::domain_error("division by zero in finite field");
  if (spec_.e == 1) return inv_mod(a, spec_.p);
  uint32_t l = log_[a];
  return exp_[l == 0 ? 0 : (q_ - 1) - l];
}

uint32_t Field::from_int(long long v) const {
  long long p = spec_.p;
  long long r = v % p;
  if (r < 0) r += p;
  return static_cast<uint32_t>(r);
}

uint32_t Field::from_rational(const mpq_class& v) const {
  mpz_class p = spec_.p;
  mpz_class num = v.get_num() % p, den = v.get_den() % p;
  if (num < 0) num += p;
  if (den < 0) den += p;
  if (den == 0) throw std::domain_error("denominator divisible by the characteristic");
  uint32_t n = static_cast<uint32_t>(num.get_ui()), d = static_cast<uint32_t>(den.get_ui());
  return static_cast<uint32_t>(uint64_t{n} * inv_mod(d, spec_.p) % spec_.p);
}

uint32_t Field::pow(uint32_t a, uint64_t k) const {
  uint32_t result = 1, base = a;
  while (k) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

uint32_t Field::frobenius(uint32_t a) const { return pow(a, spec_.p); }

bool same_field(const FieldPtr& a, const FieldPtr& b) { return a == b || (a && b && a->spec() == b->spec()); }

Scalar Scalar::from_int(FieldPtr f, long long v) {
  Scalar s(std::move(f));
  if (s.f_->is_rational())
    s.q_ = static_cast<long>(v);
  else
    s.v_ = s.f_->from_int(v);
  return s;
}

Scalar Scalar::from_raw(FieldPtr f, uint32_t v) {
  Scalar s(std::move(f));
  s.v_ = v;
  return s;
}

Scalar Scalar::from_rational(FieldPtr f, const mpq_class& v) {
  Scalar s(std::move(f));
  if (s.f_->is_rational()) {
    s.q_ = v;
    s.q_.canonicalize();
  } else {
    s.v_ = s.f_->from_rational(v);
  }
  return s;
}

Scalar Scalar::parse(FieldPtr f, std::string_view text) {
  std::string t = trim_ws(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') throw ParseError("malformed extension scalar '" + t + "'");
    if (f->is_rational()) throw ParseError("coefficient vector given for the rationals");
    std::vector<uint32_t> coeffs;
    std::stringstream ss(t.substr(1, t.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (trim_ws(item).empty()) continue;
      coeffs.push_back(f->from_rational(parse_rational(item)));
    }
    if (coeffs.size() > f->degree()) throw ParseError("too many coefficients in '" + t + "'");
    uint32_t v = 0, pw = 1;
    for (uint32_t c : coeffs) {
      v += c * pw;
      pw *= f->characteristic();
    }
    return from_raw(std::move(f), v);
  }
  mpq_class q = parse_rational(t);
  try {
    return from_rational(std::move(f), q);
  } catch (const std::domain_error&) {
    throw ParseError("scalar '" + t + "' has a denominator divisible by the characteristic");
  }
}

bool Scalar::is_zero() const { return f_->is_rational() ? q_ == 0 : v_ == 0; }
bool Scalar::is_one() const { return f_->is_rational() ? q_ == 1 : v_ == 1; }

std::string Scalar::str() const {
  if (f_->is_rational()) return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  if (f_->degree() == 1) return std::to_string(v_);
  std::string s = "[";
  for (uint32_t i = 0; i < f_->degree(); ++i) {
    if (i) s += ",";
    s += std::to_string(f_->digit(v_, i));
  }
  return s + "]";
}

void Scalar::check_same(const Scalar& o) const {
  if (!same_field(f_, o.f_)) throw FieldMismatch("scalars from different fields");
}

Scalar Scalar::operator+(const Scalar& o) const {
  check_same(o);
  Scalar r(f_);
  if (f_->is_rational())
    r.q_ = q_ + o.q_;
  else
    r.v_ = f_->add(v_, o.v_);
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  check_same(o);
  Scalar r(f_);
  if (f_->is_rational())
    r.q_ = q_ - o.q_;
  else
    r.v_ = f_->sub(v_, o.v_);
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  check_same(o);
  Scalar r(f_);
  if (f_->is_rational())
    r.q_ = q_ * o.q_;
  else
    r.v_ = f_->mul(v_, o.v_);
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

Scalar Scalar::operator-() const {
  Scalar r(f_);
  if (f_->is_rational())
    r.q_ = -q_;
  else
    r.v_ = f_->neg(v_);
  return r;
}

Scalar Scalar::inv() const {
  if (is_zero()) throw std::domain_error("division by zero");
  Scalar r(f_);
  if (f_->is_rational())
    r.q_ = 1 / q_;
  else
    r.v_ = f_->inv(v_);
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  if (!same_field(f_, o.f_)) return false;
  return f_->is_rational() ? q_ == o.q_ : v_ == o.v_;
}

}  // namespace ks
