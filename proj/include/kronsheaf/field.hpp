#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ks {

enum class FieldKind { Rational, Prime, Extension };

// Value description of a field.  Extension fields are F_p[t]/(min_poly) with
// min_poly monic, coefficients stored low degree first.
struct FieldSpec {
  FieldKind kind = FieldKind::Rational;
  uint32_t p = 0;
  uint32_t e = 1;
  std::vector<uint32_t> min_poly;

  static FieldSpec rationals();
  static FieldSpec prime(uint32_t p);
  // An empty min_poly selects the default (Conway table for small cases,
  // otherwise the first primitive polynomial in lexicographic order).
  static FieldSpec extension(uint32_t p, uint32_t e, std::vector<uint32_t> min_poly = {});
  // Accepts "Q", "Fp:<p>", "Fq:<p>:<e>" and the short form "F<p>".
  static FieldSpec parse(std::string_view text);

  std::string name() const;
  bool operator==(const FieldSpec& o) const {
    return kind == o.kind && p == o.p && e == o.e && min_poly == o.min_poly;
  }
  bool operator!=(const FieldSpec& o) const { return !(*this == o); }
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// Runtime field with precomputed tables.  Finite field elements are encoded
// as integers in [0, q) whose base-p digits are the polynomial coefficients.
class Field {
 public:
  static constexpr uint64_t kMaxOrder = uint64_t{1} << 21;

  // Validates the FieldSpec and returns a shared instance (equal FieldSpecs share).
  static FieldPtr make(const FieldSpec& spec);
  static FieldPtr rationals() { return make(FieldSpec::rationals()); }
  static FieldPtr prime(uint32_t p) { return make(FieldSpec::prime(p)); }

  const FieldSpec& spec() const { return spec_; }
  bool is_rational() const { return spec_.kind == FieldKind::Rational; }
  bool is_finite() const { return !is_rational(); }
  uint32_t characteristic() const { return spec_.p; }
  uint32_t degree() const { return spec_.e; }
  uint64_t order() const { return q_; }

  uint32_t add(uint32_t a, uint32_t b) const {
    if (spec_.e == 1) {
      uint32_t s = a + b;
      return s >= spec_.p ? s - spec_.p : s;
    }
    return add_slow(a, b);
  }
  uint32_t neg(uint32_t a) const {
    if (spec_.e == 1) return a == 0 ? 0 : spec_.p - a;
    return neg_slow(a);
  }
  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
  uint32_t mul(uint32_t a, uint32_t b) const {
    if (spec_.e == 1) return static_cast<uint32_t>(uint64_t{a} * b % spec_.p);
    if (a == 0 || b == 0) return 0;
    uint32_t s = log_[a] + log_[b];
    if (s >= q_ - 1) s -= static_cast<uint32_t>(q_ - 1);
    return exp_[s];
  }
  uint32_t inv(uint32_t a) const;
  uint32_t from_int(long long v) const;
  uint32_t from_rational(const mpq_class& v) const;
  uint32_t frobenius(uint32_t a) const;
  uint32_t pow(uint32_t a, uint64_t k) const;
  // Coefficient of t^i in the encoded element.
  uint32_t digit(uint32_t a, uint32_t i) const;
  bool in_prime_subfield(uint32_t a) const { return a < spec_.p; }

 private:
  explicit Field(FieldSpec spec);
  uint32_t add_slow(uint32_t a, uint32_t b) const;
  uint32_t neg_slow(uint32_t a) const;
  uint32_t poly_mul(uint32_t a, uint32_t b) const;

  FieldSpec spec_;
  uint64_t q_ = 0;
  std::vector<uint32_t> pow_p_;
  std::vector<uint32_t> exp_;
  std::vector<uint32_t> log_;
};

// Monic irreducibility test over F_p (coefficients low degree first).
bool is_irreducible(uint32_t p, const std::vector<uint32_t>& poly);
bool is_prime(uint64_t n);

// A field element with its field attached.  Used at API boundaries; the
// matrix kernels work on raw encodings.
class Scalar {
 public:
  Scalar() = default;
  explicit Scalar(FieldPtr f) : f_(std::move(f)) {}
  static Scalar from_int(FieldPtr f, long long v);
  static Scalar from_raw(FieldPtr f, uint32_t v);
  static Scalar from_rational(FieldPtr f, const mpq_class& v);
  // Parses the canonical string form ("a/b", "n", "[c0,c1,..]").  Rational
  // strings are accepted for finite fields and reduced.
  static Scalar parse(FieldPtr f, std::string_view text);

  const FieldPtr& field() const { return f_; }
  bool is_zero() const;
  bool is_one() const;
  uint32_t raw() const { return v_; }
  const mpq_class& rational() const { return q_; }
  std::string str() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar inv() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

 private:
  void check_same(const Scalar& o) const;
  FieldPtr f_;
  uint32_t v_ = 0;
  mpq_class q_;
};

bool same_field(const FieldPtr& a, const FieldPtr& b);

}  // namespace ks
