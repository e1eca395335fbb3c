#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kronsheaf/mat.hpp"
#include "kronsheaf/ordering.hpp"

namespace ks {

using Exp = std::vector<int>;

// Homogeneous polynomial in num_vars variables.  Zero coefficients are never
// stored; the zero form still carries its degree.
class Form {
 public:
  Form() = default;
  Form(FieldPtr f, int num_vars, int degree) : f_(std::move(f)), nv_(num_vars), deg_(degree) {}
  static Form constant(FieldPtr f, int num_vars, const Scalar& c);
  static Form variable(FieldPtr f, int num_vars, int i);
  static Form monomial(FieldPtr f, const Exp& e, const Scalar& c);

  const FieldPtr& field() const { return f_; }
  int num_vars() const { return nv_; }
  int degree() const { return deg_; }
  const std::map<Exp, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Adds c * x^e; the exponent must have the form's degree.
  void add_term(const Exp& e, const Scalar& c);
  Scalar coeff(const Exp& e) const;

  Form operator+(const Form& o) const;
  Form operator*(const Form& o) const;
  Form scaled(const Scalar& c) const;
  bool operator==(const Form& o) const;
  bool operator!=(const Form& o) const { return !(*this == o); }
  std::string str() const;

 private:
  FieldPtr f_;
  int nv_ = 0;
  int deg_ = 0;
  std::map<Exp, Scalar> terms_;
};

// ⊕_j S(-a_j)
struct FreeModule {
  int num_vars = 0;
  std::vector<int> degrees;
  size_t rank() const { return degrees.size(); }
  bool operator==(const FreeModule& o) const { return num_vars == o.num_vars && degrees == o.degrees; }
};

// Homogeneous map of free modules; entry (i,j) maps source generator j into
// target component i and has degree source[j] - target[i].
struct GradedMap {
  FieldPtr field;
  FreeModule source, target;
  std::vector<std::vector<Form>> entries;  // target.rank() rows, source.rank() columns

  static GradedMap zero(FieldPtr f, FreeModule source, FreeModule target);
  int num_vars() const { return target.num_vars; }
  const Form& at(size_t i, size_t j) const { return entries[i][j]; }
  // Throws DimensionMismatch when shapes or entry degrees are inconsistent.
  void validate() const;
  GradedMap transpose_dual(int shift) const;
};

// Graded module M = coker(F1 -> F0).
struct Presentation {
  GradedMap map;

  static Presentation free(FieldPtr f, int num_vars, std::vector<int> gen_degrees);
  // gen_degrees / rel_degrees with relations[j] = image of relation j in F0.
  static Presentation from_relations(FieldPtr f, int num_vars, std::vector<int> gen_degrees,
                                     const std::vector<std::vector<Form>>& relations);
  int num_vars() const { return map.target.num_vars; }
  int r() const { return num_vars() - 1; }
  const FieldPtr& field() const { return map.field; }
  const std::vector<int>& gen_degrees() const { return map.target.degrees; }
  const std::vector<int>& rel_degrees() const { return map.source.degrees; }
  // Stable text key, used for caching.
  std::string key() const;
};

// Graded-lex order (x0 > x1 > ...), descending lexicographic on exponents.
std::vector<Exp> monomial_basis(int num_vars, int d);
size_t monomial_count(int num_vars, int d);
size_t monomial_index(const Exp& e);

// Dimension of (⊕ S(-a_j))_d and the offset of each generator block.
size_t free_piece_dim(const FreeModule& m, int d);
std::vector<size_t> free_piece_offsets(const FreeModule& m, int d);

Mat map_degree_matrix(const GradedMap& f, int d);
// Multiplies a vector of (⊕ S(-a_j))_d by a form, giving a vector in degree d + deg(h).
Mat multiply_vector(const FreeModule& m, const Mat& v, int d, const Form& h);
// Converts a coordinate vector in (⊕ S(-a_j))_d into one form per generator.
std::vector<Form> vector_to_forms(const FieldPtr& f, const FreeModule& m, const Mat& v, int d);
Mat forms_to_vector(const FieldPtr& f, const FreeModule& m, const std::vector<Form>& forms, int d);

// Degree-d piece of a presented module with pinned coset representatives.
struct Piece {
  int degree = 0;
  size_t dim = 0;
  size_t ambient = 0;  // dim (F0)_d
  Quotient quotient;   // of (F0)_d by the image of F1
};
Piece piece(const Presentation& m, int d);

struct KernelGens {
  GradedMap gens;  // from the new free module into the source of the input map
  bool certified = true;
};
// Minimal homogeneous generators of ker(f) in degrees <= cap.  `certified`
// is false when a generator appears in the final r+2 degrees below the cap.
KernelGens kernel_generators(const GradedMap& f, int cap);
// Throws DegreeCapExceeded when uncertified.
Presentation kernel_presentation(const GradedMap& f, int cap);

class HilbPoly {
 public:
  HilbPoly() = default;
  explicit HilbPoly(std::vector<mpq_class> coeffs);
  static HilbPoly constant(const mpq_class& c) { return HilbPoly({c}); }
  // C(l - shift + r, r) as a polynomial in l.
  static HilbPoly shifted_binomial(int shift, int r);

  const std::vector<mpq_class>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  mpq_class coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : mpq_class(0); }
  mpq_class leading() const { return c_.empty() ? mpq_class(0) : c_.back(); }
  mpq_class eval(const mpq_class& x) const;
  long long eval_int(long long x) const;

  HilbPoly operator+(const HilbPoly& o) const;
  HilbPoly operator-(const HilbPoly& o) const;
  HilbPoly operator*(const HilbPoly& o) const;
  HilbPoly scaled(const mpq_class& s) const;
  bool operator==(const HilbPoly& o) const { return c_ == o.c_; }
  bool operator!=(const HilbPoly& o) const { return !(*this == o); }
  std::string str() const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

struct DimMult {
  int dim;
  mpz_class multiplicity;
};
DimMult dim_and_multiplicity(const HilbPoly& p);
// Sign of p'(n)p(m) - p(n)p'(m) for m >> n >> 0; positive means p < p'.
Ordering polcmp_rudakov(const HilbPoly& p, const HilbPoly& pp);
Ordering polcmp_lex(const HilbPoly& p, const HilbPoly& q);

struct Resolution {
  FieldPtr field;
  int num_vars = 0;
  int cap = 0;
  std::vector<FreeModule> modules;  // F_0 .. F_s
  std::vector<GradedMap> maps;      // maps[i]: F_{i+1} -> F_i
  size_t length() const { return modules.size() - 1; }
};
// Minimal cap accepted for a presentation: every generator and relation degree
// plus a certification window.
int minimal_cap(const Presentation& m);
Resolution free_resolution(const Presentation& m, int cap);
HilbPoly hilbert_polynomial(const Resolution& res);
HilbPoly hilbert_polynomial(const Presentation& m, int cap);

Presentation twist(const Presentation& m, int t);
Presentation direct_sum(const Presentation& a, const Presentation& b);

}  // namespace ks
