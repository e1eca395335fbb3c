#include "kronsheaf/graded.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "kronsheaf/errors.hpp"

namespace ks {

namespace {

uint64_t binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
  return r;
}

void require_compatible(const Presentation& a, const Presentation& b) {
  if (!same_field(a.field(), b.field())) throw FieldMismatch("presentations over different fields");
  if (a.num_vars() != b.num_vars()) throw VarMismatch("presentations over different polynomial rings");
}

}  // namespace

// ---------------------------------------------------------------- Form

Form Form::constant(FieldPtr f, int num_vars, const Scalar& c) {
  Form out(f, num_vars, 0);
  out.add_term(Exp(num_vars, 0), c);
  return out;
}

Form Form::variable(FieldPtr f, int num_vars, int i) {
  Exp e(num_vars, 0);
  e[i] = 1;
  Form out(f, num_vars, 1);
  out.add_term(e, Scalar::from_int(f, 1));
  return out;
}

Form Form::monomial(FieldPtr f, const Exp& e, const Scalar& c) {
  int d = 0;
  for (int x : e) d += x;
  Form out(f, static_cast<int>(e.size()), d);
  out.add_term(e, c);
  return out;
}

void Form::add_term(const Exp& e, const Scalar& c) {
  if (static_cast<int>(e.size()) != nv_) throw DimensionMismatch("exponent length differs from variable count");
  int d = 0;
  for (int x : e) {
    if (x < 0) throw DimensionMismatch("negative exponent");
    d += x;
  }
  if (d != deg_) throw DimensionMismatch("exponent of degree " + std::to_string(d) + " in a form of degree " + std::to_string(deg_));
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Scalar Form::coeff(const Exp& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar::from_int(f_, 0) : it->second;
}

Form Form::operator+(const Form& o) const {
  if (o.deg_ != deg_ || o.nv_ != nv_) throw DimensionMismatch("adding forms of different degrees");
  Form r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Form Form::operator*(const Form& o) const {
  Form r(f_, nv_, deg_ + o.deg_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      Exp e(nv_);
      for (int i = 0; i < nv_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  return r;
}

Form Form::scaled(const Scalar& c) const {
  Form r(f_, nv_, deg_);
  if (c.is_zero()) return r;
  for (const auto& [e, x] : terms_) r.terms_.emplace(e, x * c);
  return r;
}

bool Form::operator==(const Form& o) const {
  if (nv_ != o.nv_ || deg_ != o.deg_ || terms_.size() != o.terms_.size()) return false;
  auto a = terms_.begin();
  for (auto b = o.terms_.begin(); b != o.terms_.end(); ++a, ++b)
    if (a->first != b->first || a->second != b->second) return false;
  return true;
}

std::string Form::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  // print in graded-lex order (descending exponents)
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += it->second.str();
    for (int i = 0; i < nv_; ++i) {
      if (it->first[i] == 0) continue;
      s += "*x" + std::to_string(i);
      if (it->first[i] > 1) s += "^" + std::to_string(it->first[i]);
    }
  }
  return s;
}

// ---------------------------------------------------------------- monomials

size_t monomial_count(int num_vars, int d) {
  if (d < 0) return 0;
  if (num_vars == 0) return d == 0 ? 1 : 0;
  return binom(d + num_vars - 1, num_vars - 1);
}

std::vector<Exp> monomial_basis(int num_vars, int d) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<Exp>> cache;
  if (d < 0) return {};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({num_vars, d});
    if (it != cache.end()) return it->second;
  }
  std::vector<Exp> out;
  if (num_vars == 0) {
    if (d == 0) out.push_back({});
  } else if (num_vars == 1) {
    out.push_back({d});
  } else {
    for (int e0 = d; e0 >= 0; --e0)
      for (const Exp& rest : monomial_basis(num_vars - 1, d - e0)) {
        Exp e;
        e.reserve(num_vars);
        e.push_back(e0);
        e.insert(e.end(), rest.begin(), rest.end());
        out.push_back(std::move(e));
      }
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(num_vars, d), out);
  return out;
}

size_t monomial_index(const Exp& e) {
  int remaining = 0;
  for (int x : e) remaining += x;
  const int nv = static_cast<int>(e.size());
  size_t idx = 0;
  for (int k = 0; k + 1 < nv; ++k) {
    // monomials with a larger exponent at position k come first
    for (int j = e[k] + 1; j <= remaining; ++j) idx += monomial_count(nv - k - 1, remaining - j);
    remaining -= e[k];
  }
  return idx;
}

size_t free_piece_dim(const FreeModule& m, int d) {
  size_t n = 0;
  for (int a : m.degrees) n += monomial_count(m.num_vars, d - a);
  return n;
}

std::vector<size_t> free_piece_offsets(const FreeModule& m, int d) {
  std::vector<size_t> off(m.degrees.size() + 1, 0);
  for (size_t j = 0; j < m.degrees.size(); ++j) off[j + 1] = off[j] + monomial_count(m.num_vars, d - m.degrees[j]);
  return off;
}

// ---------------------------------------------------------------- maps

GradedMap GradedMap::zero(FieldPtr f, FreeModule source, FreeModule target) {
  GradedMap g;
  g.field = f;
  g.source = std::move(source);
  g.target = std::move(target);
  g.entries.assign(g.target.rank(), {});
  for (size_t i = 0; i < g.target.rank(); ++i)
    for (size_t j = 0; j < g.source.rank(); ++j)
      g.entries[i].emplace_back(f, g.target.num_vars, g.source.degrees[j] - g.target.degrees[i]);
  return g;
}

void GradedMap::validate() const {
  if (source.num_vars != target.num_vars) throw VarMismatch("source and target over different rings");
  if (entries.size() != target.rank()) throw DimensionMismatch("entry rows differ from target rank");
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != source.rank()) throw DimensionMismatch("entry columns differ from source rank");
    for (size_t j = 0; j < entries[i].size(); ++j) {
      const Form& h = entries[i][j];
      if (h.num_vars() != target.num_vars)
        throw DimensionMismatch("variable count mismatch at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (!h.is_zero() && h.degree() != source.degrees[j] - target.degrees[i])
        throw DimensionMismatch("degree mismatch at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

GradedMap GradedMap::transpose_dual(int shift) const {
  GradedMap d;
  d.field = field;
  d.source.num_vars = d.target.num_vars = target.num_vars;
  for (int a : target.degrees) d.source.degrees.push_back(shift - a);
  for (int b : source.degrees) d.target.degrees.push_back(shift - b);
  d.entries.assign(source.rank(), {});
  for (size_t j = 0; j < source.rank(); ++j)
    for (size_t i = 0; i < target.rank(); ++i) d.entries[j].push_back(entries[i][j]);
  return d;
}

Mat map_degree_matrix(const GradedMap& f, int d) {
  const int nv = f.num_vars();
  std::vector<size_t> toff = free_piece_offsets(f.target, d);
  std::vector<size_t> soff = free_piece_offsets(f.source, d);
  Mat m(f.field, toff.back(), soff.back());
  for (size_t j = 0; j < f.source.rank(); ++j) {
    const std::vector<Exp> mons = monomial_basis(nv, d - f.source.degrees[j]);
    for (size_t i = 0; i < f.target.rank(); ++i) {
      const Form& h = f.entries[i][j];
      if (h.is_zero()) continue;
      for (size_t t = 0; t < mons.size(); ++t) {
        for (const auto& [e, c] : h.terms()) {
          Exp prod(nv);
          for (int k = 0; k < nv; ++k) prod[k] = e[k] + mons[t][k];
          m.add_to(toff[i] + monomial_index(prod), soff[j] + t, c);
        }
      }
    }
  }
  return m;
}

Mat multiply_vector(const FreeModule& m, const Mat& v, int d, const Form& h) {
  const int nv = m.num_vars;
  const int d2 = d + h.degree();
  std::vector<size_t> off = free_piece_offsets(m, d);
  std::vector<size_t> off2 = free_piece_offsets(m, d2);
  Mat out(v.field(), off2.back(), 1);
  for (size_t j = 0; j < m.rank(); ++j) {
    const std::vector<Exp> mons = monomial_basis(nv, d - m.degrees[j]);
    for (size_t t = 0; t < mons.size(); ++t) {
      if (v.entry_is_zero(off[j] + t, 0)) continue;
      Scalar x = v.at(off[j] + t, 0);
      for (const auto& [e, c] : h.terms()) {
        Exp prod(nv);
        for (int k = 0; k < nv; ++k) prod[k] = e[k] + mons[t][k];
        out.add_to(off2[j] + monomial_index(prod), 0, c * x);
      }
    }
  }
  return out;
}

std::vector<Form> vector_to_forms(const FieldPtr& f, const FreeModule& m, const Mat& v, int d) {
  std::vector<size_t> off = free_piece_offsets(m, d);
  std::vector<Form> out;
  for (size_t j = 0; j < m.rank(); ++j) {
    Form h(f, m.num_vars, d - m.degrees[j]);
    const std::vector<Exp> mons = monomial_basis(m.num_vars, d - m.degrees[j]);
    for (size_t t = 0; t < mons.size(); ++t)
      if (!v.entry_is_zero(off[j] + t, 0)) h.add_term(mons[t], v.at(off[j] + t, 0));
    out.push_back(std::move(h));
  }
  return out;
}

Mat forms_to_vector(const FieldPtr& f, const FreeModule& m, const std::vector<Form>& forms, int d) {
  std::vector<size_t> off = free_piece_offsets(m, d);
  Mat v(f, off.back(), 1);
  for (size_t j = 0; j < m.rank(); ++j) {
    if (forms[j].is_zero()) continue;
    if (forms[j].degree() != d - m.degrees[j]) throw DimensionMismatch("form degree does not match the requested piece");
    for (const auto& [e, c] : forms[j].terms()) v.add_to(off[j] + monomial_index(e), 0, c);
  }
  return v;
}

// ---------------------------------------------------------------- presentations

Presentation Presentation::free(FieldPtr f, int num_vars, std::vector<int> gen_degrees) {
  Presentation p;
  p.map = GradedMap::zero(f, FreeModule{num_vars, {}}, FreeModule{num_vars, std::move(gen_degrees)});
  return p;
}

Presentation Presentation::from_relations(FieldPtr f, int num_vars, std::vector<int> gen_degrees,
                                          const std::vector<std::vector<Form>>& relations) {
  Presentation p;
  p.map.field = f;
  p.map.target = FreeModule{num_vars, std::move(gen_degrees)};
  p.map.source.num_vars = num_vars;
  p.map.entries.assign(p.map.target.rank(), {});
  for (size_t j = 0; j < relations.size(); ++j) {
    if (relations[j].size() != p.map.target.rank())
      throw DimensionMismatch("relation " + std::to_string(j) + " has the wrong length");
    // relation degree: generator degree plus the degree of any nonzero entry
    int deg = 0;
    bool found = false;
    for (size_t i = 0; i < relations[j].size(); ++i)
      if (!relations[j][i].is_zero()) {
        int dd = p.map.target.degrees[i] + relations[j][i].degree();
        if (found && dd != deg) throw DimensionMismatch("inhomogeneous relation " + std::to_string(j));
        deg = dd;
        found = true;
      }
    if (!found) throw DimensionMismatch("zero relation " + std::to_string(j) + " has no degree");
    p.map.source.degrees.push_back(deg);
    for (size_t i = 0; i < relations[j].size(); ++i) {
      Form h = relations[j][i];
      if (h.is_zero()) h = Form(f, num_vars, deg - p.map.target.degrees[i]);
      p.map.entries[i].push_back(std::move(h));
    }
  }
  p.map.validate();
  return p;
}

std::string Presentation::key() const {
  std::ostringstream os;
  os << field()->spec().name() << "|" << num_vars() << "|";
  for (int a : gen_degrees()) os << a << ",";
  os << "|";
  for (int b : rel_degrees()) os << b << ",";
  os << "|";
  for (const auto& row : map.entries)
    for (const Form& h : row) os << h.str() << ";";
  return os.str();
}

Piece piece(const Presentation& m, int d) {
  Piece pc;
  pc.degree = d;
  pc.ambient = free_piece_dim(m.map.target, d);
  Mat image = map_degree_matrix(m.map, d);
  pc.quotient = quotient_by(image.cols() ? image : Mat(m.field(), pc.ambient, 0), pc.ambient, m.field());
  pc.dim = pc.quotient.complement.size();
  return pc;
}

// ---------------------------------------------------------------- kernels

KernelGens kernel_generators(const GradedMap& f, int cap) {
  const int nv = f.num_vars();
  const int r = nv - 1;
  KernelGens out;
  out.gens.field = f.field;
  out.gens.target = f.source;
  out.gens.source.num_vars = nv;
  std::vector<std::pair<int, Mat>> gens;
  if (f.source.rank() > 0) {
    const int d_lo = *std::min_element(f.source.degrees.begin(), f.source.degrees.end());
    Mat generated;  // column basis of the part generated by earlier generators
    int generated_deg = d_lo - 1;
    for (int d = d_lo; d <= cap; ++d) {
      const size_t dim_d = free_piece_dim(f.source, d);
      // move the generated part up one degree
      Mat next(f.field, dim_d, 0);
      if (generated.cols() > 0 && generated_deg == d - 1) {
        std::vector<Mat> cols;
        for (int i = 0; i < nv; ++i) {
          Form xi = Form::variable(f.field, nv, i);
          for (size_t c = 0; c < generated.cols(); ++c)
            cols.push_back(multiply_vector(f.source, generated.column(c), d - 1, xi));
        }
        next = col_basis(Mat::hstack(cols, f.field, dim_d));
      }
      generated = next;
      generated_deg = d;
      if (dim_d == 0) continue;
      Mat a = map_degree_matrix(f, d);
      Mat k = a.rows() ? kernel_basis(a) : Mat::identity(f.field, dim_d);
      if (k.cols() == generated.cols()) continue;  // generated part always lies in the kernel
      Rref rr = rref(Mat::hstack({generated, k}, f.field, dim_d));
      std::vector<Mat> fresh;
      for (size_t p : rr.pivots)
        if (p >= generated.cols()) fresh.push_back(k.column(p - generated.cols()));
      for (auto& v : fresh) gens.emplace_back(d, v);
      if (!fresh.empty()) {
        if (d > cap - (r + 2)) out.certified = false;
        std::vector<Mat> all{generated};
        all.insert(all.end(), fresh.begin(), fresh.end());
        generated = col_basis(Mat::hstack(all, f.field, dim_d));
      }
    }
  }
  for (const auto& [d, v] : gens) out.gens.source.degrees.push_back(d);
  out.gens.entries.assign(f.source.rank(), {});
  for (const auto& [d, v] : gens) {
    std::vector<Form> col = vector_to_forms(f.field, f.source, v, d);
    for (size_t j = 0; j < f.source.rank(); ++j) out.gens.entries[j].push_back(std::move(col[j]));
  }
  return out;
}

Presentation kernel_presentation(const GradedMap& f, int cap) {
  if (!f.source.degrees.empty() && cap < *std::max_element(f.source.degrees.begin(), f.source.degrees.end()))
    throw DegreeCapExceeded("degree cap below the source generator degrees");
  KernelGens g = kernel_generators(f, cap);
  if (!g.certified) throw DegreeCapExceeded("kernel generators still appear near degree cap " + std::to_string(cap));
  KernelGens rel = kernel_generators(g.gens, cap);
  if (!rel.certified) throw DegreeCapExceeded("kernel relations still appear near degree cap " + std::to_string(cap));
  Presentation p;
  p.map = rel.gens;
  return p;
}

// ---------------------------------------------------------------- Hilbert polynomials

HilbPoly::HilbPoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
  for (auto& x : c_) x.canonicalize();
  trim();
}

void HilbPoly::trim() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

HilbPoly HilbPoly::shifted_binomial(int shift, int r) {
  HilbPoly p({mpq_class(1)});
  for (int k = 1; k <= r; ++k) p = p * HilbPoly({mpq_class(k - shift, k), mpq_class(1, k)});
  return p;
}

mpq_class HilbPoly::eval(const mpq_class& x) const {
  mpq_class v = 0;
  for (size_t i = c_.size(); i-- > 0;) v = v * x + c_[i];
  return v;
}

long long HilbPoly::eval_int(long long x) const {
  mpq_class v = eval(mpq_class(static_cast<long>(x)));
  if (v.get_den() != 1) throw std::domain_error("Hilbert polynomial value is not an integer");
  return v.get_num().get_si();
}

HilbPoly HilbPoly::operator+(const HilbPoly& o) const {
  std::vector<mpq_class> c(std::max(c_.size(), o.c_.size()), mpq_class(0));
  for (size_t i = 0; i < c_.size(); ++i) c[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) c[i] += o.c_[i];
  return HilbPoly(std::move(c));
}

HilbPoly HilbPoly::operator-(const HilbPoly& o) const { return *this + o.scaled(-1); }

HilbPoly HilbPoly::operator*(const HilbPoly& o) const {
  if (c_.empty() || o.c_.empty()) return HilbPoly();
  std::vector<mpq_class> c(c_.size() + o.c_.size() - 1, mpq_class(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
  return HilbPoly(std::move(c));
}

HilbPoly HilbPoly::scaled(const mpq_class& s) const {
  std::vector<mpq_class> c = c_;
  for (auto& x : c) x *= s;
  return HilbPoly(std::move(c));
}

std::string HilbPoly::str() const {
  if (c_.empty()) return "0";
  std::string s;
  for (size_t i = c_.size(); i-- > 0;) {
    if (sgn(c_[i]) == 0) continue;
    if (!s.empty()) s += " + ";
    s += c_[i].get_str();
    if (i >= 1) s += "*l";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

DimMult dim_and_multiplicity(const HilbPoly& p) {
  if (p.is_zero()) throw ZeroPolynomial("the zero polynomial has no dimension");
  DimMult out;
  out.dim = p.degree();
  mpq_class r = p.leading();
  for (int i = 2; i <= out.dim; ++i) r *= i;
  if (r.get_den() != 1 || sgn(r) <= 0) throw InvalidLeadingSign("multiplicity is not a positive integer");
  out.multiplicity = r.get_num();
  return out;
}

Ordering polcmp_rudakov(const HilbPoly& p, const HilbPoly& pp) {
  if (p.is_zero() || pp.is_zero() || sgn(p.leading()) <= 0 || sgn(pp.leading()) <= 0)
    throw InvalidLeadingSign("Rudakov comparison needs nonzero polynomials with positive leading coefficients");
  // Q(n, m) = pp(n) p(m) - p(n) pp(m); coefficient of n^i m^j
  const int dn = std::max(p.degree(), pp.degree());
  for (int j = dn; j >= 0; --j)
    for (int i = dn; i >= 0; --i) {
      mpq_class q = pp.coeff(i) * p.coeff(j) - p.coeff(i) * pp.coeff(j);
      if (sgn(q) > 0) return Ordering::Less;
      if (sgn(q) < 0) return Ordering::Greater;
    }
  return Ordering::Equal;
}

Ordering polcmp_lex(const HilbPoly& p, const HilbPoly& q) {
  const int d = std::max(p.degree(), q.degree());
  for (int i = d; i >= 0; --i) {
    int c = cmp(p.coeff(i), q.coeff(i));
    if (c < 0) return Ordering::Less;
    if (c > 0) return Ordering::Greater;
  }
  return Ordering::Equal;
}

// ---------------------------------------------------------------- resolutions

int minimal_cap(const Presentation& m) {
  int mx = 0;
  bool any = false;
  for (int a : m.gen_degrees()) {
    mx = any ? std::max(mx, a) : a;
    any = true;
  }
  for (int b : m.rel_degrees()) {
    mx = any ? std::max(mx, b) : b;
    any = true;
  }
  return mx + m.r() + 2;
}

Resolution free_resolution(const Presentation& m, int cap) {
  if (cap < minimal_cap(m))
    throw DegreeCapExceeded("degree cap " + std::to_string(cap) + " is below the minimum " + std::to_string(minimal_cap(m)));
  Resolution res;
  res.field = m.field();
  res.num_vars = m.num_vars();
  res.cap = cap;
  res.modules.push_back(m.map.target);
  if (m.map.source.rank() > 0) {
    res.modules.push_back(m.map.source);
    res.maps.push_back(m.map);
    while (true) {
      KernelGens k = kernel_generators(res.maps.back(), cap);
      if (!k.certified)
        throw ResolutionIncomplete("syzygies still appear near degree cap " + std::to_string(cap) + "; raise the cap");
      if (k.gens.source.rank() == 0) break;
      if (res.maps.size() >= static_cast<size_t>(m.num_vars()))
        throw ResolutionIncomplete("resolution longer than the number of variables below cap " + std::to_string(cap));
      res.modules.push_back(k.gens.source);
      res.maps.push_back(std::move(k.gens));
    }
  }
  // Alternating-sum identity of Hilbert functions, degree by degree.
  int lo = cap;
  for (int a : m.gen_degrees()) lo = std::min(lo, a);
  for (int d = lo; d <= cap; ++d) {
    long long alt = 0;
    for (size_t i = 0; i < res.modules.size(); ++i) {
      long long v = static_cast<long long>(free_piece_dim(res.modules[i], d));
      alt += (i % 2 == 0) ? v : -v;
    }
    if (alt != static_cast<long long>(piece(m, d).dim))
      throw ResolutionIncomplete("Hilbert function identity fails in degree " + std::to_string(d));
  }
  return res;
}

HilbPoly hilbert_polynomial(const Resolution& res) {
  HilbPoly p;
  const int r = res.num_vars - 1;
  for (size_t i = 0; i < res.modules.size(); ++i)
    for (int a : res.modules[i].degrees) {
      HilbPoly b = HilbPoly::shifted_binomial(a, r);
      p = (i % 2 == 0) ? p + b : p - b;
    }
  return p;
}

HilbPoly hilbert_polynomial(const Presentation& m, int cap) { return hilbert_polynomial(free_resolution(m, cap)); }

Presentation twist(const Presentation& m, int t) {
  Presentation out = m;
  for (int& a : out.map.target.degrees) a -= t;
  for (int& b : out.map.source.degrees) b -= t;
  return out;
}

Presentation direct_sum(const Presentation& a, const Presentation& b) {
  require_compatible(a, b);
  const FieldPtr& f = a.field();
  const int nv = a.num_vars();
  FreeModule src{nv, a.rel_degrees()}, tgt{nv, a.gen_degrees()};
  src.degrees.insert(src.degrees.end(), b.rel_degrees().begin(), b.rel_degrees().end());
  tgt.degrees.insert(tgt.degrees.end(), b.gen_degrees().begin(), b.gen_degrees().end());
  Presentation out;
  out.map = GradedMap::zero(f, src, tgt);
  const size_t ga = a.gen_degrees().size(), ra = a.rel_degrees().size();
  for (size_t i = 0; i < ga; ++i)
    for (size_t j = 0; j < ra; ++j) out.map.entries[i][j] = a.map.entries[i][j];
  for (size_t i = 0; i < b.gen_degrees().size(); ++i)
    for (size_t j = 0; j < b.rel_degrees().size(); ++j) out.map.entries[ga + i][ra + j] = b.map.entries[i][j];
  return out;
}

}  // namespace ks
