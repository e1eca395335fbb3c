#include "kronsheaf/mat.hpp"

#include <algorithm>

#include "kronsheaf/errors.hpp"

namespace ks {

namespace {

struct FFOps {
  using T = uint32_t;
  const Field* F;
  bool is_zero(T x) const { return x == 0; }
  T one() const { return 1; }
  T inv(T x) const { return F->inv(x); }
  T mul(T a, T b) const { return F->mul(a, b); }
  T neg(T a) const { return F->neg(a); }
  void scale(T& x, T c) const { x = F->mul(x, c); }
  // x -= c * y
  void axpy(T& x, T c, T y) const {
    if (y != 0) x = F->sub(x, F->mul(c, y));
  }
};

struct QOps {
  using T = mpq_class;
  bool is_zero(const T& x) const { return sgn(x) == 0; }
  T one() const { return 1; }
  T inv(const T& x) const { return 1 / x; }
  T mul(const T& a, const T& b) const { return a * b; }
  T neg(const T& a) const { return -a; }
  void scale(T& x, const T& c) const { x *= c; }
  void axpy(T& x, const T& c, const T& y) const {
    if (sgn(y) != 0) x -= c * y;
  }
};

// In-place reduced row echelon form.  Returns pivot columns; the first
// pivots.size() rows hold the nonzero rows.
template <class Ops>
std::vector<size_t> rref_inplace(std::vector<typename Ops::T>& a, size_t rows, size_t cols, const Ops& ops) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = rows;
    for (size_t i = r; i < rows; ++i)
      if (!ops.is_zero(a[i * cols + c])) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    if (piv != r)
      for (size_t j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[r * cols + j]);
    auto inv = ops.inv(a[r * cols + c]);
    for (size_t j = c; j < cols; ++j) ops.scale(a[r * cols + j], inv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || ops.is_zero(a[i * cols + c])) continue;
      auto f = a[i * cols + c];
      for (size_t j = c; j < cols; ++j) ops.axpy(a[i * cols + j], f, a[r * cols + j]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class Ops>
typename Ops::T det_inplace(std::vector<typename Ops::T>& a, size_t n, const Ops& ops) {
  typename Ops::T d = ops.one();
  bool negate = false;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = n;
    for (size_t i = c; i < n; ++i)
      if (!ops.is_zero(a[i * n + c])) {
        piv = i;
        break;
      }
    if (piv == n) return typename Ops::T(0);
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[c * n + j]);
      negate = !negate;
    }
    d = ops.mul(d, a[c * n + c]);
    auto inv = ops.inv(a[c * n + c]);
    for (size_t i = c + 1; i < n; ++i) {
      if (ops.is_zero(a[i * n + c])) continue;
      auto f = ops.mul(a[i * n + c], inv);
      for (size_t j = c; j < n; ++j) ops.axpy(a[i * n + j], f, a[c * n + j]);
    }
  }
  return negate ? ops.neg(d) : d;
}

void require_same(const Mat& a, const Mat& b) {
  if (!same_field(a.field(), b.field())) throw FieldMismatch("matrices over different fields");
}

}  // namespace

struct MatAccess {
  static std::vector<uint32_t>& ff(Mat& m) { return m.ff_; }
  static std::vector<mpq_class>& qq(Mat& m) { return m.qq_; }
  static const std::vector<uint32_t>& ff(const Mat& m) { return m.ff_; }
  static const std::vector<mpq_class>& qq(const Mat& m) { return m.qq_; }
};

Mat::Mat(FieldPtr f, size_t rows, size_t cols) : f_(std::move(f)), rows_(rows), cols_(cols) {
  if (f_->is_rational())
    qq_.assign(rows * cols, mpq_class(0));
  else
    ff_.assign(rows * cols, 0);
}

Mat Mat::identity(FieldPtr f, size_t n) {
  Mat m(std::move(f), n, n);
  for (size_t i = 0; i < n; ++i) m.set_int(i, i, 1);
  return m;
}

Mat Mat::from_ints(FieldPtr f, size_t rows, size_t cols, const std::vector<long long>& entries) {
  if (entries.size() != rows * cols) throw DimensionMismatch("entry count does not match shape");
  Mat m(std::move(f), rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) m.set_int(i, j, entries[i * cols + j]);
  return m;
}

Mat Mat::from_rows(FieldPtr f, const std::vector<std::vector<long long>>& rows) {
  size_t nc = rows.empty() ? 0 : rows[0].size();
  std::vector<long long> flat;
  for (const auto& r : rows) {
    if (r.size() != nc) throw DimensionMismatch("ragged rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return from_ints(std::move(f), rows.size(), nc, flat);
}

Scalar Mat::at(size_t i, size_t j) const {
  if (f_->is_rational()) return Scalar::from_rational(f_, qq_[i * cols_ + j]);
  return Scalar::from_raw(f_, ff_[i * cols_ + j]);
}

void Mat::set(size_t i, size_t j, const Scalar& v) {
  if (!same_field(v.field(), f_)) throw FieldMismatch("scalar field differs from matrix field");
  if (f_->is_rational())
    qq_[i * cols_ + j] = v.rational();
  else
    ff_[i * cols_ + j] = v.raw();
}

void Mat::set_int(size_t i, size_t j, long long v) {
  if (f_->is_rational())
    qq_[i * cols_ + j] = mpq_class(static_cast<long>(v));
  else
    ff_[i * cols_ + j] = f_->from_int(v);
}

bool Mat::entry_is_zero(size_t i, size_t j) const {
  return f_->is_rational() ? sgn(qq_[i * cols_ + j]) == 0 : ff_[i * cols_ + j] == 0;
}

void Mat::add_to(size_t i, size_t j, const Scalar& v) {
  if (f_->is_rational())
    qq_[i * cols_ + j] += v.rational();
  else
    ff_[i * cols_ + j] = f_->add(ff_[i * cols_ + j], v.raw());
}

bool Mat::is_zero() const {
  if (f_ && f_->is_rational()) {
    for (const auto& x : qq_)
      if (sgn(x) != 0) return false;
    return true;
  }
  for (uint32_t x : ff_)
    if (x) return false;
  return true;
}

bool Mat::operator==(const Mat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  if (!same_field(f_, o.f_)) return false;
  return ff_ == o.ff_ && qq_ == o.qq_;
}

Mat Mat::transpose() const {
  Mat t(f_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) {
      if (f_->is_rational())
        t.qq_[j * rows_ + i] = qq_[i * cols_ + j];
      else
        t.ff_[j * rows_ + i] = ff_[i * cols_ + j];
    }
  return t;
}

Mat Mat::operator*(const Mat& o) const {
  require_same(*this, o);
  if (cols_ != o.rows_) throw DimensionMismatch("product of incompatible shapes");
  Mat r(f_, rows_, o.cols_);
  if (f_->is_rational()) {
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < cols_; ++k) {
        const mpq_class& a = qq_[i * cols_ + k];
        if (sgn(a) == 0) continue;
        for (size_t j = 0; j < o.cols_; ++j)
          if (sgn(o.qq_[k * o.cols_ + j]) != 0) r.qq_[i * o.cols_ + j] += a * o.qq_[k * o.cols_ + j];
      }
  } else {
    const Field& F = *f_;
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < cols_; ++k) {
        uint32_t a = ff_[i * cols_ + k];
        if (a == 0) continue;
        for (size_t j = 0; j < o.cols_; ++j) {
          uint32_t b = o.ff_[k * o.cols_ + j];
          if (b) r.ff_[i * o.cols_ + j] = F.add(r.ff_[i * o.cols_ + j], F.mul(a, b));
        }
      }
  }
  return r;
}

Mat Mat::operator+(const Mat& o) const {
  require_same(*this, o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("sum of incompatible shapes");
  Mat r = *this;
  if (f_->is_rational())
    for (size_t i = 0; i < qq_.size(); ++i) r.qq_[i] += o.qq_[i];
  else
    for (size_t i = 0; i < ff_.size(); ++i) r.ff_[i] = f_->add(ff_[i], o.ff_[i]);
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  require_same(*this, o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("difference of incompatible shapes");
  Mat r = *this;
  if (f_->is_rational())
    for (size_t i = 0; i < qq_.size(); ++i) r.qq_[i] -= o.qq_[i];
  else
    for (size_t i = 0; i < ff_.size(); ++i) r.ff_[i] = f_->sub(ff_[i], o.ff_[i]);
  return r;
}

Mat Mat::scaled(const Scalar& c) const {
  Mat r = *this;
  if (f_->is_rational())
    for (auto& x : r.qq_) x *= c.rational();
  else
    for (auto& x : r.ff_) x = f_->mul(x, c.raw());
  return r;
}

Mat Mat::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
  Mat b(f_, nr, nc);
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j) {
      if (f_->is_rational())
        b.qq_[i * nc + j] = qq_[(r0 + i) * cols_ + c0 + j];
      else
        b.ff_[i * nc + j] = ff_[(r0 + i) * cols_ + c0 + j];
    }
  return b;
}

void Mat::set_block(size_t r0, size_t c0, const Mat& b) {
  require_same(*this, b);
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw DimensionMismatch("block out of range");
  for (size_t i = 0; i < b.rows_; ++i)
    for (size_t j = 0; j < b.cols_; ++j) {
      if (f_->is_rational())
        qq_[(r0 + i) * cols_ + c0 + j] = b.qq_[i * b.cols_ + j];
      else
        ff_[(r0 + i) * cols_ + c0 + j] = b.ff_[i * b.cols_ + j];
    }
}

Mat Mat::select_columns(const std::vector<size_t>& idx) const {
  Mat r(f_, rows_, idx.size());
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < idx.size(); ++k) {
      if (f_->is_rational())
        r.qq_[i * idx.size() + k] = qq_[i * cols_ + idx[k]];
      else
        r.ff_[i * idx.size() + k] = ff_[i * cols_ + idx[k]];
    }
  return r;
}

Mat Mat::select_rows(const std::vector<size_t>& idx) const {
  Mat r(f_, idx.size(), cols_);
  for (size_t k = 0; k < idx.size(); ++k)
    for (size_t j = 0; j < cols_; ++j) {
      if (f_->is_rational())
        r.qq_[k * cols_ + j] = qq_[idx[k] * cols_ + j];
      else
        r.ff_[k * cols_ + j] = ff_[idx[k] * cols_ + j];
    }
  return r;
}

Mat Mat::hstack(const std::vector<Mat>& parts, FieldPtr f, size_t rows) {
  size_t total = 0;
  for (const auto& p : parts) {
    if (p.rows_ != rows) throw DimensionMismatch("hstack row mismatch");
    total += p.cols_;
  }
  Mat r(std::move(f), rows, total);
  size_t c = 0;
  for (const auto& p : parts) {
    r.set_block(0, c, p);
    c += p.cols_;
  }
  return r;
}

Mat Mat::vstack(const std::vector<Mat>& parts, FieldPtr f, size_t cols) {
  size_t total = 0;
  for (const auto& p : parts) {
    if (p.cols_ != cols) throw DimensionMismatch("vstack column mismatch");
    total += p.rows_;
  }
  Mat r(std::move(f), total, cols);
  size_t rr = 0;
  for (const auto& p : parts) {
    r.set_block(rr, 0, p);
    rr += p.rows_;
  }
  return r;
}

Mat Mat::kron(const Mat& a, const Mat& b) {
  require_same(a, b);
  Mat r(a.f_, a.rows_ * b.rows_, a.cols_ * b.cols_);
  const size_t rc = r.cols_;
  for (size_t i = 0; i < a.rows_; ++i)
    for (size_t j = 0; j < a.cols_; ++j) {
      if (a.entry_is_zero(i, j)) continue;
      for (size_t k = 0; k < b.rows_; ++k)
        for (size_t l = 0; l < b.cols_; ++l) {
          size_t idx = (i * b.rows_ + k) * rc + j * b.cols_ + l;
          if (a.f_->is_rational())
            r.qq_[idx] = a.qq_[i * a.cols_ + j] * b.qq_[k * b.cols_ + l];
          else
            r.ff_[idx] = a.f_->mul(a.ff_[i * a.cols_ + j], b.ff_[k * b.cols_ + l]);
        }
    }
  return r;
}

Rref rref(const Mat& m) {
  Mat work = m;
  std::vector<size_t> piv;
  if (m.field()->is_rational())
    piv = rref_inplace(MatAccess::qq(work), m.rows(), m.cols(), QOps{});
  else
    piv = rref_inplace(MatAccess::ff(work), m.rows(), m.cols(), FFOps{m.field().get()});
  Rref out;
  out.pivots = piv;
  out.rows = work.block(0, 0, piv.size(), m.cols());
  return out;
}

size_t rank(const Mat& m) { return rref(m).pivots.size(); }

Mat kernel_basis(const Mat& m) {
  Rref r = rref(m);
  const size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (size_t c : r.pivots) is_pivot[c] = true;
  std::vector<size_t> free;
  for (size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free.push_back(c);
  Mat k(m.field(), n, free.size());
  for (size_t t = 0; t < free.size(); ++t) {
    k.set_int(free[t], t, 1);
    for (size_t i = 0; i < r.pivots.size(); ++i) {
      if (r.rows.entry_is_zero(i, free[t])) continue;
      k.set(r.pivots[i], t, -r.rows.at(i, free[t]));
    }
  }
  return k;
}

Scalar det(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  Mat work = m;
  if (m.field()->is_rational()) {
    mpq_class d = det_inplace(MatAccess::qq(work), m.rows(), QOps{});
    return Scalar::from_rational(m.field(), d);
  }
  uint32_t d = det_inplace(MatAccess::ff(work), m.rows(), FFOps{m.field().get()});
  return Scalar::from_raw(m.field(), d);
}

Mat inverse(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("inverse of a non-square matrix");
  auto x = solve(m, Mat::identity(m.field(), m.rows()));
  if (!x || rank(m) != m.rows()) throw DimensionMismatch("matrix is singular");
  return *x;
}

std::optional<Mat> solve(const Mat& a, const Mat& b) {
  require_same(a, b);
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: row mismatch");
  Mat aug = Mat::hstack({a, b}, a.field(), a.rows());
  Rref r = rref(aug);
  const size_t n = a.cols();
  Mat x(a.field(), n, b.cols());
  for (size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] >= n) return std::nullopt;
    for (size_t j = 0; j < b.cols(); ++j) x.set(r.pivots[i], j, r.rows.at(i, n + j));
  }
  return x;
}

Mat col_basis(const Mat& m) { return rref(m.transpose()).rows.transpose(); }

bool in_col_span(const Mat& basis_cols, const Mat& v) {
  if (basis_cols.cols() == 0) return v.is_zero();
  return solve(basis_cols, v).has_value();
}

Mat col_intersection(const Mat& a, const Mat& b) {
  require_same(a, b);
  if (a.cols() == 0 || b.cols() == 0) return Mat(a.field(), a.rows(), 0);
  // a x = b y  <=>  [a | -b] (x,y) = 0
  Mat neg_b = b.scaled(Scalar::from_int(b.field(), -1));
  Mat k = kernel_basis(Mat::hstack({a, neg_b}, a.field(), a.rows()));
  Mat x = k.block(0, 0, a.cols(), k.cols());
  return col_basis(a * x);
}

Quotient quotient_by(const Mat& sub_cols, size_t ambient, const FieldPtr& f) {
  Quotient q;
  q.ambient = ambient;
  if (sub_cols.cols() == 0) {
    q.reduced = Mat(f, 0, ambient);
  } else {
    if (sub_cols.rows() != ambient) throw DimensionMismatch("quotient: ambient mismatch");
    Rref r = rref(sub_cols.transpose());
    q.reduced = r.rows;
    q.pivots = r.pivots;
  }
  std::vector<bool> is_pivot(ambient, false);
  for (size_t c : q.pivots) is_pivot[c] = true;
  for (size_t c = 0; c < ambient; ++c)
    if (!is_pivot[c]) q.complement.push_back(c);
  const size_t k = q.complement.size();
  q.lift = Mat(f, ambient, k);
  for (size_t t = 0; t < k; ++t) q.lift.set_int(q.complement[t], t, 1);
  // proj(e_j) = coordinates of e_j minus its reduction by the subspace rows.
  q.proj = Mat(f, k, ambient);
  std::vector<size_t> pos(ambient, SIZE_MAX);
  for (size_t t = 0; t < k; ++t) pos[q.complement[t]] = t;
  for (size_t j = 0; j < ambient; ++j) {
    if (pos[j] != SIZE_MAX) {
      q.proj.set_int(pos[j], j, 1);
      continue;
    }
    // e_j at a pivot: subtract the row with that pivot, leaving -row entries
    size_t row = std::find(q.pivots.begin(), q.pivots.end(), j) - q.pivots.begin();
    for (size_t t = 0; t < k; ++t) {
      size_t c = q.complement[t];
      if (!q.reduced.entry_is_zero(row, c)) q.proj.set(t, j, -q.reduced.at(row, c));
    }
  }
  return q;
}

Mat change_field(const Mat& m, const FieldPtr& target) {
  if (same_field(m.field(), target)) return m;
  Mat r(target, m.rows(), m.cols());
  const FieldPtr& src = m.field();
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      if (src->is_rational()) {
        if (target->is_rational())
          r.rat(i, j) = m.rat(i, j);
        else
          r.set_raw(i, j, target->from_rational(m.rat(i, j)));
      } else {
        if (target->is_rational() || target->characteristic() != src->characteristic() || src->degree() != 1)
          throw FieldMismatch("unsupported field change " + src->spec().name() + " -> " + target->spec().name());
        r.set_raw(i, j, m.raw(i, j));
      }
    }
  return r;
}

void for_each_subspace(const FieldPtr& f, size_t ambient, size_t dim, const std::function<bool(const Mat&)>& fn) {
  if (!f->is_finite()) throw InfiniteField("subspaces of a vector space over Q cannot be enumerated");
  if (dim > ambient) throw DimensionMismatch("subspace dimension exceeds ambient dimension");
  const uint64_t q = f->order();
  std::vector<size_t> piv(dim);
  for (size_t i = 0; i < dim; ++i) piv[i] = i;
  while (true) {
    // free positions: (row i, col c) with c > piv[i] and c not a pivot
    std::vector<bool> is_pivot(ambient, false);
    for (size_t c : piv) is_pivot[c] = true;
    std::vector<std::pair<size_t, size_t>> free;
    for (size_t i = 0; i < dim; ++i)
      for (size_t c = piv[i] + 1; c < ambient; ++c)
        if (!is_pivot[c]) free.emplace_back(i, c);
    Mat m(f, dim, ambient);
    for (size_t i = 0; i < dim; ++i) m.set_raw(i, piv[i], 1);
    std::vector<uint32_t> odo(free.size(), 0);
    while (true) {
      for (size_t t = 0; t < free.size(); ++t) m.set_raw(free[t].first, free[t].second, odo[t]);
      if (!fn(m)) return;
      bool wrapped = true;
      for (size_t s = free.size(); s-- > 0;) {
        if (++odo[s] < q) {
          wrapped = false;
          break;
        }
        odo[s] = 0;
      }
      if (wrapped) break;
    }
    // next pivot combination in lexicographic order
    if (dim == 0) return;
    size_t i = dim;
    while (i > 0 && piv[i - 1] == ambient - dim + (i - 1)) --i;
    if (i == 0) return;
    ++piv[i - 1];
    for (size_t j = i; j < dim; ++j) piv[j] = piv[j - 1] + 1;
  }
}

std::vector<Mat> enumerate_subspaces(const FieldPtr& f, size_t ambient, size_t dim) {
  std::vector<Mat> out;
  for_each_subspace(f, ambient, dim, [&](const Mat& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

mpz_class gaussian_binomial(uint64_t q, size_t n, size_t k) {
  if (k > n) return 0;
  mpz_class num = 1, den = 1, Q = static_cast<unsigned long>(q);
  for (size_t i = 0; i < k; ++i) {
    mpz_class a, b;
    mpz_pow_ui(a.get_mpz_t(), Q.get_mpz_t(), n - i);
    mpz_pow_ui(b.get_mpz_t(), Q.get_mpz_t(), i + 1);
    num *= a - 1;
    den *= b - 1;
  }
  return num / den;
}

}  // namespace ks
