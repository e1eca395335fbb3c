#include "kronsheaf/kron.hpp"

#include <numeric>

#include "kronsheaf/errors.hpp"

namespace ks {

namespace {

// Fixed stream for the internal randomized search so verdicts are reproducible.
constexpr uint64_t kSearchSeed = 0x6b726f6e;

Mat frobenius(const Mat& m) {
  Mat r(m.field(), m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) r.set_raw(i, j, m.field()->frobenius(m.raw(i, j)));
  return r;
}

bool invertible(const Mat& m) { return m.rows() == 0 || !det(m).is_zero(); }

Mat random_mat(const FieldPtr& f, size_t r, size_t c, Rng& rng) {
  Mat m(f, r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) {
      if (f->is_finite())
        m.set_raw(i, j, static_cast<uint32_t>(rng.below(f->order())));
      else
        m.set_int(i, j, static_cast<long long>(rng.below(uint64_t{1} << 17)) - (1 << 16));
    }
  return m;
}

Mat random_invertible(const FieldPtr& f, size_t n, Rng& rng) {
  while (true) {
    Mat m = random_mat(f, n, n, rng);
    if (invertible(m)) return m;
  }
}

uint64_t subspace_total(const FieldPtr& f, size_t n, uint64_t cap) {
  mpz_class total = 0;
  for (size_t k = 1; k <= n; ++k) {
    total += gaussian_binomial(f->order(), n, k);
    if (total > cap) return cap + 1;
  }
  return total.get_ui();
}

void require_finite(const KroneckerModule& m) {
  if (!m.field->is_finite()) throw InfiniteField("subspace tests need a finite field; use theta detection over Q");
}

// Brings two fields to a common one: equal, or a prime field and an extension of it.
FieldPtr common_field(const FieldPtr& x, const FieldPtr& y) {
  if (same_field(x, y)) return x;
  if (x->is_finite() && y->is_finite() && x->characteristic() == y->characteristic()) {
    if (x->degree() == 1) return y;
    if (y->degree() == 1) return x;
  }
  if (x->is_rational() && y->is_finite() && y->degree() == 1) return y;
  throw FieldMismatch("no common field for " + x->spec().name() + " and " + y->spec().name());
}

struct Step {
  Submodule sub;  // in the coordinates of the current quotient
  KroneckerModule factor;
};

// Smallest nonzero saturated submodule of the same slope, first in enumeration order.
Step minimal_equal_slope(const KroneckerModule& m, const Mat& basis_change, uint64_t limit) {
  if (subspace_total(m.field, m.a, limit) > limit)
    throw BudgetExhausted("more than " + std::to_string(limit) + " subspaces of V to enumerate");
  std::optional<Mat> found;
  for (size_t k = 1; k <= m.a && !found; ++k)
    for_each_subspace(m.field, m.a, k, [&](const Mat& rows) {
      Mat v = basis_change * rows.transpose();
      if (violation(m, v) == 0) {
        found = v;
        return false;
      }
      return true;
    });
  Step s;
  s.sub.V = col_basis(*found);
  s.sub.W = saturate(m, s.sub.V);
  s.factor = sub_module(m, s.sub);
  return s;
}

struct Filtration {
  SFiltration filt;
  std::vector<KroneckerModule> factors;
};

Filtration filtration(const KroneckerModule& m, uint64_t order_seed, uint64_t limit) {
  if (is_semistable(m).verdict != Verdict::Semistable) throw NotSemistable("S-filtrations need a semistable module");
  Filtration out;
  const FieldPtr& f = m.field;
  Mat sv(f, m.a, 0), sw(f, m.b, 0);
  if (m.a == 0 || m.b == 0) {
    // one simple factor per basis vector
    const size_t n = m.a + m.b;
    for (size_t i = 0; i < n; ++i) {
      Mat e = Mat::identity(f, n).block(0, 0, n, i + 1);
      Submodule s{m.a ? e : Mat(f, 0, 0), m.b ? e : Mat(f, 0, 0)};
      out.filt.chain.push_back(s);
      out.factors.push_back(KroneckerModule::zero_action(f, m.a ? 1 : 0, m.b ? 1 : 0, m.dimH()));
    }
    return out;
  }
  KroneckerModule q = m;
  Mat lv = Mat::identity(f, m.a), lw = Mat::identity(f, m.b);
  Rng rng(order_seed);
  while (sv.cols() < m.a) {
    Mat change = order_seed ? random_invertible(f, q.a, rng) : Mat::identity(f, q.a);
    Step st = minimal_equal_slope(q, change, limit);
    sv = col_basis(Mat::hstack({sv, lv * st.sub.V}, f, m.a));
    sw = col_basis(Mat::hstack({sw, lw * st.sub.W}, f, m.b));
    out.filt.chain.push_back({sv, sw});
    out.factors.push_back(st.factor);
    Quotient qv = quotient_by(st.sub.V, q.a, f), qw = quotient_by(st.sub.W, q.b, f);
    KroneckerModule next{f, qv.complement.size(), qw.complement.size(), {}};
    for (const Mat& al : q.action) next.action.push_back(qw.proj * al * qv.lift);
    lv = lv * qv.lift;
    lw = lw * qw.lift;
    q = std::move(next);
  }
  return out;
}

// Second Wong sequence for the theta matrix A of gamma on m.  Returns the
// limit subspace V'' when the sequence certifies that A has maximal rank in
// the blown-up matrix space, in which case V'' maximizes the violation.
std::optional<Mat> wong_destabilizer(const KroneckerModule& m, const ThetaShape& g, const Mat& a) {
  const FieldPtr& f = a.field();
  const size_t n1 = a.rows(), n0 = a.cols();
  Mat wp(f, m.b, 0), vpp(f, m.a, 0);
  auto blow_up = [&](const Mat& w) {
    Mat t(f, n1, g.u1 * w.cols());
    for (size_t j = 0; j < g.u1; ++j) t.set_block(j * m.b, j * w.cols(), w);
    return t;
  };
  while (true) {
    Mat t = blow_up(wp);
    Quotient qt = quotient_by(t, n1, f);
    Mat p = qt.proj * a;
    Mat u = p.rows() ? kernel_basis(p) : Mat::identity(f, n0);
    std::vector<Mat> cols;
    for (size_t c = 0; c < u.cols(); ++c)
      for (size_t j = 0; j < g.u0; ++j) cols.push_back(u.block(j * m.a, c, m.a, 1));
    vpp = col_basis(Mat::hstack(cols, f, m.a));
    Mat wn = saturate(m, vpp);
    if (wn.cols() == wp.cols()) break;
    wp = wn;
  }
  Mat t = blow_up(wp);
  if (rank(Mat::hstack({a, t}, f, n1)) != rank(a)) return std::nullopt;
  return vpp;
}

// Sum of the Frobenius conjugates of a subspace over F_{p^e}, returned over F_p.
std::optional<Mat> galois_descent(const Mat& v, const FieldPtr& base) {
  const FieldPtr& f = v.field();
  Mat c = col_basis(v);
  while (true) {
    Mat next = col_basis(Mat::hstack({c, frobenius(c)}, f, c.rows()));
    if (next.cols() == c.cols()) break;
    c = next;
  }
  Rref rr = rref(c.transpose());
  Mat out(base, c.rows(), rr.pivots.size());
  for (size_t i = 0; i < rr.pivots.size(); ++i)
    for (size_t j = 0; j < c.rows(); ++j) {
      uint32_t x = rr.rows.raw(i, j);
      if (!f->in_prime_subfield(x)) return std::nullopt;
      out.set_raw(j, i, x);
    }
  return out;
}

}  // namespace

SemistabilityResult is_semistable_search(const KroneckerModule& m) {
  require_finite(m);
  if (m.a == 0 || m.b == 0) {
    SemistabilityResult r;
    r.verdict = Verdict::Semistable;
    r.enumerated = false;
    return r;
  }
  const size_t g = std::gcd(m.a, m.b);
  const size_t bu = m.b / g, au = m.a / g;
  const int kmax = static_cast<int>((m.a + bu - 1) / bu) + 2;
  constexpr int kTries = 4;
  for (int k = 1; k <= kmax; ++k) {
    const size_t u0 = k * bu, u1 = k * au;
    FieldPtr s = sampling_field(m.field, m.a * u0, kTries);
    KroneckerModule ms = change_field(m, s);
    Rng rng(derive_seed(kSearchSeed, static_cast<uint64_t>(k)));
    for (int t = 0; t < kTries; ++t) {
      ThetaShape gam = random_shape(s, u0, u1, m.dimH(), rng);
      Mat a = theta_matrix(gam, ms);
      if (rank(a) == a.rows()) {
        SemistabilityResult r;
        r.verdict = Verdict::Semistable;
        r.gamma = gam;
        r.enumerated = false;
        return r;
      }
      std::optional<Mat> v = wong_destabilizer(ms, gam, a);
      if (!v) continue;
      std::optional<Mat> vb = same_field(s, m.field) ? std::optional<Mat>(*v) : galois_descent(*v, m.field);
      if (!vb || violation(m, *vb) <= 0) continue;
      SemistabilityResult r;
      r.verdict = Verdict::Unstable;
      r.witness = Submodule{*vb, saturate(m, *vb)};
      r.enumerated = false;
      return r;
    }
  }
  throw BudgetExhausted("randomized semistability search found no certificate");
}

// ---------------------------------------------------------------- modules

void KroneckerModule::validate() const {
  if (action.empty()) throw DimensionMismatch("a Kronecker module needs dimH >= 1");
  for (const Mat& al : action) {
    if (al.rows() != b || al.cols() != a) throw DimensionMismatch("action matrix is not b x a");
    if (!same_field(al.field(), field)) throw FieldMismatch("action matrix over a different field");
  }
}

KroneckerModule KroneckerModule::zero_action(FieldPtr f, size_t a, size_t b, size_t dimH) {
  KroneckerModule m{f, a, b, {}};
  for (size_t k = 0; k < dimH; ++k) m.action.emplace_back(f, b, a);
  return m;
}

bool KroneckerModule::operator==(const KroneckerModule& o) const {
  return same_field(field, o.field) && a == o.a && b == o.b && action == o.action;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Semistable: return "semistable";
    case Verdict::Unstable: return "unstable";
    default: return "inconclusive";
  }
}

KroneckerModule direct_sum(const KroneckerModule& m, const KroneckerModule& n) {
  if (!same_field(m.field, n.field)) throw FieldMismatch("direct sum over different fields");
  if (m.dimH() != n.dimH()) throw DimHMismatch("direct sum with different dimH");
  KroneckerModule s{m.field, m.a + n.a, m.b + n.b, {}};
  for (size_t k = 0; k < m.dimH(); ++k) {
    Mat al(m.field, s.b, s.a);
    al.set_block(0, 0, m.action[k]);
    al.set_block(m.b, m.a, n.action[k]);
    s.action.push_back(std::move(al));
  }
  return s;
}

KroneckerModule change_field(const KroneckerModule& m, const FieldPtr& target) {
  if (same_field(m.field, target)) return m;
  KroneckerModule r{target, m.a, m.b, {}};
  for (const Mat& al : m.action) r.action.push_back(change_field(al, target));
  return r;
}

Mat saturate(const KroneckerModule& m, const Mat& vsub) {
  if (vsub.rows() != m.a) throw DimensionMismatch("subspace does not live in V");
  if (vsub.cols() == 0) return Mat(m.field, m.b, 0);
  std::vector<Mat> parts;
  for (const Mat& al : m.action) parts.push_back(al * vsub);
  return col_basis(Mat::hstack(parts, m.field, m.b));
}

bool is_submodule(const KroneckerModule& m, const Submodule& s) {
  if (s.V.rows() != m.a || s.W.rows() != m.b) return false;
  const size_t rw = rank(s.W);
  for (const Mat& al : m.action)
    if (rank(Mat::hstack({s.W, al * s.V}, m.field, m.b)) != rw) return false;
  return true;
}

KroneckerModule sub_module(const KroneckerModule& m, const Submodule& s) {
  KroneckerModule r{m.field, s.V.cols(), s.W.cols(), {}};
  for (const Mat& al : m.action) {
    std::optional<Mat> x = s.W.cols() ? solve(s.W, al * s.V)
                                      : ((al * s.V).is_zero() ? std::optional<Mat>(Mat(m.field, 0, s.V.cols())) : std::nullopt);
    if (!x) throw DimensionMismatch("subspaces do not form a submodule");
    r.action.push_back(std::move(*x));
  }
  return r;
}

KroneckerModule quotient_module(const KroneckerModule& m, const Submodule& s) {
  if (!is_submodule(m, s)) throw DimensionMismatch("subspaces do not form a submodule");
  Quotient qv = quotient_by(s.V, m.a, m.field), qw = quotient_by(s.W, m.b, m.field);
  KroneckerModule r{m.field, qv.complement.size(), qw.complement.size(), {}};
  for (const Mat& al : m.action) r.action.push_back(qw.proj * al * qv.lift);
  return r;
}

Ordering slope_cmp(size_t v1, size_t w1, size_t v2, size_t w2) {
  if ((v1 == 0 && w1 == 0) || (v2 == 0 && w2 == 0)) throw EmptySubmodule("slope of the zero submodule");
  // v1/w1 vs v2/w2 by cross multiplication; w = 0 is +inf
  const uint64_t l = uint64_t{v1} * w2, r = uint64_t{v2} * w1;
  if (w1 == 0 && w2 == 0) return Ordering::Equal;
  if (l < r) return Ordering::Less;
  if (l > r) return Ordering::Greater;
  return Ordering::Equal;
}

long long violation(const KroneckerModule& m, const Mat& vsub) {
  return static_cast<long long>(m.b * rank(vsub)) - static_cast<long long>(m.a * saturate(m, vsub).cols());
}

// ---------------------------------------------------------------- semistability

SemistabilityResult is_semistable_enumerate(const KroneckerModule& m, uint64_t limit) {
  require_finite(m);
  if (subspace_total(m.field, m.a, limit) > limit)
    throw BudgetExhausted("more than " + std::to_string(limit) + " subspaces of V to enumerate");
  long long best = 0;
  std::optional<Mat> arg;
  for (size_t k = 1; k <= m.a; ++k)
    for_each_subspace(m.field, m.a, k, [&](const Mat& rows) {
      Mat v = rows.transpose();
      long long h = static_cast<long long>(m.b * k) - static_cast<long long>(m.a * saturate(m, v).cols());
      if (h > best) {
        best = h;
        arg = v;
      }
      return true;
    });
  SemistabilityResult r;
  r.verdict = arg ? Verdict::Unstable : Verdict::Semistable;
  if (arg) r.witness = Submodule{*arg, saturate(m, *arg)};
  return r;
}

SemistabilityResult is_semistable(const KroneckerModule& m) {
  require_finite(m);
  m.validate();
  if (subspace_total(m.field, m.a, kEnumerationLimit) <= kEnumerationLimit) return is_semistable_enumerate(m);
  return is_semistable_search(m);
}

bool is_stable(const KroneckerModule& m, uint64_t limit) {
  if (m.a == 0) return m.b == 1;
  if (m.b == 0) return m.a == 1;
  require_finite(m);
  if (subspace_total(m.field, m.a, limit) > limit)
    throw BudgetExhausted("more than " + std::to_string(limit) + " subspaces of V to enumerate");
  bool stable = true;
  for (size_t k = 1; k <= m.a && stable; ++k)
    for_each_subspace(m.field, m.a, k, [&](const Mat& rows) {
      long long h = violation(m, rows.transpose());
      if (h > 0 || (h == 0 && k < m.a)) stable = false;
      return stable;
    });
  return stable;
}

SFiltration s_filtration(const KroneckerModule& m, uint64_t order_seed, uint64_t limit) {
  return filtration(m, order_seed, limit).filt;
}

std::vector<KroneckerModule> gr(const KroneckerModule& m, uint64_t order_seed, uint64_t limit) {
  return filtration(m, order_seed, limit).factors;
}

// ---------------------------------------------------------------- homomorphisms

std::vector<ModuleMap> hom_space(const KroneckerModule& m, const KroneckerModule& n) {
  if (!same_field(m.field, n.field)) throw FieldMismatch("Hom between modules over different fields");
  if (m.dimH() != n.dimH()) throw DimHMismatch("Hom between modules with different dimH");
  const FieldPtr& f = m.field;
  const size_t nf = n.a * m.a, ng = n.b * m.b, rows = n.b * m.a;
  std::vector<Mat> blocks;
  for (size_t k = 0; k < m.dimH(); ++k) {
    Mat eq(f, rows, nf + ng);
    eq.set_block(0, 0, Mat::kron(Mat::identity(f, m.a), n.action[k]).scaled(Scalar::from_int(f, -1)));
    eq.set_block(0, nf, Mat::kron(m.action[k].transpose(), Mat::identity(f, n.b)));
    blocks.push_back(std::move(eq));
  }
  Mat sys = Mat::vstack(blocks, f, nf + ng);
  Mat ker = sys.rows() ? kernel_basis(sys) : Mat::identity(f, nf + ng);
  std::vector<ModuleMap> out;
  for (size_t c = 0; c < ker.cols(); ++c) {
    ModuleMap mm{Mat(f, n.a, m.a), Mat(f, n.b, m.b)};
    for (size_t j = 0; j < m.a; ++j)
      for (size_t i = 0; i < n.a; ++i) mm.f.set(i, j, ker.at(j * n.a + i, c));
    for (size_t j = 0; j < m.b; ++j)
      for (size_t i = 0; i < n.b; ++i) mm.g.set(i, j, ker.at(nf + j * n.b + i, c));
    out.push_back(std::move(mm));
  }
  return out;
}

bool is_isomorphic(const KroneckerModule& m, const KroneckerModule& n, uint64_t budget, uint64_t seed) {
  std::vector<ModuleMap> h = hom_space(m, n);
  if (m.a != n.a || m.b != n.b) return false;
  if (m.a + m.b == 0) return true;
  // Hom(M, N) = End(M) and Hom(N, M) = End(N) whenever M = N
  if (h.size() != hom_space(m, m).size() || hom_space(n, m).size() != hom_space(n, n).size()) return false;
  if (h.empty()) return false;
  const FieldPtr& f = m.field;
  auto combination = [&](const std::vector<Mat>& fs, const std::vector<Mat>& gs, const std::vector<Scalar>& c) {
    Mat x(c[0].field(), m.a, m.a), y(c[0].field(), m.b, m.b);
    for (size_t i = 0; i < c.size(); ++i) {
      x = x + fs[i].scaled(c[i]);
      y = y + gs[i].scaled(c[i]);
    }
    return invertible(x) && invertible(y);
  };
  std::vector<Mat> fs, gs;
  for (const auto& mm : h) {
    fs.push_back(mm.f);
    gs.push_back(mm.g);
  }
  // Exhaustive over the Hom space when it is small enough.
  if (f->is_finite()) {
    mpz_class total;
    mpz_ui_pow_ui(total.get_mpz_t(), f->order(), h.size());
    if (total <= budget) {
      std::vector<uint32_t> digits(h.size(), 0);
      while (true) {
        size_t t = 0;
        while (t < digits.size() && ++digits[t] == f->order()) digits[t++] = 0;
        if (t == digits.size()) return false;
        std::vector<Scalar> c;
        for (uint32_t d : digits) c.push_back(Scalar::from_raw(f, d));
        if (combination(fs, gs, c)) return true;
      }
    }
  }
  // Sampling over an extension; an isomorphism there descends (Noether-Deuring).
  FieldPtr s = sampling_field(f, m.a + m.b, budget);
  std::vector<Mat> fs2, gs2;
  for (size_t i = 0; i < h.size(); ++i) {
    fs2.push_back(change_field(fs[i], s));
    gs2.push_back(change_field(gs[i], s));
  }
  Rng rng(seed);
  for (uint64_t t = 0; t < budget; ++t) {
    Mat c = random_mat(s, h.size(), 1, rng);
    std::vector<Scalar> cs;
    for (size_t i = 0; i < h.size(); ++i) cs.push_back(c.at(i, 0));
    if (combination(fs2, gs2, cs)) return true;
  }
  throw BudgetExhausted("no invertible homomorphism found within budget " + std::to_string(budget));
}

bool s_equivalent(const KroneckerModule& m, const KroneckerModule& n, uint64_t budget, uint64_t seed) {
  std::vector<KroneckerModule> gm = gr(m), gn = gr(n);
  if (gm.size() != gn.size()) return false;
  std::vector<bool> used(gn.size(), false);
  uint64_t stream = 0;
  for (const auto& x : gm) {
    bool matched = false;
    for (size_t j = 0; j < gn.size() && !matched; ++j) {
      if (used[j] || x.a != gn[j].a || x.b != gn[j].b) continue;
      if (is_isomorphic(x, gn[j], budget, derive_seed(seed, stream++))) used[j] = matched = true;
    }
    if (!matched) return false;
  }
  return true;
}

// ---------------------------------------------------------------- theta

Mat theta_matrix(const ThetaShape& gamma, const KroneckerModule& m) {
  if (gamma.G.size() != m.dimH()) throw DimHMismatch("gamma has " + std::to_string(gamma.G.size()) + " components, module has dimH " + std::to_string(m.dimH()));
  if (m.a * gamma.u0 != m.b * gamma.u1)
    throw WeightMismatch("weight condition a*u0 = b*u1 fails: " + std::to_string(m.a * gamma.u0) + " != " + std::to_string(m.b * gamma.u1));
  FieldPtr f = m.field;
  for (const Mat& gk : gamma.G) {
    if (gk.rows() != gamma.u0 || gk.cols() != gamma.u1) throw DimensionMismatch("gamma component is not u0 x u1");
    f = common_field(f, gk.field());
  }
  Mat t(f, m.b * gamma.u1, m.a * gamma.u0);
  for (size_t k = 0; k < m.dimH(); ++k)
    t = t + Mat::kron(change_field(gamma.G[k], f).transpose(), change_field(m.action[k], f));
  return t;
}

Scalar theta_gamma(const ThetaShape& gamma, const KroneckerModule& m) {
  Mat t = theta_matrix(gamma, m);
  if (t.rows() == 0) return Scalar::from_int(t.field(), 1);
  return det(t);
}

FieldPtr sampling_field(const FieldPtr& base, uint64_t deg, uint64_t budget) {
  if (!base->is_finite() || base->degree() != 1 || deg == 0) return base;
  const uint32_t p = base->characteristic();
  // smallest p^e with p^e >= 4 deg and (deg / p^e)^budget <= 2^-20
  mpz_class need;
  mpz_ui_pow_ui(need.get_mpz_t(), deg, budget);
  need <<= 20;
  uint32_t e = 1;
  uint64_t q = p;
  while (q * p <= Field::kMaxOrder) {
    mpz_class qb;
    mpz_ui_pow_ui(qb.get_mpz_t(), q, budget);
    if (q >= 4 * deg && qb >= need) break;
    q *= p;
    ++e;
  }
  return e == 1 ? base : Field::make(FieldSpec::extension(p, e));
}

ThetaShape random_shape(const FieldPtr& f, size_t u0, size_t u1, size_t dimH, Rng& rng) {
  ThetaShape g{u0, u1, {}};
  for (size_t k = 0; k < dimH; ++k) g.G.push_back(random_mat(f, u0, u1, rng));
  return g;
}

SemistabilityResult detect_ss_theta(const KroneckerModule& m, uint64_t budget, int max_power, uint64_t seed) {
  m.validate();
  SemistabilityResult r;
  r.enumerated = false;
  const size_t g = std::gcd(m.a, m.b);
  if (g == 0) {
    r.verdict = Verdict::Semistable;
    r.gamma = ThetaShape{0, 0, std::vector<Mat>(m.dimH(), Mat(m.field, 0, 0))};
    return r;
  }
  for (int k = 1; k <= max_power; ++k) {
    const size_t u0 = k * m.b / g, u1 = k * m.a / g;
    FieldPtr s = sampling_field(m.field, m.a * u0, budget);
    KroneckerModule ms = change_field(m, s);
    Rng rng(derive_seed(seed, static_cast<uint64_t>(k)));
    for (uint64_t t = 0; t < budget; ++t) {
      ThetaShape gam = random_shape(s, u0, u1, m.dimH(), rng);
      if (!theta_gamma(gam, ms).is_zero()) {
        r.verdict = Verdict::Semistable;
        r.gamma = std::move(gam);
        return r;
      }
    }
  }
  r.verdict = Verdict::Inconclusive;
  return r;
}

std::vector<PrimeVerdict> semistable_mod_primes(const KroneckerModule& m, const std::vector<uint32_t>& primes) {
  std::vector<PrimeVerdict> out;
  for (uint32_t p : primes) {
    Verdict v = Verdict::Inconclusive;
    try {
      v = is_semistable(change_field(m, Field::prime(p))).verdict;
    } catch (const std::domain_error&) {
      // a denominator vanishes mod p
    } catch (const BudgetExhausted&) {
    }
    out.push_back({p, v});
  }
  return out;
}

}  // namespace ks
