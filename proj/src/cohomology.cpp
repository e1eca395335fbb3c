#include "kronsheaf/cohomology.hpp"

#include <algorithm>

#include "kronsheaf/errors.hpp"

namespace ks {

Resolution ResolutionCache::get(const Presentation& m, int cap) {
  const std::string key = m.key() + "#" + std::to_string(cap);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
  }
  Resolution res = free_resolution(m, cap);
  std::lock_guard<std::mutex> lock(mu_);
  entries_.emplace(key, res);
  return res;
}

size_t ResolutionCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

Resolution resolve(const Presentation& m, const GradedOptions& opts) {
  return opts.cache ? opts.cache->get(m, opts.degree_cap) : free_resolution(m, opts.degree_cap);
}

namespace {

FreeModule dual_module(const FreeModule& f, int shift) {
  FreeModule d{f.num_vars, {}};
  for (int a : f.degrees) d.degrees.push_back(shift - a);
  return d;
}

// Cap used for computations on the dual complex: covers the spread of the
// dual degrees with room for two certification windows.
int dual_cap(const Resolution& res) {
  const int r = res.num_vars - 1;
  int lo = 0, hi = 0;
  bool any = false;
  for (const auto& f : res.modules)
    for (int a : f.degrees) {
      int b = r + 1 - a;
      lo = any ? std::min(lo, b) : b;
      hi = any ? std::max(hi, b) : b;
      any = true;
    }
  return hi + (hi - lo) + 2 * (r + 2);
}

GradedMap identity_map(const FieldPtr& f, const FreeModule& m) {
  GradedMap id = GradedMap::zero(f, m, m);
  for (size_t i = 0; i < m.rank(); ++i) id.entries[i][i] = Form::constant(f, m.num_vars, Scalar::from_int(f, 1));
  return id;
}

}  // namespace

size_t ext_dim(const Resolution& res, int q, int d) {
  const int s = static_cast<int>(res.length());
  if (q < 0 || q > s) return 0;
  const int shift = res.num_vars;  // r + 1
  size_t dim = free_piece_dim(dual_module(res.modules[q], shift), d);
  if (dim == 0) return 0;
  if (q < s) dim -= rank(map_degree_matrix(res.maps[q].transpose_dual(shift), d));
  if (q >= 1) dim -= rank(map_degree_matrix(res.maps[q - 1].transpose_dual(shift), d));
  return dim;
}

size_t sheaf_cohomology(const Resolution& res, const Presentation& m, int i, int n) {
  const int r = m.r();
  if (i < 0 || i > r) throw PreconditionFailed("cohomological degree " + std::to_string(i) + " outside 0.." + std::to_string(r));
  if (i >= 1) return ext_dim(res, r - i, -n);
  return piece(m, n).dim - ext_dim(res, r + 1, -n) + ext_dim(res, r, -n);
}

size_t sheaf_cohomology(const Presentation& m, int i, int n, const GradedOptions& opts) {
  return sheaf_cohomology(resolve(m, opts), m, i, n);
}

bool is_n_regular(const Resolution& res, const Presentation& m, int n) {
  for (int i = 1; i <= m.r(); ++i)
    if (sheaf_cohomology(res, m, i, n - i) != 0) return false;
  return true;
}

bool is_n_regular(const Presentation& m, int n, const GradedOptions& opts) { return is_n_regular(resolve(m, opts), m, n); }

Presentation ext_module(const Resolution& res, int q) {
  const FieldPtr& f = res.field;
  const int nv = res.num_vars;
  const int s = static_cast<int>(res.length());
  if (q < 0 || q > s) return Presentation::free(f, nv, {});
  const int shift = nv;
  const int cap = dual_cap(res);
  const FreeModule fq = dual_module(res.modules[q], shift);

  // cycles Z = ker(F_q^v -> F_{q+1}^v)
  GradedMap z;
  if (q < s) {
    KernelGens kg = kernel_generators(res.maps[q].transpose_dual(shift), cap);
    if (!kg.certified) throw ResolutionIncomplete("cycles of the dual complex not certified below " + std::to_string(cap));
    z = std::move(kg.gens);
  } else {
    z = identity_map(f, fq);
  }
  const FreeModule& gz = z.source;

  GradedMap rel;
  rel.field = f;
  rel.target = gz;
  rel.source.num_vars = nv;
  rel.entries.assign(gz.rank(), {});
  auto push_column = [&](int deg, const Mat& x) {
    rel.source.degrees.push_back(deg);
    std::vector<Form> col = vector_to_forms(f, gz, x, deg);
    for (size_t i = 0; i < gz.rank(); ++i) rel.entries[i].push_back(std::move(col[i]));
  };

  // boundaries, lifted into the generators of Z
  if (q >= 1) {
    GradedMap prev = res.maps[q - 1].transpose_dual(shift);
    for (size_t j = 0; j < prev.source.rank(); ++j) {
      const int e = prev.source.degrees[j];
      std::vector<Form> col;
      for (size_t i = 0; i < prev.target.rank(); ++i) col.push_back(prev.entries[i][j]);
      Mat v = forms_to_vector(f, fq, col, e);
      Mat ze = map_degree_matrix(z, e);
      std::optional<Mat> x = ze.cols() ? solve(ze, v) : (v.is_zero() ? std::optional<Mat>(Mat(f, 0, 1)) : std::nullopt);
      if (!x) throw ResolutionIncomplete("boundary of the dual complex is not a cycle in degree " + std::to_string(e));
      push_column(e, *x);
    }
  }
  // relations among the generators of Z
  KernelGens zrel = kernel_generators(z, cap);
  if (!zrel.certified) throw ResolutionIncomplete("relations among dual cycles not certified below " + std::to_string(cap));
  for (size_t j = 0; j < zrel.gens.source.rank(); ++j) {
    rel.source.degrees.push_back(zrel.gens.source.degrees[j]);
    for (size_t i = 0; i < gz.rank(); ++i) rel.entries[i].push_back(zrel.gens.entries[i][j]);
  }
  Presentation out;
  out.map = std::move(rel);
  return out;
}

bool is_pure(const Presentation& m, const GradedOptions& opts) {
  Resolution res = resolve(m, opts);
  HilbPoly hp = hilbert_polynomial(res);
  if (hp.is_zero()) throw PreconditionFailed("purity is undefined for the zero sheaf");
  const int r = m.r();
  const int c = r - hp.degree();
  for (int q = c + 1; q <= static_cast<int>(res.length()); ++q) {
    Presentation e = ext_module(res, q);
    if (e.gen_degrees().empty()) continue;
    int cap = std::max(minimal_cap(e), dual_cap(res)) + r + 2;
    if (hilbert_polynomial(e, cap).degree() > r - q - 1) return false;
  }
  return true;
}

Presentation submodule_presentation(const SubmoduleGens& g, int cap) {
  const Presentation& m = g.ambient;
  const FieldPtr& f = m.field();
  const int nv = m.num_vars();
  const FreeModule& f0 = m.map.target;
  FreeModule gmod{nv, {}};
  for (const auto& [e, coords] : g.elements) {
    if (e > cap - (m.r() + 2)) throw DegreeCapExceeded("generator degree " + std::to_string(e) + " too close to cap " + std::to_string(cap));
    gmod.degrees.push_back(e);
  }
  // [psi | phi] : G + F1 -> F0
  GradedMap both;
  both.field = f;
  both.target = f0;
  both.source.num_vars = nv;
  both.source.degrees = gmod.degrees;
  both.source.degrees.insert(both.source.degrees.end(), m.rel_degrees().begin(), m.rel_degrees().end());
  both.entries.assign(f0.rank(), {});
  for (const auto& [e, coords] : g.elements) {
    Piece pc = piece(m, e);
    if (coords.rows() != pc.dim || coords.cols() != 1)
      throw DimensionMismatch("generator coordinates have the wrong size for degree " + std::to_string(e));
    std::vector<Form> col = vector_to_forms(f, f0, pc.quotient.lift * coords, e);
    for (size_t i = 0; i < f0.rank(); ++i) both.entries[i].push_back(std::move(col[i]));
  }
  for (size_t i = 0; i < f0.rank(); ++i)
    both.entries[i].insert(both.entries[i].end(), m.map.entries[i].begin(), m.map.entries[i].end());

  KernelGens kg = kernel_generators(both, cap);
  if (!kg.certified) throw DegreeCapExceeded("relations of the generated submodule still appear near cap " + std::to_string(cap));
  Presentation out;
  out.map.field = f;
  out.map.target = gmod;
  out.map.source = kg.gens.source;
  out.map.entries.assign(gmod.rank(), {});
  for (size_t i = 0; i < gmod.rank(); ++i) out.map.entries[i] = kg.gens.entries[i];
  return out;
}

HilbPoly submodule_hp(const SubmoduleGens& g, int cap) {
  if (g.elements.empty()) return HilbPoly();
  Presentation p = submodule_presentation(g, cap);
  return hilbert_polynomial(p, std::max(cap, minimal_cap(p)));
}

}  // namespace ks
