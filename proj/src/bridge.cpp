#include "kronsheaf/bridge.hpp"

#include <algorithm>

#include "bridge_internal.hpp"
#include "kronsheaf/errors.hpp"

namespace ks {

void BridgeContext::validate() const {
  if (r < 1) throw PreconditionFailed("r must be at least 1");
  if (!field) throw PreconditionFailed("context has no field");
  if (m <= n) throw PreconditionFailed("need m > n, got n = " + std::to_string(n) + ", m = " + std::to_string(m));
}

namespace detail {

GradedOptions opts_for(const Presentation& p, const BridgeContext& ctx) {
  return {std::max(ctx.degree_cap, minimal_cap(p)), ctx.cache};
}

void check_sheaf(const Presentation& e, const BridgeContext& ctx) {
  ctx.validate();
  if (e.num_vars() != ctx.r + 1)
    throw VarMismatch("module lives on P^" + std::to_string(e.r()) + ", context on P^" + std::to_string(ctx.r));
  if (!same_field(e.field(), ctx.field)) throw FieldMismatch("module and context fields differ");
}

Mat piece_mult(const Presentation& m, const Piece& src, const Piece& dst, const Form& h) {
  const FieldPtr& f = m.field();
  Mat out(f, dst.dim, src.dim);
  for (size_t c = 0; c < src.dim; ++c) {
    Mat v = multiply_vector(m.map.target, src.quotient.lift.column(c), src.degree, h);
    out.set_block(0, c, dst.quotient.proj * v);
  }
  return out;
}

Mat block_diag(const Mat& x, size_t copies) {
  Mat out(x.field(), x.rows() * copies, x.cols() * copies);
  for (size_t t = 0; t < copies; ++t) out.set_block(t * x.rows(), t * x.cols(), x);
  return out;
}

Form monomial_form(const FieldPtr& f, const Exp& e) { return Form::monomial(f, e, Scalar::from_int(f, 1)); }

}  // namespace detail

namespace {

using detail::block_diag;
using detail::monomial_form;
using detail::piece_mult;

// Basis of Hom(m^k, M)_d inside the stacked coordinates.
Mat hom_from_power(const Presentation& m, int d, int k) {
  const FieldPtr& f = m.field();
  const int nv = m.num_vars();
  Piece lo = piece(m, d + k), hi = piece(m, d + k + 1);
  const std::vector<Exp> mus = monomial_basis(nv, k);
  const size_t p = lo.dim, q = hi.dim;
  if (k == 0) return Mat::identity(f, p);
  std::vector<Mat> xs;
  for (int j = 0; j < nv; ++j) xs.push_back(piece_mult(m, lo, hi, Form::variable(f, nv, j)));
  // x_j psi(mu) agrees for every (mu, j) with the same product
  std::vector<std::vector<std::pair<size_t, int>>> groups(monomial_count(nv, k + 1));
  for (size_t u = 0; u < mus.size(); ++u)
    for (int j = 0; j < nv; ++j) {
      Exp rho = mus[u];
      ++rho[j];
      groups[monomial_index(rho)].push_back({u, j});
    }
  std::vector<Mat> eqs;
  for (const auto& g : groups)
    for (size_t t = 1; t < g.size(); ++t) {
      Mat row(f, q, p * mus.size());
      row.set_block(0, g[t - 1].first * p, xs[g[t - 1].second]);
      row.set_block(0, g[t].first * p, xs[g[t].second].scaled(Scalar::from_int(f, -1)));
      eqs.push_back(row);
    }
  if (eqs.empty() || q == 0) return Mat::identity(f, p * mus.size());
  return kernel_basis(Mat::vstack(eqs, f, p * mus.size()));
}

}  // namespace

Sections global_sections(const Presentation& e, const BridgeContext& ctx) {
  detail::check_sheaf(e, ctx);
  const Resolution res = resolve(e, detail::opts_for(e, ctx));
  const int r = ctx.r;
  const size_t h0n = sheaf_cohomology(res, e, 0, ctx.n), h0m = sheaf_cohomology(res, e, 0, ctx.m);
  const int kmax = std::max(ctx.degree_cap, minimal_cap(e)) - ctx.n;
  for (int k = 0; k <= kmax; ++k) {
    // M_{d+k} must carry no torsion, so Hom(m^k, M)_d embeds into H^0(E(d))
    if (ext_dim(res, r + 1, -(ctx.n + k)) != 0 || ext_dim(res, r + 1, -(ctx.m + k)) != 0) continue;
    Mat bn = hom_from_power(e, ctx.n, k);
    if (bn.cols() != h0n) continue;
    Mat bm = hom_from_power(e, ctx.m, k);
    if (bm.cols() != h0m) continue;
    return Sections{e, ctx.n, ctx.m, k, std::move(bn), std::move(bm)};
  }
  throw DegreeCapExceeded("global sections not reached by Hom(m^k, M) below the cap");
}

Mat multiply_section(const Sections& s, const Mat& c, const Form& h) {
  const Presentation& m = s.module;
  if (h.degree() != s.m - s.n) throw DimensionMismatch("form degree must be m - n");
  Piece lo = piece(m, s.n + s.k), hi = piece(m, s.m + s.k);
  const size_t copies = monomial_count(m.num_vars(), s.k);
  Mat y = block_diag(piece_mult(m, lo, hi, h), copies) * (s.bn * c);
  if (s.b() == 0) return Mat(m.field(), 0, c.cols());
  std::optional<Mat> x = solve(s.bm, y);
  if (!x) throw std::logic_error("product of sections is not a section");
  return *x;
}

KroneckerModule phi(const Presentation& e, const BridgeContext& ctx) {
  detail::check_sheaf(e, ctx);
  if (!is_n_regular(e, ctx.n, detail::opts_for(e, ctx))) throw NotRegular("sheaf is not " + std::to_string(ctx.n) + "-regular");
  Sections s = global_sections(e, ctx);
  KroneckerModule out{e.field(), s.a(), s.b(), {}};
  const Mat id = Mat::identity(e.field(), s.a());
  for (const Exp& h : ctx.h_basis()) out.action.push_back(multiply_section(s, id, monomial_form(e.field(), h)));
  return out;
}

Presentation phi_dual(const KroneckerModule& mod, const BridgeContext& ctx) {
  ctx.validate();
  mod.validate();
  if (mod.dimH() != ctx.dimH())
    throw DimHMismatch("module has dimH " + std::to_string(mod.dimH()) + ", context needs " + std::to_string(ctx.dimH()));
  const FieldPtr& f = mod.field;
  const int nv = ctx.r + 1;
  const std::vector<Exp> hs = ctx.h_basis();
  GradedMap g;
  g.field = f;
  g.target = FreeModule{nv, {}};
  g.target.degrees.assign(mod.a, ctx.n);
  g.target.degrees.insert(g.target.degrees.end(), mod.b, ctx.m);
  g.source = FreeModule{nv, {}};
  g.entries.assign(mod.a + mod.b, {});
  for (size_t j = 0; j < mod.a; ++j)
    for (size_t k = 0; k < hs.size(); ++k) {
      g.source.degrees.push_back(ctx.m);
      for (size_t i = 0; i < mod.a; ++i)
        g.entries[i].push_back(i == j ? monomial_form(f, hs[k]) : Form(f, nv, ctx.m - ctx.n));
      for (size_t i = 0; i < mod.b; ++i)
        g.entries[mod.a + i].push_back(Form::constant(f, nv, -mod.action[k].at(i, j)));
    }
  Presentation p;
  p.map = std::move(g);
  return p;
}

CounitReport counit_check(const Presentation& e, const BridgeContext& ctx) {
  detail::check_sheaf(e, ctx);
  CounitReport rep;
  const GradedOptions opts = detail::opts_for(e, ctx);
  rep.hp_target = hilbert_polynomial(resolve(e, opts));
  rep.regular = is_n_regular(e, ctx.n, opts);
  if (!rep.regular) return rep;
  const KroneckerModule mod = phi(e, ctx);
  const Presentation back = phi_dual(mod, ctx);
  rep.hp_source = hilbert_polynomial(resolve(back, detail::opts_for(back, ctx)));

  // Surjectivity onto M_D for D past every generator degree; M_D then
  // generates the sheaf.
  const Sections s = global_sections(e, ctx);
  const Resolution res = resolve(e, opts);
  const FieldPtr& f = e.field();
  const int nv = e.num_vars();
  int d = ctx.m + s.k;
  for (int g : e.gen_degrees()) d = std::max(d, g);
  while (ext_dim(res, ctx.r + 1, -d) != 0) ++d;
  rep.degree = d;
  const Piece target = piece(e, d);
  std::vector<Mat> images;
  auto add_images = [&](const Mat& basis, int deg) {
    const Piece src = piece(e, deg + s.k);
    const std::vector<Exp> mus = monomial_basis(nv, s.k);
    for (const Exp& mu : monomial_basis(nv, d - deg)) {
      // split mu = mu1 * mu2 with deg mu1 = k, taking the leading variables first
      Exp mu1(nv, 0), mu2 = mu;
      int left = s.k;
      for (int v = 0; v < nv && left > 0; ++v) {
        const int t = std::min(left, mu2[v]);
        mu1[v] += t;
        mu2[v] -= t;
        left -= t;
      }
      const size_t u = std::find(mus.begin(), mus.end(), mu1) - mus.begin();
      const Mat mult = piece_mult(e, src, target, monomial_form(f, mu2));
      for (size_t c = 0; c < basis.cols(); ++c) images.push_back(mult * basis.block(u * src.dim, c, src.dim, 1));
    }
  };
  add_images(s.bn, ctx.n);
  add_images(s.bm, ctx.m);
  const size_t rk = images.empty() ? 0 : rank(Mat::hstack(images, f, target.dim));
  rep.surjective = rk == target.dim;
  rep.iso = rep.surjective && rep.hp_source == rep.hp_target;
  return rep;
}

bool counit_is_iso(const Presentation& e, const BridgeContext& ctx) { return counit_check(e, ctx).iso; }

namespace {

// Coordinates in the section basis of the element x of (F0)_d, d in {n, m}.
Mat element_to_section(const Sections& s, const Mat& x, int d) {
  const Presentation& m = s.module;
  const Piece pc = piece(m, d + s.k);
  std::vector<Mat> blocks;
  for (const Exp& mu : monomial_basis(m.num_vars(), s.k))
    blocks.push_back(pc.quotient.proj * multiply_vector(m.map.target, x, d, monomial_form(m.field(), mu)));
  const Mat& basis = d == s.n ? s.bn : s.bm;
  Mat y = Mat::vstack(blocks, m.field(), 1);
  std::optional<Mat> c = solve(basis, y);
  if (!c) throw std::logic_error("element does not define a section");
  return *c;
}

}  // namespace

bool unit_is_iso(const KroneckerModule& mod, const BridgeContext& ctx) {
  const Presentation e = phi_dual(mod, ctx);
  BridgeContext c2 = ctx;
  c2.field = mod.field;
  if (!is_n_regular(e, ctx.n, detail::opts_for(e, c2))) return false;
  const Sections s = global_sections(e, c2);
  if (s.a() != mod.a || s.b() != mod.b) return false;
  const FreeModule& f0 = e.map.target;
  auto eta = [&](int d, size_t first, size_t count) {
    std::vector<size_t> off = free_piece_offsets(f0, d);
    std::vector<Mat> cols;
    for (size_t j = 0; j < count; ++j) {
      Mat x(mod.field, off.back(), 1);
      x.set_int(off[first + j], 0, 1);
      cols.push_back(element_to_section(s, x, d));
    }
    return Mat::hstack(cols, mod.field, d == ctx.n ? s.a() : s.b());
  };
  return rank(eta(ctx.n, 0, mod.a)) == mod.a && rank(eta(ctx.m, mod.a, mod.b)) == mod.b;
}

bool in_regular_image(const KroneckerModule& mod, const BridgeContext& ctx, const HilbPoly& p) {
  ctx.validate();
  if (p.eval(ctx.n) != static_cast<long>(mod.a) || p.eval(ctx.m) != static_cast<long>(mod.b))
    throw DimensionMismatch("dimension vector differs from (P(n), P(m))");
  const Presentation e = phi_dual(mod, ctx);
  BridgeContext c2 = ctx;
  c2.field = mod.field;
  if (hilbert_polynomial(resolve(e, detail::opts_for(e, c2))) != p) return false;
  return unit_is_iso(mod, ctx);
}

DeltaMap delta_from_gamma(const ThetaShape& g, const BridgeContext& ctx) {
  ctx.validate();
  if (g.G.size() != ctx.dimH()) throw DimHMismatch("gamma has " + std::to_string(g.G.size()) + " components");
  const std::vector<Exp> hs = ctx.h_basis();
  const FieldPtr f = g.G.empty() ? ctx.field : g.G[0].field();
  DeltaMap d{g.u0, g.u1, {}};
  d.entries.assign(g.u0, std::vector<Form>(g.u1, Form(f, ctx.r + 1, ctx.m - ctx.n)));
  for (size_t k = 0; k < hs.size(); ++k)
    for (size_t i = 0; i < g.u0; ++i)
      for (size_t j = 0; j < g.u1; ++j)
        if (!g.G[k].entry_is_zero(i, j)) d.entries[i][j].add_term(hs[k], g.G[k].at(i, j));
  return d;
}

ThetaShape gamma_from_delta(const DeltaMap& d, const BridgeContext& ctx) {
  ctx.validate();
  const std::vector<Exp> hs = ctx.h_basis();
  FieldPtr f = ctx.field;
  if (d.u0 && d.u1) f = d.entries[0][0].field();
  ThetaShape g{d.u0, d.u1, {}};
  for (size_t k = 0; k < hs.size(); ++k) g.G.emplace_back(f, d.u0, d.u1);
  for (size_t i = 0; i < d.u0; ++i)
    for (size_t j = 0; j < d.u1; ++j) {
      const Form& h = d.entries[i][j];
      if (h.degree() != ctx.m - ctx.n || h.num_vars() != ctx.r + 1)
        throw DimHMismatch("delta entries must be forms of degree m - n in r + 1 variables");
      for (size_t k = 0; k < hs.size(); ++k) g.G[k].set(i, j, h.coeff(hs[k]));
    }
  return g;
}

Mat theta_delta_matrix(const DeltaMap& d, const Presentation& e, const BridgeContext& ctx) {
  detail::check_sheaf(e, ctx);
  if (!is_n_regular(e, ctx.n, detail::opts_for(e, ctx))) throw NotRegular("sheaf is not " + std::to_string(ctx.n) + "-regular");
  const Sections s = global_sections(e, ctx);
  const size_t a = s.a(), b = s.b();
  if (a * d.u0 != b * d.u1)
    throw WeightMismatch("u0 h0(E(n)) = " + std::to_string(a * d.u0) + " but u1 h0(E(m)) = " + std::to_string(b * d.u1));
  FieldPtr f = e.field();
  if (d.u0 && d.u1) f = d.entries[0][0].field();
  const Mat id = Mat::identity(e.field(), a);
  std::vector<Mat> mono;  // only needed when delta lives over an extension
  if (!same_field(f, e.field()))
    for (const Exp& h : ctx.h_basis()) mono.push_back(change_field(multiply_section(s, id, monomial_form(e.field(), h)), f));
  Mat out(f, b * d.u1, a * d.u0);
  for (size_t c = 0; c < d.u0; ++c)
    for (size_t j = 0; j < d.u1; ++j) {
      const Form& h = d.entries[c][j];
      if (h.degree() != ctx.m - ctx.n) throw DimHMismatch("delta entries must have degree m - n");
      Mat mult(f, b, a);
      if (mono.empty()) {
        mult = multiply_section(s, id, h);
      } else {
        const std::vector<Exp> hs = ctx.h_basis();
        for (size_t k = 0; k < hs.size(); ++k) {
          Scalar co = h.coeff(hs[k]);
          if (!co.is_zero()) mult = mult + mono[k].scaled(co);
        }
      }
      out.set_block(j * b, c * a, mult);
    }
  return out;
}

Scalar theta_delta(const DeltaMap& d, const Presentation& e, const BridgeContext& ctx) {
  return det(theta_delta_matrix(d, e, ctx));
}

}  // namespace ks
