#include <algorithm>
#include <numeric>

#include "bridge_internal.hpp"
#include "kronsheaf/errors.hpp"

namespace ks {

namespace {

int max_degree(const Resolution& res) {
  int d = 0;
  bool any = false;
  for (const auto& f : res.modules)
    for (int a : f.degrees) {
      d = any ? std::max(d, a) : a;
      any = true;
    }
  return d;
}

Presentation cokernel(const DeltaMap& d, const BridgeContext& ctx, const FieldPtr& f) {
  GradedMap g;
  g.field = f;
  g.target = FreeModule{ctx.r + 1, std::vector<int>(d.u0, ctx.n)};
  g.source = FreeModule{ctx.r + 1, std::vector<int>(d.u1, ctx.m)};
  g.entries = d.entries;
  g.validate();
  Presentation p;
  p.map = std::move(g);
  return p;
}

}  // namespace

size_t sheaf_hom_dim(const Presentation& fm, const Presentation& em, const GradedOptions& opts) {
  if (fm.num_vars() != em.num_vars()) throw VarMismatch("sheaves on different spaces");
  if (!same_field(fm.field(), em.field())) throw FieldMismatch("sheaves over different fields");
  const FieldPtr& f = em.field();
  const Resolution rf = resolve(fm, {std::max(opts.degree_cap, minimal_cap(fm)), opts.cache});
  const Resolution re = resolve(em, {std::max(opts.degree_cap, minimal_cap(em)), opts.cache});
  // Past both regularities F_{>=D} has a linear presentation and M_{>=D} is
  // the module of sections, so sheaf maps are the pairs (L_D, L_{D+1})
  // commuting with the variables.
  const int d = std::max(max_degree(rf), max_degree(re)) + 1;
  const Piece f0 = piece(fm, d), f1 = piece(fm, d + 1), e0 = piece(em, d), e1 = piece(em, d + 1);
  const size_t n0 = e0.dim * f0.dim, n1 = e1.dim * f1.dim;
  if (n0 == 0) return 0;
  std::vector<Mat> eqs;
  for (int j = 0; j < fm.num_vars(); ++j) {
    const Form x = Form::variable(f, fm.num_vars(), j);
    const Mat xf = detail::piece_mult(fm, f0, f1, x), xe = detail::piece_mult(em, e0, e1, x);
    // vec(L1 XF - XE L0) with column-major vec
    Mat row(f, e1.dim * f0.dim, n0 + n1);
    row.set_block(0, 0, Mat::kron(Mat::identity(f, f0.dim), xe).scaled(Scalar::from_int(f, -1)));
    if (n1) row.set_block(0, n0, Mat::kron(xf.transpose(), Mat::identity(f, e1.dim)));
    eqs.push_back(row);
  }
  return n0 + n1 - rank(Mat::vstack(eqs, f, n0 + n1));
}

FaltingsReport faltings_check(const DeltaMap& d, const Presentation& e, const BridgeContext& ctx) {
  if (ctx.r != 1) throw WrongDimension("the Faltings comparison is implemented on P^1 only");
  detail::check_sheaf(e, ctx);
  const GradedOptions opts = detail::opts_for(e, ctx);
  if (!is_n_regular(e, ctx.n, opts)) throw NotRegular("sheaf is not " + std::to_string(ctx.n) + "-regular");
  const Presentation fp = cokernel(d, ctx, e.field());
  const HilbPoly p = hilbert_polynomial(resolve(e, opts));

  // chi(F, E) from the resolution 0 -> K -> U1(-m) -> U0(-n) -> F -> 0, K free
  const int cap = std::max(ctx.degree_cap, ctx.m + static_cast<int>(d.u0) * (ctx.m - ctx.n) + ctx.r + 3);
  const KernelGens kg = kernel_generators(fp.map, cap);
  if (!kg.certified) throw ResolutionIncomplete("kernel of delta not certified below " + std::to_string(cap));
  FaltingsReport out;
  mpq_class chi = mpq_class(static_cast<long>(d.u0)) * p.eval(ctx.n) - mpq_class(static_cast<long>(d.u1)) * p.eval(ctx.m);
  for (int c : kg.gens.source.degrees) chi += p.eval(c);
  out.chi = chi.get_num().get_si();
  if (out.chi != 0) {
    out.hypothesis_failed = true;
    out.reason = "chi(F, E) = " + std::to_string(out.chi);
    return out;
  }
  try {
    out.theta_nonzero = !theta_delta(d, e, ctx).is_zero();
  } catch (const WeightMismatch& err) {
    out.hypothesis_failed = true;
    out.reason = err.what();
    return out;
  }
  out.hom = sheaf_hom_dim(fp, e, opts);
  out.ext1 = static_cast<long long>(out.hom) - out.chi;
  out.agree = out.theta_nonzero == (out.hom == 0 && out.ext1 == 0);
  return out;
}

SeparationReport separation_experiment(const std::vector<KroneckerModule>& modules, uint64_t budget, uint64_t seed) {
  SeparationReport rep;
  if (modules.empty()) return rep;
  const KroneckerModule& first = modules.front();
  if (!first.field->is_finite()) throw InfiniteField("separation needs a finite field");
  for (const KroneckerModule& m : modules)
    if (m.a != first.a || m.b != first.b || m.dimH() != first.dimH() || !same_field(m.field, first.field))
      throw DimensionMismatch("modules must share field and dimension vector");
  const size_t g = std::gcd(first.a, first.b);
  const size_t u0 = g ? first.b / g : 0, u1 = g ? first.a / g : 0;
  Rng rng(seed);
  std::vector<std::vector<Scalar>> th(modules.size());
  for (uint64_t t = 0; t < budget; ++t) {
    const ThetaShape gam = random_shape(first.field, u0, u1, first.dimH(), rng);
    for (size_t i = 0; i < modules.size(); ++i) th[i].push_back(theta_gamma(gam, modules[i]));
  }
  for (size_t i = 0; i < modules.size(); ++i)
    for (size_t j = i + 1; j < modules.size(); ++j) {
      SeparationPair pr{i, j};
      pr.s_equivalent = s_equivalent(modules[i], modules[j], uint64_t{1} << 16, derive_seed(seed, rep.pairs.size()));
      for (size_t s = 0; s < budget && !pr.separated; ++s)
        for (size_t t = s + 1; t < budget && !pr.separated; ++t)
          if (!(th[i][s] * th[j][t] - th[i][t] * th[j][s]).is_zero()) {
            pr.separated = true;
            pr.gammas = std::make_pair(s, t);
          }
      rep.ok = rep.ok && pr.separated != pr.s_equivalent;
      rep.pairs.push_back(pr);
    }
  return rep;
}

}  // namespace ks
