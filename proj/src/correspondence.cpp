#include <algorithm>
#include <cstdlib>
#include <functional>

#include "bridge_internal.hpp"
#include "kronsheaf/errors.hpp"

namespace ks {

using detail::monomial_form;
using detail::opts_for;

namespace {

// Sections in V' as elements of M_{n+k}: one per (basis vector, monomial of degree k).
std::vector<std::pair<int, Mat>> section_elements(const Sections& s, const Mat& vsub) {
  const Piece pc = piece(s.module, s.n + s.k);
  const size_t copies = monomial_count(s.module.num_vars(), s.k);
  std::vector<std::pair<int, Mat>> out;
  const Mat stacked = s.bn * vsub;
  for (size_t j = 0; j < vsub.cols(); ++j)
    for (size_t u = 0; u < copies; ++u) out.push_back({s.n + s.k, stacked.block(u * pc.dim, j, pc.dim, 1)});
  return out;
}

int subsheaf_cap(const Sections& s, const BridgeContext& ctx) {
  return std::max({ctx.degree_cap, minimal_cap(s.module), s.n + s.k + 2 * (ctx.r + 2)});
}

size_t h0(const Presentation& p, int d, const BridgeContext& ctx) {
  return sheaf_cohomology(p, 0, d, opts_for(p, ctx));
}

HilbPoly hp_of(const Presentation& p, const BridgeContext& ctx) { return hilbert_polynomial(resolve(p, opts_for(p, ctx))); }

int sign(Ordering o) { return o == Ordering::Less ? -1 : o == Ordering::Greater ? 1 : 0; }

}  // namespace

GeneratedSubsheaf generated_subsheaf(const Sections& s, const Mat& vsub, const BridgeContext& ctx) {
  const Presentation& m = s.module;
  const FieldPtr& f = m.field();
  const int nv = m.num_vars();
  const int cap = subsheaf_cap(s, ctx);
  GeneratedSubsheaf out;
  if (vsub.cols() == 0) {
    out.sheaf = out.kernel = Presentation::free(f, nv, {});
    return out;
  }
  out.sheaf = submodule_presentation(SubmoduleGens{m, section_elements(s, vsub)}, cap);

  // F' is the image in V' (x) S(-n) of the relations among the generators
  // (j, mu) of E', under e_{j,mu} -> mu e_j.
  const std::vector<Exp> mus = monomial_basis(nv, s.k);
  const Presentation ambient = Presentation::free(f, nv, std::vector<int>(vsub.cols(), s.n));
  SubmoduleGens fg{ambient, {}};
  const GradedMap& rel = out.sheaf.map;
  for (size_t c = 0; c < rel.source.rank(); ++c) {
    const int e = rel.source.degrees[c];
    std::vector<Form> forms(vsub.cols(), Form(f, nv, e - s.n));
    for (size_t j = 0; j < vsub.cols(); ++j)
      for (size_t u = 0; u < mus.size(); ++u) forms[j] = forms[j] + rel.at(j * mus.size() + u, c) * monomial_form(f, mus[u]);
    Mat v = forms_to_vector(f, ambient.map.target, forms, e);
    if (!v.is_zero()) fg.elements.push_back({e, v});
  }
  int kcap = cap;
  for (const auto& [e, v] : fg.elements) kcap = std::max(kcap, e + 2 * (ctx.r + 2));
  out.kernel = fg.elements.empty() ? Presentation::free(f, nv, {}) : submodule_presentation(fg, kcap);
  return out;
}

Presentation quotient_by_sections(const Sections& s, const Mat& vsub) {
  const Presentation& m = s.module;
  const FieldPtr& f = m.field();
  const FreeModule& f0 = m.map.target;
  Presentation out = m;
  const Piece pc = piece(m, s.n + s.k);
  for (const auto& [e, coords] : section_elements(s, vsub)) {
    if (coords.is_zero()) continue;
    std::vector<Form> col = vector_to_forms(f, f0, pc.quotient.lift * coords, e);
    out.map.source.degrees.push_back(e);
    for (size_t i = 0; i < f0.rank(); ++i) out.map.entries[i].push_back(col[i]);
  }
  return out;
}

Submodule tight_closure(const KroneckerModule& mod, const Mat& vsub) {
  const Mat w = saturate(mod, vsub);
  const Quotient qw = quotient_by(w, mod.b, mod.field);
  if (qw.complement.empty()) return {Mat::identity(mod.field, mod.a), w};
  std::vector<Mat> rows;
  for (const Mat& al : mod.action) rows.push_back(qw.proj * al);
  return {kernel_basis(Mat::vstack(rows, mod.field, mod.a)), w};
}

const char* sheaf_verdict_name(SheafVerdictKind k) {
  switch (k) {
    case SheafVerdictKind::Semistable: return "semistable";
    case SheafVerdictKind::Unstable: return "unstable";
    case SheafVerdictKind::NotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

SheafVerdict sheaf_semistable(const Presentation& e, const BridgeContext& ctx, bool require_pure) {
  detail::check_sheaf(e, ctx);
  SheafVerdict out;
  const GradedOptions opts = opts_for(e, ctx);
  if (!is_n_regular(e, ctx.n, opts)) {
    out.reason = "not " + std::to_string(ctx.n) + "-regular";
    return out;
  }
  if (hilbert_polynomial(resolve(e, opts)).is_zero()) {
    out.reason = "zero sheaf";
    return out;
  }
  if (!is_pure(e, opts)) {
    out.reason = "impure";
    if (require_pure) return out;
  }
  const Sections s = global_sections(e, ctx);
  const KroneckerModule mod = phi(e, ctx);
  out.module = is_semistable(mod);
  if (out.module.verdict == Verdict::Semistable) {
    out.kind = SheafVerdictKind::Semistable;
  } else if (out.module.verdict == Verdict::Unstable) {
    out.kind = SheafVerdictKind::Unstable;
    out.tight = tight_closure(mod, out.module.witness->V);
    GeneratedSubsheaf g = generated_subsheaf(s, out.tight->V, ctx);
    out.witness_hp = hp_of(g.sheaf, ctx);
    out.witness = std::move(g.sheaf);
  }
  return out;
}

P1Profile p1_semistable_oracle(const Presentation& e, const GradedOptions& opts) {
  if (e.r() != 1) throw WrongDimension("the splitting oracle needs P^1, got P^" + std::to_string(e.r()));
  const Resolution res = resolve(e, opts);
  const HilbPoly p = hilbert_polynomial(res);
  P1Profile out;
  out.rank = p.degree() == 1 ? static_cast<size_t>(p.coeff(1).get_num().get_ui()) : 0;
  if (p.is_zero()) {
    out.semistable = true;
    return out;
  }
  // Line-bundle summands O(a) satisfy -max gen degree <= a <= |chi| + rank (|max gen| + 1).
  int g = 0;
  for (int d : e.gen_degrees()) g = std::max(g, std::abs(d));
  const long long chi = p.eval_int(0);
  const int bound = static_cast<int>(std::llabs(chi) + static_cast<long long>(out.rank) * (g + 1) + 2);
  std::vector<long long> h(2 * bound + 2);
  for (int d = -bound - 1; d <= bound; ++d) h[d + bound + 1] = static_cast<long long>(sheaf_cohomology(res, e, 0, d));
  auto at = [&](int d) { return h[d + bound + 1]; };
  auto step = [&](int d) { return at(d) - at(d - 1); };  // #{i : a_i >= -d}
  long long prev = 0;
  for (int d = -bound; d <= bound; ++d) {
    const long long cur = step(d);
    for (long long c = prev; c < cur; ++c) out.splitting.push_back(-d);
    prev = cur;
  }
  std::sort(out.splitting.begin(), out.splitting.end());
  if (out.splitting.size() != out.rank) throw ResolutionIncomplete("splitting type not recovered within the degree window");
  long long free_part = 0;
  for (int a : out.splitting) free_part += std::max(0, a + bound + 1);
  out.torsion = at(bound) - free_part;
  out.semistable = out.rank == 0 || (out.torsion == 0 && out.splitting.front() == out.splitting.back());
  return out;
}

TransportReport transport_gr(const Presentation& e, const BridgeContext& ctx, const std::vector<Presentation>& gr_e) {
  if (sheaf_semistable(e, ctx).kind != SheafVerdictKind::Semistable) throw NotSemistable("transport_gr needs a semistable sheaf");
  TransportReport out;
  const std::vector<KroneckerModule> mods = gr(phi(e, ctx));
  std::vector<KroneckerModule> sheaf_side;
  for (const Presentation& g : gr_e) sheaf_side.push_back(phi(g, ctx));
  out.module_factors = mods.size();
  out.sheaf_factors = sheaf_side.size();
  if (mods.size() != sheaf_side.size()) return out;
  std::vector<bool> used(sheaf_side.size(), false);
  for (size_t i = 0; i < mods.size(); ++i) {
    bool found = false;
    for (size_t j = 0; j < sheaf_side.size() && !found; ++j)
      if (!used[j] && is_isomorphic(mods[i], sheaf_side[j], uint64_t{1} << 16, derive_seed(ctx.seed, i))) used[j] = found = true;
    if (!found) return out;
  }
  out.ok = true;
  return out;
}

namespace {

// Calls fn on every nonzero subspace of F^a (column bases), up to `limit`
// subspaces; returns false when the limit cut the enumeration short.
bool for_each_nonzero_subspace(const FieldPtr& f, size_t a, uint64_t limit, const std::function<void(const Mat&)>& fn) {
  if (!f->is_finite()) return false;
  uint64_t seen = 0;
  bool complete = true;
  for (size_t k = 1; k <= a && complete; ++k)
    for_each_subspace(f, a, k, [&](const Mat& rows) {
      if (seen++ == limit) return complete = false;
      fn(rows.transpose());
      return true;
    });
  return complete;
}

bool sheaf_is_semistable(const Presentation& e, const BridgeContext& ctx) {
  if (ctx.r == 1) return p1_semistable_oracle(e, opts_for(e, ctx)).semistable;
  return sheaf_semistable(e, ctx).kind == SheafVerdictKind::Semistable;
}

}  // namespace

ConditionsReport check_conditions(const std::vector<Presentation>& corpus, const BridgeContext& ctx, uint64_t subspace_limit) {
  ctx.validate();  // C:3, m > n, so O(m - n) is regular
  ConditionsReport rep;
  auto fail = [&](bool& flag, const char* name, size_t i, std::string detail) {
    flag = false;
    rep.failures.push_back({name, i, std::move(detail)});
  };
  for (size_t i = 0; i < corpus.size(); ++i) {
    const Presentation& e = corpus[i];
    detail::check_sheaf(e, ctx);
    if (!is_n_regular(e, ctx.n, opts_for(e, ctx))) {
      fail(rep.c1, "C1", i, "not " + std::to_string(ctx.n) + "-regular");
      continue;
    }
    const HilbPoly p = hp_of(e, ctx);
    const mpq_class pn = p.eval(ctx.n), pm = p.eval(ctx.m);
    const bool semistable = !p.is_zero() && sheaf_is_semistable(e, ctx);
    const Sections s = global_sections(e, ctx);
    const bool complete = for_each_nonzero_subspace(e.field(), s.a(), subspace_limit, [&](const Mat& v) {
      ++rep.subsheaves_checked;
      const GeneratedSubsheaf g = generated_subsheaf(s, v, ctx);
      const HilbPoly pp = hp_of(g.sheaf, ctx);
      const size_t hn = h0(g.sheaf, ctx.n, ctx), hm = h0(g.sheaf, ctx.m, ctx);
      const std::string where = "subsheaf with HP " + pp.str() + ", h0(n) = " + std::to_string(hn);
      const Ordering poly_rel = polcmp_lex(p.scaled(hn), pp.scaled(pn));
      if (semistable && poly_rel == Ordering::Greater) fail(rep.c2, "C2", i, where);
      if (!is_n_regular(g.sheaf, ctx.m, opts_for(g.sheaf, ctx)) || !is_n_regular(g.kernel, ctx.m, opts_for(g.kernel, ctx)))
        fail(rep.c4, "C4", i, where);
      const mpq_class num = hn * pm - pn * hm;
      if (sign(poly_rel) != sgn(num)) fail(rep.c5, "C5", i, where + ", h0(m) = " + std::to_string(hm));
    });
    if (!complete) rep.truncated = true;
  }
  return rep;
}

MssReport mss_to_ess(const KroneckerModule& mod, const BridgeContext& ctx, const HilbPoly& p) {
  ctx.validate();
  if (p.eval(ctx.n) != static_cast<long>(mod.a) || p.eval(ctx.m) != static_cast<long>(mod.b))
    throw DimensionMismatch("dimension vector differs from (P(n), P(m))");
  MssReport out;
  out.module_semistable = is_semistable(mod).verdict == Verdict::Semistable;
  BridgeContext c2 = ctx;
  c2.field = mod.field;
  const Presentation e = phi_dual(mod, c2);
  const HilbPoly pe = hp_of(e, c2);
  out.hp_matches = pe == p;
  out.pure = !pe.is_zero() && is_pure(e, opts_for(e, c2));
  out.hypotheses = out.module_semistable && out.pure && out.hp_matches;
  if (!out.hypotheses) {
    out.consistent = true;  // out of hypothesis: nothing to check
    return out;
  }
  out.unit_iso = unit_is_iso(mod, c2);
  out.sheaf_semistable = sheaf_is_semistable(e, c2);
  out.consistent = out.unit_iso && out.sheaf_semistable;
  return out;
}

CorrespondenceReport tight_correspondence(const Presentation& e, const BridgeContext& ctx, const std::vector<Mat>& subspaces) {
  detail::check_sheaf(e, ctx);
  if (!is_n_regular(e, ctx.n, opts_for(e, ctx))) throw NotRegular("sheaf is not " + std::to_string(ctx.n) + "-regular");
  const Sections s = global_sections(e, ctx);
  const KroneckerModule mod = phi(e, ctx);
  const bool semistable = sheaf_is_semistable(e, ctx);
  CorrespondenceReport rep;
  auto visit = [&](const Mat& v) {
    CorrespondencePair pr;
    pr.vsub = v;
    pr.tight = tight_closure(mod, v);
    const GeneratedSubsheaf g = generated_subsheaf(s, v, ctx);
    pr.hp = hp_of(g.sheaf, ctx);
    pr.h0n = h0(g.sheaf, ctx.n, ctx);
    pr.h0m = h0(g.sheaf, ctx.m, ctx);
    pr.dims_match = pr.tight.dim_v() == pr.h0n && pr.tight.dim_w() == pr.h0m;
    pr.equal_slope = pr.tight.dim_v() > 0 && slope_cmp(pr.tight.dim_v(), pr.tight.dim_w(), mod.a, mod.b) == Ordering::Equal;
    if (semistable && pr.equal_slope) {
      const Presentation quo = quotient_by_sections(s, pr.tight.V);
      const KroneckerModule qm = quotient_module(mod, pr.tight);
      pr.factor_iso = is_n_regular(quo, ctx.n, opts_for(quo, ctx)) &&
                      is_isomorphic(qm, phi(quo, ctx), uint64_t{1} << 16, derive_seed(ctx.seed, rep.pairs.size()));
    }
    rep.all_match = rep.all_match && pr.dims_match && pr.factor_iso.value_or(true);
    rep.pairs.push_back(std::move(pr));
  };
  if (subspaces.empty()) {
    if (!e.field()->is_finite()) throw InfiniteField("subspace enumeration needs a finite field");
    for_each_nonzero_subspace(e.field(), s.a(), UINT64_MAX, visit);
  } else {
    for (const Mat& v : subspaces) {
      if (v.rows() != s.a()) throw DimensionMismatch("subspace must live in H^0(E(n))");
      if (v.cols() == 0) {
        rep.pairs.push_back({v, {Mat(e.field(), mod.a, 0), Mat(e.field(), mod.b, 0)}, HilbPoly(), 0, 0, true, false, {}});
        continue;
      }
      visit(v);
    }
  }
  return rep;
}

}  // namespace ks
