#include "cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "kronsheaf/errors.hpp"
#include "kronsheaf/json_io.hpp"

namespace ks::cli {

using io::Json;
using io::to_json;

namespace {

struct Config {
  std::string command;
  std::vector<std::string> in, sheaf;
  std::string module, gamma, delta, field, out;
  int r = 1, n = 0, m = 1, degree_cap = 20, max_power = 2;
  uint64_t budget = 32;
  std::optional<uint64_t> seed;
  bool allow_impure = false;

  FieldPtr field_override() const { return field.empty() ? nullptr : Field::make(FieldSpec::parse(field)); }
};

class Runner {
 public:
  explicit Runner(const Config& c) : c_(c), override_(c.field_override()) {}

  const std::string& only(const std::vector<std::string>& paths, const char* flag) const {
    if (paths.size() != 1) throw ParseError(std::string("expected exactly one ") + flag);
    return paths[0];
  }
  Presentation sheaf_at(const std::string& path) const { return io::presentation_from_json(io::read_file(path), override_); }
  KroneckerModule module_at(const std::string& path) const { return io::module_from_json(io::read_file(path), override_); }
  Presentation input_sheaf() const { return sheaf_at(only(c_.in.empty() ? c_.sheaf : c_.in, "--in/--sheaf file")); }
  KroneckerModule input_module() const {
    if (!c_.module.empty()) return module_at(c_.module);
    return module_at(only(c_.in, "--in module file"));
  }
  std::vector<KroneckerModule> input_modules() const {
    std::vector<KroneckerModule> out;
    for (const auto& p : c_.in) out.push_back(module_at(p));
    if (out.empty()) throw ParseError("expected --in module files");
    return out;
  }
  uint64_t seed() const {
    if (!c_.seed) throw ParseError("command '" + c_.command + "' is randomized and needs an explicit --seed");
    return *c_.seed;
  }
  GradedOptions graded() const { return {c_.degree_cap, &cache_}; }
  BridgeContext context(const FieldPtr& f) const {
    BridgeContext ctx;
    ctx.r = c_.r;
    ctx.field = f;
    ctx.n = c_.n;
    ctx.m = c_.m;
    ctx.degree_cap = c_.degree_cap;
    ctx.theta_budget = c_.budget;
    ctx.max_power = c_.max_power;
    ctx.seed = c_.seed.value_or(0);
    ctx.cache = &cache_;
    return ctx;
  }
  BridgeContext sheaf_context(const Presentation& e) const {
    BridgeContext ctx = context(e.field());
    ctx.r = e.r();
    return ctx;
  }

  Json run();

 private:
  const Config& c_;
  FieldPtr override_;
  mutable ResolutionCache cache_;
  std::optional<BridgeContext> ctx_echo_;

  Json hilbert();
  Json cohomology();
  Json regular();
  Json pure();
  Json phi_cmd();
  Json phidual();
  Json adjoint_check();
  Json ss_module();
  Json ss_sheaf();
  Json gr_cmd();
  Json s_equiv();
  Json theta();
  Json theta_detect();
  Json conditions();
  Json correspondence();
  Json faltings();
  Json separate();
};

Json conditions_json(const ConditionsReport& rep) {
  Json failures = Json::array();
  for (const auto& f : rep.failures) failures.push_back({{"condition", f.condition}, {"corpus_index", f.corpus_index}, {"detail", f.detail}});
  return {{"C1", rep.c1}, {"C2", rep.c2}, {"C3", rep.c3}, {"C4", rep.c4}, {"C5", rep.c5},
          {"subsheaves_checked", rep.subsheaves_checked}, {"truncated", rep.truncated}, {"failures", failures},
          {"scope", "corpus-relative"}};
}

Json Runner::hilbert() {
  const HilbPoly p = hilbert_polynomial(resolve(input_sheaf(), graded()));
  Json j{{"hilbert_polynomial", to_json(p)}};
  if (!p.is_zero()) {
    DimMult dm = dim_and_multiplicity(p);
    j["dim"] = dm.dim;
    j["multiplicity"] = dm.multiplicity.get_str();
  }
  return j;
}

Json Runner::cohomology() {
  const Presentation e = input_sheaf();
  const Resolution res = resolve(e, graded());
  Json h = Json::array();
  for (int i = 0; i <= e.r(); ++i) h.push_back(sheaf_cohomology(res, e, i, c_.n));
  return {{"twist", c_.n}, {"h", h}};
}

Json Runner::regular() {
  return {{"n", c_.n}, {"regular", is_n_regular(input_sheaf(), c_.n, graded())}};
}

Json Runner::pure() { return {{"pure", is_pure(input_sheaf(), graded())}}; }

Json Runner::phi_cmd() {
  const Presentation e = input_sheaf();
  ctx_echo_ = sheaf_context(e);
  return {{"module", to_json(phi(e, *ctx_echo_))}};
}

Json Runner::phidual() {
  const KroneckerModule mod = input_module();
  ctx_echo_ = context(mod.field);
  const Presentation e = phi_dual(mod, *ctx_echo_);
  return {{"presentation", to_json(e)},
          {"hilbert_polynomial", to_json(hilbert_polynomial(e, std::max(c_.degree_cap, minimal_cap(e))))}};
}

Json Runner::adjoint_check() {
  if (!c_.module.empty()) {
    const KroneckerModule mod = input_module();
    ctx_echo_ = context(mod.field);
    return {{"unit", unit_is_iso(mod, *ctx_echo_)}};
  }
  const Presentation e = input_sheaf();
  ctx_echo_ = sheaf_context(e);
  const CounitReport rep = counit_check(e, *ctx_echo_);
  Json j{{"regular", rep.regular}, {"counit", rep.iso}, {"unit", nullptr}};
  if (rep.regular) {
    j["unit"] = unit_is_iso(phi(e, *ctx_echo_), *ctx_echo_);
    j["surjective_degree"] = rep.degree;
    j["hp_sheaf"] = to_json(rep.hp_target);
    j["hp_round_trip"] = to_json(rep.hp_source);
  }
  return j;
}

Json Runner::ss_module() { return to_json(is_semistable(input_module())); }

Json Runner::ss_sheaf() {
  const Presentation e = input_sheaf();
  ctx_echo_ = sheaf_context(e);
  const SheafVerdict v = sheaf_semistable(e, *ctx_echo_, !c_.allow_impure);
  Json j{{"verdict", sheaf_verdict_name(v.kind)}, {"reason", v.reason}, {"witness", nullptr}, {"conditions", nullptr}};
  if (v.kind != SheafVerdictKind::NotApplicable) {
    j["module_result"] = to_json(v.module);
    if (e.field()->is_finite()) j["conditions"] = conditions_json(check_conditions({e}, *ctx_echo_, 64));
  }
  if (v.witness) {
    j["witness"] = {{"presentation", to_json(*v.witness)}, {"hilbert_polynomial", to_json(*v.witness_hp)}, {"tight", to_json(*v.tight)}};
  }
  return j;
}

Json Runner::gr_cmd() {
  const KroneckerModule mod = input_module();
  const uint64_t order = c_.seed.value_or(0);
  const SFiltration filt = s_filtration(mod, order);
  Json chain = Json::array(), factors = Json::array();
  for (const Submodule& s : filt.chain) chain.push_back(to_json(s));
  for (const KroneckerModule& g : gr(mod, order)) factors.push_back(to_json(g));
  return {{"filtration", chain}, {"factors", factors}};
}

Json Runner::s_equiv() {
  const std::vector<KroneckerModule> mods = input_modules();
  if (mods.size() != 2) throw ParseError("s-equiv needs exactly two --in modules");
  const uint64_t s = seed();
  return {{"s_equivalent", s_equivalent(mods[0], mods[1], uint64_t{1} << 16, s)},
          {"isomorphic", is_isomorphic(mods[0], mods[1], uint64_t{1} << 16, derive_seed(s, 1))}};
}

Json Runner::theta() {
  if (!c_.delta.empty()) {
    const Presentation e = input_sheaf();
    ctx_echo_ = sheaf_context(e);
    const DeltaMap d = io::delta_from_json(io::read_file(c_.delta), e.field());
    const Scalar t = theta_delta(d, e, *ctx_echo_);
    const Scalar tg = theta_gamma(gamma_from_delta(d, *ctx_echo_), phi(e, *ctx_echo_));
    return {{"theta", to_json(t)}, {"agrees_with_module", t == tg}};
  }
  if (c_.gamma.empty()) throw ParseError("theta needs --gamma (with --module) or --delta (with --sheaf)");
  const KroneckerModule mod = input_module();
  const ThetaShape g = io::shape_from_json(io::read_file(c_.gamma), mod.field);
  return {{"theta", to_json(theta_gamma(g, mod))}};
}

Json Runner::theta_detect() {
  const KroneckerModule mod = input_module();
  return to_json(detect_ss_theta(mod, c_.budget, c_.max_power, seed()));
}

Json Runner::conditions() {
  std::vector<Presentation> corpus;
  for (const auto& p : c_.sheaf.empty() ? c_.in : c_.sheaf) corpus.push_back(sheaf_at(p));
  if (corpus.empty()) throw ParseError("conditions needs --sheaf files");
  ctx_echo_ = sheaf_context(corpus[0]);
  return conditions_json(check_conditions(corpus, *ctx_echo_));
}

Json Runner::correspondence() {
  const Presentation e = input_sheaf();
  ctx_echo_ = sheaf_context(e);
  const CorrespondenceReport rep = tight_correspondence(e, *ctx_echo_);
  Json pairs = Json::array();
  for (const auto& p : rep.pairs) {
    Json x{{"subspace", to_json(p.vsub)},
           {"tight", to_json(p.tight)},
           {"hilbert_polynomial", to_json(p.hp)},
           {"h0_n", p.h0n},
           {"h0_m", p.h0m},
           {"dims_match", p.dims_match},
           {"equal_slope", p.equal_slope},
           {"factor_iso", p.factor_iso ? Json(*p.factor_iso) : Json(nullptr)}};
    pairs.push_back(std::move(x));
  }
  return {{"pairs", pairs}, {"all_match", rep.all_match}};
}

Json Runner::faltings() {
  const Presentation e = input_sheaf();
  ctx_echo_ = sheaf_context(e);
  if (c_.delta.empty()) throw ParseError("faltings needs --delta");
  const DeltaMap d = io::delta_from_json(io::read_file(c_.delta), e.field());
  const FaltingsReport rep = faltings_check(d, e, *ctx_echo_);
  if (rep.hypothesis_failed) return {{"verdict", "hypothesis_failed"}, {"reason", rep.reason}, {"chi", rep.chi}};
  return {{"verdict", rep.agree ? "agree" : "disagree"}, {"chi", rep.chi}, {"hom", rep.hom}, {"ext1", rep.ext1},
          {"theta_nonzero", rep.theta_nonzero}};
}

Json Runner::separate() {
  const std::vector<KroneckerModule> mods = input_modules();
  const SeparationReport rep = separation_experiment(mods, c_.budget, seed());
  Json pairs = Json::array();
  for (const auto& p : rep.pairs) {
    Json x{{"i", p.i}, {"j", p.j}, {"s_equivalent", p.s_equivalent}, {"separated", p.separated}, {"gammas", nullptr}};
    if (p.gammas) x["gammas"] = {p.gammas->first, p.gammas->second};
    if (!p.s_equivalent && !p.separated) x["status"] = "BudgetExhausted";
    pairs.push_back(std::move(x));
  }
  return {{"pairs", pairs}, {"ok", rep.ok}, {"note", "S-equivalent pairs are checked only on the sampled gammas"}};
}

Json Runner::run() {
  static const std::map<std::string, Json (Runner::*)()> table{
      {"hilbert", &Runner::hilbert},           {"cohomology", &Runner::cohomology},
      {"regular", &Runner::regular},           {"pure", &Runner::pure},
      {"phi", &Runner::phi_cmd},               {"phidual", &Runner::phidual},
      {"adjoint-check", &Runner::adjoint_check}, {"ss-module", &Runner::ss_module},
      {"ss-sheaf", &Runner::ss_sheaf},         {"gr", &Runner::gr_cmd},
      {"s-equiv", &Runner::s_equiv},           {"theta", &Runner::theta},
      {"theta-detect", &Runner::theta_detect}, {"conditions", &Runner::conditions},
      {"correspondence", &Runner::correspondence}, {"faltings", &Runner::faltings},
      {"separate", &Runner::separate}};
  Json j = (this->*table.at(c_.command))();
  j["command"] = c_.command;
  j["version"] = io::kVersion;
  j["seed"] = c_.seed ? Json(*c_.seed) : Json(nullptr);
  if (ctx_echo_) j["ctx"] = to_json(*ctx_echo_);
  return j;
}

const std::vector<std::pair<std::string, std::string>>& commands() {
  static const std::vector<std::pair<std::string, std::string>> c{
      {"hilbert", "Hilbert polynomial of a presented module"},
      {"cohomology", "h^i of the sheaf twisted by --n"},
      {"regular", "Castelnuovo-Mumford --n-regularity"},
      {"pure", "purity of the sheaf"},
      {"phi", "Kronecker module of an n-regular sheaf"},
      {"phidual", "sheaf presented by a Kronecker module"},
      {"adjoint-check", "counit and unit isomorphism checks"},
      {"ss-module", "semistability of a Kronecker module"},
      {"ss-sheaf", "semistability of a sheaf through its module"},
      {"gr", "S-filtration and graded factors"},
      {"s-equiv", "S-equivalence and isomorphism of two modules"},
      {"theta", "theta function of a gamma or a delta"},
      {"theta-detect", "randomized semistability detection by thetas"},
      {"conditions", "report on the (n, m) conditions over a corpus"},
      {"correspondence", "subsheaf / tight submodule correspondence"},
      {"faltings", "theta versus Hom/Ext vanishing on P^1"},
      {"separate", "theta separation of non-S-equivalent modules"}};
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kronecker modules and sheaves on projective space"};
  app.require_subcommand(1);
  Config cfg;
  for (const auto& [name, help] : commands()) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--in", cfg.in, "input document(s)");
    sub->add_option("--sheaf", cfg.sheaf, "presentation file(s)");
    sub->add_option("--module", cfg.module, "Kronecker module file");
    sub->add_option("--gamma", cfg.gamma, "theta shape file");
    sub->add_option("--delta", cfg.delta, "delta map file");
    sub->add_option("--field", cfg.field, "override field: Q, Fp:<p>, Fq:<p>:<e>");
    sub->add_option("--r", cfg.r, "dimension of the projective space")->check(CLI::PositiveNumber);
    sub->add_option("--n", cfg.n, "first twist");
    sub->add_option("--m", cfg.m, "second twist");
    sub->add_option("--degree-cap", cfg.degree_cap, "degree cap for resolutions")->check(CLI::NonNegativeNumber);
    sub->add_option("--budget", cfg.budget, "sampling budget");
    sub->add_option("--max-power", cfg.max_power, "largest theta power")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out, "write the report here instead of stdout");
    sub->add_flag("--allow-impure", cfg.allow_impure, "ss-sheaf: run the module test on impure sheaves");
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }
  std::vector<std::string> argv_store{"kronsheaf"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  auto fail = [&](const std::string& kind, const std::string& msg, int code) {
    err << io::canonical(Json{{"error", kind}, {"message", msg}, {"exit_code", code}});
    return code;
  };
  try {
    Runner runner(cfg);
    const std::string text = io::canonical(runner.run());
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f || !(f << text)) return fail("IOError", "cannot write " + cfg.out, 1);
    }
    return 0;
  } catch (const Error& e) {
    return fail(e.kind(), e.what(), exit_code_for(e.category()));
  } catch (const std::exception& e) {
    return fail("InternalError", e.what(), 1);
  }
}

}  // namespace ks::cli
