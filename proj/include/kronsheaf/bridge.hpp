#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kronsheaf/cohomology.hpp"
#include "kronsheaf/kron.hpp"

namespace ks {

struct BridgeContext {
  int r = 1;
  FieldPtr field;
  int n = 0, m = 1;
  int degree_cap = 20;
  uint64_t theta_budget = 32;
  int max_power = 2;
  uint64_t seed = 0;
  ResolutionCache* cache = nullptr;

  // Throws PreconditionFailed unless m > n and r >= 1.
  void validate() const;
  GradedOptions graded() const { return {degree_cap, cache}; }
  size_t dimH() const { return monomial_count(r + 1, m - n); }
  std::vector<Exp> h_basis() const { return monomial_basis(r + 1, m - n); }
};

// H^0(E(n)) and H^0(E(m)) realized inside Hom(m^k, M) for the smallest k at
// which that module computes the sections in both degrees.  A vector in
// Hom(m^k, M)_d stacks one block per monomial mu of degree k, holding the
// image of mu in the pinned basis of M_{d+k}.
struct Sections {
  Presentation module;
  int n = 0, m = 0, k = 0;
  Mat bn, bm;  // bases of H^0(E(n)), H^0(E(m)) as columns

  size_t a() const { return bn.cols(); }
  size_t b() const { return bm.cols(); }
};

Sections global_sections(const Presentation& e, const BridgeContext& ctx);
// Coordinates (in bm) of h times the section with coordinates c (in bn); deg h = m - n.
Mat multiply_section(const Sections& s, const Mat& c, const Form& h);

KroneckerModule phi(const Presentation& e, const BridgeContext& ctx);
Presentation phi_dual(const KroneckerModule& mod, const BridgeContext& ctx);

struct CounitReport {
  bool iso = false;
  bool regular = false;
  bool surjective = false;
  int degree = 0;  // degree where surjectivity was checked
  HilbPoly hp_source, hp_target;
};
CounitReport counit_check(const Presentation& e, const BridgeContext& ctx);
bool counit_is_iso(const Presentation& e, const BridgeContext& ctx);
bool unit_is_iso(const KroneckerModule& mod, const BridgeContext& ctx);
bool in_regular_image(const KroneckerModule& mod, const BridgeContext& ctx, const HilbPoly& p);

// u0 x u1 matrix of forms of degree m - n.
struct DeltaMap {
  size_t u0 = 0, u1 = 0;
  std::vector<std::vector<Form>> entries;
};
DeltaMap delta_from_gamma(const ThetaShape& g, const BridgeContext& ctx);
ThetaShape gamma_from_delta(const DeltaMap& d, const BridgeContext& ctx);
// Matrix of Hom(U0, H^0(E(n))) -> Hom(U1, H^0(E(m))), phi -> phi o delta, built
// by multiplying sections by the entries of delta.
Mat theta_delta_matrix(const DeltaMap& d, const Presentation& e, const BridgeContext& ctx);
Scalar theta_delta(const DeltaMap& d, const Presentation& e, const BridgeContext& ctx);

// Subsheaf generated by the sections V' (coordinates in bn), with the kernel
// F' of V' (x) O(-n) -> E'.
struct GeneratedSubsheaf {
  Presentation sheaf;   // E'
  Presentation kernel;  // F'
};
GeneratedSubsheaf generated_subsheaf(const Sections& s, const Mat& vsub, const BridgeContext& ctx);

enum class SheafVerdictKind { Semistable, Unstable, NotApplicable };
const char* sheaf_verdict_name(SheafVerdictKind k);

struct SheafVerdict {
  SheafVerdictKind kind = SheafVerdictKind::NotApplicable;
  std::string reason;
  SemistabilityResult module;               // when applicable
  std::optional<Submodule> tight;           // tightened module witness
  std::optional<Presentation> witness;      // generated subsheaf
  std::optional<HilbPoly> witness_hp;
};
// With require_pure = false an impure n-regular sheaf still gets the module
// verdict (reason "impure"), for comparing against ground truth.
SheafVerdict sheaf_semistable(const Presentation& e, const BridgeContext& ctx, bool require_pure = true);
// (V'', W'') with W'' = sat V' and V'' = alpha^{-1}(W'').
Submodule tight_closure(const KroneckerModule& mod, const Mat& vsub);
// E / E' for the subsheaf generated by the sections V'.
Presentation quotient_by_sections(const Sections& s, const Mat& vsub);

struct P1Profile {
  size_t rank = 0;
  long long torsion = 0;
  std::vector<int> splitting;  // ascending
  bool semistable = false;
};
P1Profile p1_semistable_oracle(const Presentation& e, const GradedOptions& opts);

struct TransportReport {
  bool ok = false;
  size_t module_factors = 0, sheaf_factors = 0;
};
TransportReport transport_gr(const Presentation& e, const BridgeContext& ctx, const std::vector<Presentation>& gr_e);

struct ConditionFailure {
  std::string condition;
  size_t corpus_index = 0;
  std::string detail;
};
struct ConditionsReport {
  bool c1 = true, c2 = true, c3 = true, c4 = true, c5 = true;
  size_t subsheaves_checked = 0;
  bool truncated = false;  // some subspace enumeration exceeded the limit
  std::vector<ConditionFailure> failures;
};
ConditionsReport check_conditions(const std::vector<Presentation>& corpus, const BridgeContext& ctx,
                                  uint64_t subspace_limit = 4096);

struct MssReport {
  bool module_semistable = false;
  bool pure = false;
  bool hp_matches = false;
  bool hypotheses = false;
  bool sheaf_semistable = false;
  bool unit_iso = false;
  bool consistent = false;  // conclusion holds whenever the hypotheses do
};
MssReport mss_to_ess(const KroneckerModule& mod, const BridgeContext& ctx, const HilbPoly& p);

struct CorrespondencePair {
  Mat vsub;            // V' in H^0(E(n))
  Submodule tight;     // (V'', W'')
  HilbPoly hp;         // of E'
  size_t h0n = 0, h0m = 0;
  bool dims_match = false;
  bool equal_slope = false;
  std::optional<bool> factor_iso;  // quotient module vs phi of the quotient sheaf
};
struct CorrespondenceReport {
  std::vector<CorrespondencePair> pairs;
  bool all_match = true;
};
// Checks every V' in `subspaces`, or all subspaces of H^0(E(n)) when empty.
CorrespondenceReport tight_correspondence(const Presentation& e, const BridgeContext& ctx,
                                          const std::vector<Mat>& subspaces = {});

struct FaltingsReport {
  bool hypothesis_failed = false;
  std::string reason;
  long long chi = 0;
  size_t hom = 0;
  long long ext1 = 0;
  bool theta_nonzero = false;
  bool agree = false;
};
// F = coker(delta) on P^1.  Hom(F, E) comes from graded maps of truncations,
// independent of the theta matrix.
FaltingsReport faltings_check(const DeltaMap& d, const Presentation& e, const BridgeContext& ctx);
size_t sheaf_hom_dim(const Presentation& f, const Presentation& e, const GradedOptions& opts);

struct SeparationPair {
  size_t i = 0, j = 0;
  bool s_equivalent = false;
  bool separated = false;
  std::optional<std::pair<size_t, size_t>> gammas;  // indices of a separating pair
};
struct SeparationReport {
  std::vector<SeparationPair> pairs;
  bool ok = true;  // non-equivalent pairs separated, equivalent pairs never
};
SeparationReport separation_experiment(const std::vector<KroneckerModule>& modules, uint64_t budget, uint64_t seed);

}  // namespace ks
