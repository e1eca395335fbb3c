#pragma once

#include <optional>
#include <vector>

#include "kronsheaf/mat.hpp"
#include "kronsheaf/ordering.hpp"
#include "kronsheaf/rng.hpp"

namespace ks {

// V + W with alpha: V (x) H -> W, alpha(v (x) h_k) = action[k] v.
struct KroneckerModule {
  FieldPtr field;
  size_t a = 0, b = 0;
  std::vector<Mat> action;  // dimH matrices, each b x a

  size_t dimH() const { return action.size(); }
  void validate() const;
  static KroneckerModule zero_action(FieldPtr f, size_t a, size_t b, size_t dimH);
  bool operator==(const KroneckerModule& o) const;
};

// Column bases of V' in V and W' in W.
struct Submodule {
  Mat V, W;
  size_t dim_v() const { return V.cols(); }
  size_t dim_w() const { return W.cols(); }
};

KroneckerModule direct_sum(const KroneckerModule& m, const KroneckerModule& n);
bool is_submodule(const KroneckerModule& m, const Submodule& s);
KroneckerModule sub_module(const KroneckerModule& m, const Submodule& s);
KroneckerModule quotient_module(const KroneckerModule& m, const Submodule& s);
// Base change of the action to a larger field.
KroneckerModule change_field(const KroneckerModule& m, const FieldPtr& target);

// W' = span of alpha_k V' over all k.
Mat saturate(const KroneckerModule& m, const Mat& vsub);

// Compares dim V'/dim W' with dim V''/dim W'' in [0, +inf].
Ordering slope_cmp(size_t v1, size_t w1, size_t v2, size_t w2);

enum class Verdict { Semistable, Unstable, Inconclusive };
const char* verdict_name(Verdict v);

// gamma-hat = sum_k G_k (x) h_k : U_1 -> U_0 (x) H, each G_k of size u0 x u1.
struct ThetaShape {
  size_t u0 = 0, u1 = 0;
  std::vector<Mat> G;
};

struct SemistabilityResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Submodule> witness;  // destabilizer when unstable
  std::optional<ThetaShape> gamma;   // certificate when found by sampling
  bool enumerated = true;            // false when decided by the certified randomized search
};

// Subspace count above which is_semistable switches from enumeration to
// the certified randomized search.
inline constexpr uint64_t kEnumerationLimit = 1u << 17;

SemistabilityResult is_semistable(const KroneckerModule& m);
// Exhaustive over subspaces; BudgetExhausted when more than `limit` subspaces.
SemistabilityResult is_semistable_enumerate(const KroneckerModule& m, uint64_t limit = kEnumerationLimit);
// Theta certificate or Wong-sequence destabilizer, with an internal fixed seed.
SemistabilityResult is_semistable_search(const KroneckerModule& m);
bool is_stable(const KroneckerModule& m, uint64_t limit = kEnumerationLimit);

// b dim V' - a dim saturate(V').
long long violation(const KroneckerModule& m, const Mat& vsub);

struct SFiltration {
  std::vector<Submodule> chain;  // strictly increasing, ending at the whole module
};
// order_seed = 0 enumerates in pinned order; other values enumerate after a
// seeded change of basis of V, which must not change gr.
SFiltration s_filtration(const KroneckerModule& m, uint64_t order_seed = 0, uint64_t limit = kEnumerationLimit);
std::vector<KroneckerModule> gr(const KroneckerModule& m, uint64_t order_seed = 0, uint64_t limit = kEnumerationLimit);

struct ModuleMap {
  Mat f, g;  // V_M -> V_N and W_M -> W_N
};
std::vector<ModuleMap> hom_space(const KroneckerModule& m, const KroneckerModule& n);
bool is_isomorphic(const KroneckerModule& m, const KroneckerModule& n, uint64_t budget, uint64_t seed);
bool s_equivalent(const KroneckerModule& m, const KroneckerModule& n, uint64_t budget, uint64_t seed);

Scalar theta_gamma(const ThetaShape& gamma, const KroneckerModule& m);
// The matrix whose determinant is theta_gamma, of size (b u1) x (a u0).
Mat theta_matrix(const ThetaShape& gamma, const KroneckerModule& m);

// Field over which random gamma are drawn so that `budget` independent draws
// all miss a nonzero polynomial of degree `deg` with probability <= 2^-20.
FieldPtr sampling_field(const FieldPtr& base, uint64_t deg, uint64_t budget);
ThetaShape random_shape(const FieldPtr& f, size_t u0, size_t u1, size_t dimH, Rng& rng);

SemistabilityResult detect_ss_theta(const KroneckerModule& m, uint64_t budget, int max_power, uint64_t seed);

// Over Q: reduce the action modulo each prime and test there.
struct PrimeVerdict {
  uint32_t p;
  Verdict verdict;
};
std::vector<PrimeVerdict> semistable_mod_primes(const KroneckerModule& m, const std::vector<uint32_t>& primes);

}  // namespace ks
