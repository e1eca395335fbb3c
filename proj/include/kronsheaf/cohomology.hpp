#pragma once

#include <map>
#include <mutex>
#include <string>

#include "kronsheaf/graded.hpp"

namespace ks {

// Caller-owned memo of free resolutions keyed by presentation and cap.
class ResolutionCache {
 public:
  Resolution get(const Presentation& m, int cap);
  size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, Resolution> entries_;
};

struct GradedOptions {
  int degree_cap = 20;
  ResolutionCache* cache = nullptr;
};

Resolution resolve(const Presentation& m, const GradedOptions& opts);

// dim Ext^q(M, S(-r-1))_d, read off the dualized resolution.
size_t ext_dim(const Resolution& res, int q, int d);

// h^i of the sheaf associated to M, twisted by n.
size_t sheaf_cohomology(const Presentation& m, int i, int n, const GradedOptions& opts);
size_t sheaf_cohomology(const Resolution& res, const Presentation& m, int i, int n);
bool is_n_regular(const Presentation& m, int n, const GradedOptions& opts);
bool is_n_regular(const Resolution& res, const Presentation& m, int n);

// Presentation of Ext^q(M, S(-r-1)) as a graded module.
Presentation ext_module(const Resolution& res, int q);
bool is_pure(const Presentation& m, const GradedOptions& opts);

struct SubmoduleGens {
  Presentation ambient;
  // (degree, coordinates in the pinned basis of piece(ambient, degree))
  std::vector<std::pair<int, Mat>> elements;
};

// The submodule of the ambient generated by the given elements.
Presentation submodule_presentation(const SubmoduleGens& g, int cap);
HilbPoly submodule_hp(const SubmoduleGens& g, int cap);

}  // namespace ks
