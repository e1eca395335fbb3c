#pragma once

// JSON documents for the core types.  Readers collect every schema violation
// with its path before raising a single ParseError.

#include <string>
#include <vector>

#include "json.hpp"
#include "kronsheaf/bridge.hpp"

namespace ks::io {

using Json = nlohmann::json;  // std::map objects: keys come out sorted

inline constexpr const char* kVersion = "0.1.0";

class Issues {
 public:
  void add(const std::string& path, const std::string& msg) { list_.push_back(path + ": " + msg); }
  bool empty() const { return list_.empty(); }
  const std::vector<std::string>& list() const { return list_; }
  // Throws ParseError listing every issue.
  void raise(const std::string& what) const;

 private:
  std::vector<std::string> list_;
};

Json to_json(const FieldPtr& f);
Json to_json(const Scalar& s);
Json to_json(const Mat& m);
Json to_json(const Form& h);
Json to_json(const Presentation& p);
Json to_json(const HilbPoly& p);
Json to_json(const KroneckerModule& m);
Json to_json(const ThetaShape& g);
Json to_json(const DeltaMap& d);
Json to_json(const Submodule& s);
Json to_json(const SemistabilityResult& r);
Json to_json(const BridgeContext& c);

// `override_field`, when set, replaces the field named in the document;
// scalars are then read in that field (rationals reduce mod p).
FieldPtr field_from_json(const Json& j);
Presentation presentation_from_json(const Json& j, const FieldPtr& override_field = nullptr);
KroneckerModule module_from_json(const Json& j, const FieldPtr& override_field = nullptr);
// A shape without a "field" key is read over `fallback`.
ThetaShape shape_from_json(const Json& j, const FieldPtr& fallback);
DeltaMap delta_from_json(const Json& j, const FieldPtr& fallback);
Submodule submodule_from_json(const Json& j, const FieldPtr& f);
HilbPoly hilbpoly_from_json(const Json& j);
BridgeContext context_from_json(const Json& j);

Json parse_text(const std::string& text, const std::string& source);
Json read_file(const std::string& path);
// Two-space indented, sorted keys, trailing newline.
std::string canonical(const Json& j);

}  // namespace ks::io
