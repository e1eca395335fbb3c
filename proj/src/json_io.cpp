#include "kronsheaf/json_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "kronsheaf/errors.hpp"

namespace ks::io {

void Issues::raise(const std::string& what) const {
  std::string msg = what;
  for (const std::string& s : list_) msg += "\n  " + s;
  throw ParseError(msg);
}

// ---------------------------------------------------------------- writers

Json to_json(const FieldPtr& f) {
  Json j{{"name", f->spec().name()}};
  if (f->spec().kind == FieldKind::Extension) j["min_poly"] = f->spec().min_poly;
  return j;
}

Json to_json(const Scalar& s) { return s.str(); }

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Form& h) {
  Json terms = Json::array();
  for (const auto& [e, c] : h.terms()) terms.push_back({{"exp", e}, {"coeff", c.str()}});
  return {{"degree", h.degree()}, {"terms", terms}};
}

Json to_json(const Presentation& p) {
  Json rels = Json::array();
  for (size_t j = 0; j < p.rel_degrees().size(); ++j) {
    Json col = Json::array();
    for (size_t i = 0; i < p.gen_degrees().size(); ++i) col.push_back(to_json(p.map.at(i, j)));
    rels.push_back(std::move(col));
  }
  return {{"num_vars", p.num_vars()},
          {"field", to_json(p.field())},
          {"gen_degrees", p.gen_degrees()},
          {"rel_degrees", p.rel_degrees()},
          {"relations", rels}};
}

Json to_json(const HilbPoly& p) {
  Json c = Json::array();
  for (const mpq_class& x : p.coeffs()) c.push_back(x.get_num().get_str() + "/" + x.get_den().get_str());
  return {{"coeffs", c}, {"text", p.str()}};
}

Json to_json(const KroneckerModule& m) {
  Json act = Json::array();
  for (const Mat& al : m.action) act.push_back(to_json(al));
  return {{"field", to_json(m.field)}, {"a", m.a}, {"b", m.b}, {"dimH", m.dimH()}, {"action", act}};
}

Json to_json(const ThetaShape& g) {
  Json gs = Json::array();
  for (const Mat& x : g.G) gs.push_back(to_json(x));
  Json j{{"u0", g.u0}, {"u1", g.u1}, {"G", gs}};
  if (!g.G.empty()) j["field"] = to_json(g.G[0].field());
  return j;
}

Json to_json(const DeltaMap& d) {
  Json rows = Json::array();
  for (const auto& row : d.entries) {
    Json r = Json::array();
    for (const Form& h : row) r.push_back(to_json(h));
    rows.push_back(std::move(r));
  }
  Json j{{"u0", d.u0}, {"u1", d.u1}, {"entries", rows}};
  if (d.u0 && d.u1) {
    const Form& h = d.entries[0][0];
    j["field"] = to_json(h.field());
    j["num_vars"] = h.num_vars();
    j["degree"] = h.degree();
  }
  return j;
}

Json to_json(const Submodule& s) {
  return {{"V", to_json(s.V)}, {"W", to_json(s.W)}, {"dim_v", s.dim_v()}, {"dim_w", s.dim_w()}};
}

Json to_json(const SemistabilityResult& r) {
  return {{"verdict", verdict_name(r.verdict)},
          {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)},
          {"gamma", r.gamma ? to_json(*r.gamma) : Json(nullptr)},
          {"method", r.enumerated ? "enumeration" : "search"}};
}

Json to_json(const BridgeContext& c) {
  return {{"r", c.r},           {"field", to_json(c.field)},
          {"n", c.n},           {"m", c.m},
          {"degree_cap", c.degree_cap}, {"theta_budget", c.theta_budget},
          {"max_power", c.max_power},   {"seed", c.seed}};
}

// ---------------------------------------------------------------- readers

namespace {

const Json* member(const Json& j, const char* key, const std::string& path, Issues& is, bool required = true) {
  if (!j.is_object()) {
    is.add(path, "expected an object");
    return nullptr;
  }
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) is.add(path + "/" + key, "missing");
    return nullptr;
  }
  return &*it;
}

std::optional<long long> get_int(const Json& j, const char* key, const std::string& path, Issues& is, long long lo = INT32_MIN,
                                 bool required = true) {
  const Json* v = member(j, key, path, is, required);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) {
    is.add(path + "/" + key, "expected an integer");
    return std::nullopt;
  }
  const long long x = v->get<long long>();
  if (x < lo || x > INT32_MAX) {
    is.add(path + "/" + key, "out of range");
    return std::nullopt;
  }
  return x;
}

std::optional<std::vector<int>> get_ints(const Json& j, const char* key, const std::string& path, Issues& is) {
  const Json* v = member(j, key, path, is);
  if (!v) return std::nullopt;
  if (!v->is_array()) {
    is.add(path + "/" + key, "expected an array of integers");
    return std::nullopt;
  }
  std::vector<int> out;
  for (size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_number_integer()) {
      is.add(path + "/" + key + "/" + std::to_string(i), "expected an integer");
      return std::nullopt;
    }
    out.push_back((*v)[i].get<int>());
  }
  return out;
}

Scalar get_scalar(const Json& j, const FieldPtr& f, const std::string& path, Issues& is) {
  try {
    if (j.is_string()) return Scalar::parse(f, j.get<std::string>());
    if (j.is_number_integer()) return Scalar::from_int(f, j.get<long long>());
    is.add(path, "expected a scalar string");
  } catch (const std::exception& ex) {
    is.add(path, ex.what());
  }
  return Scalar::from_int(f, 0);
}

// rows x cols matrix; a negative expectation accepts any size
Mat get_mat(const Json& j, const FieldPtr& f, long rows, long cols, const std::string& path, Issues& is) {
  if (!j.is_array()) {
    is.add(path, "expected an array of rows");
    return Mat(f, std::max(rows, 0L), std::max(cols, 0L));
  }
  if (rows >= 0 && static_cast<long>(j.size()) != rows) {
    is.add(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
    return Mat(f, rows, std::max(cols, 0L));
  }
  const size_t nr = j.size();
  long nc = cols;
  if (nc < 0) nc = nr ? static_cast<long>(j[0].is_array() ? j[0].size() : 0) : 0;
  Mat m(f, nr, nc);
  for (size_t i = 0; i < nr; ++i) {
    const std::string rp = path + "/" + std::to_string(i);
    if (!j[i].is_array() || static_cast<long>(j[i].size()) != nc) {
      is.add(rp, "row " + std::to_string(i) + " must have " + std::to_string(nc) + " entries");
      continue;
    }
    for (long c = 0; c < nc; ++c) m.set(i, c, get_scalar(j[i][c], f, rp + "/" + std::to_string(c), is));
  }
  return m;
}

Form get_form(const Json& j, const FieldPtr& f, int nv, std::optional<int> expected, const std::string& path, Issues& is,
              const std::string& where = "") {
  auto deg = get_int(j, "degree", path, is);
  const int d = deg ? static_cast<int>(*deg) : expected.value_or(0);
  Form h(f, nv, d);
  if (expected && deg && *deg != *expected) {
    is.add(path, "degree mismatch" + where + ": expected " + std::to_string(*expected) + ", found " + std::to_string(*deg));
    return Form(f, nv, *expected);
  }
  const Json* terms = member(j, "terms", path, is);
  if (!terms) return h;
  if (!terms->is_array()) {
    is.add(path + "/terms", "expected an array");
    return h;
  }
  for (size_t t = 0; t < terms->size(); ++t) {
    const std::string tp = path + "/terms/" + std::to_string(t);
    auto exp = get_ints((*terms)[t], "exp", tp, is);
    const Json* c = member((*terms)[t], "coeff", tp, is);
    if (!exp || !c) continue;
    int sum = 0;
    bool neg = false;
    for (int e : *exp) {
      sum += e;
      neg = neg || e < 0;
    }
    if (static_cast<int>(exp->size()) != nv || neg) {
      is.add(tp + "/exp", "expected " + std::to_string(nv) + " nonnegative exponents");
      continue;
    }
    if (sum != d) {
      is.add(tp + "/exp", "degree mismatch" + where + ": monomial of degree " + std::to_string(sum) + " in a form of degree " + std::to_string(d));
      continue;
    }
    h.add_term(*exp, get_scalar(*c, f, tp + "/coeff", is));
  }
  return h;
}

FieldPtr field_at(const Json& j, const char* key, const std::string& path, Issues& is, const FieldPtr& override_field,
                  const FieldPtr& fallback = nullptr) {
  if (override_field) return override_field;
  const Json* v = member(j, key, path, is, fallback == nullptr);
  if (!v) return fallback;
  try {
    return field_from_json(*v);
  } catch (const std::exception& ex) {
    is.add(path + "/" + key, ex.what());
    return nullptr;
  }
}

}  // namespace

FieldPtr field_from_json(const Json& j) {
  if (j.is_string()) return Field::make(FieldSpec::parse(j.get<std::string>()));
  if (!j.is_object() || !j.contains("name") || !j["name"].is_string()) throw ParseError("field must be a name string or {\"name\": ...}");
  FieldSpec spec = FieldSpec::parse(j["name"].get<std::string>());
  if (spec.kind == FieldKind::Extension && j.contains("min_poly")) {
    if (!j["min_poly"].is_array()) throw ParseError("min_poly must be an array");
    spec = FieldSpec::extension(spec.p, spec.e, j["min_poly"].get<std::vector<uint32_t>>());
  }
  try {
    return Field::make(spec);
  } catch (const InvalidField& ex) {
    throw ParseError(ex.what());
  }
}

Presentation presentation_from_json(const Json& j, const FieldPtr& override_field) {
  Issues is;
  const FieldPtr f = field_at(j, "field", "", is, override_field);
  auto nv = get_int(j, "num_vars", "", is, 1);
  auto gens = get_ints(j, "gen_degrees", "", is);
  auto rels = get_ints(j, "rel_degrees", "", is);
  const Json* relations = member(j, "relations", "", is);
  if (!is.empty() || !f) is.raise("invalid presentation");
  GradedMap g;
  g.field = f;
  g.target = FreeModule{static_cast<int>(*nv), *gens};
  g.source = FreeModule{static_cast<int>(*nv), *rels};
  g.entries.assign(gens->size(), std::vector<Form>(rels->size()));
  if (!relations->is_array() || relations->size() != rels->size()) {
    is.add("/relations", "expected " + std::to_string(rels->size()) + " relations (one per rel_degree)");
    is.raise("invalid presentation");
  }
  for (size_t c = 0; c < rels->size(); ++c) {
    const Json& col = (*relations)[c];
    const std::string cp = "/relations/" + std::to_string(c);
    if (!col.is_array() || col.size() != gens->size()) {
      is.add(cp, "expected " + std::to_string(gens->size()) + " forms (one per generator)");
      continue;
    }
    bool nonzero = false;
    for (size_t i = 0; i < gens->size(); ++i) {
      const std::string where = " at (" + std::to_string(i) + "," + std::to_string(c) + ")";
      g.entries[i][c] = get_form(col[i], f, static_cast<int>(*nv), (*rels)[c] - (*gens)[i], cp + "/" + std::to_string(i), is, where);
      nonzero = nonzero || !g.entries[i][c].is_zero();
    }
    if (!nonzero) is.add(cp, "zero relation");
  }
  if (!is.empty()) is.raise("invalid presentation");
  Presentation p;
  p.map = std::move(g);
  return p;
}

KroneckerModule module_from_json(const Json& j, const FieldPtr& override_field) {
  Issues is;
  const FieldPtr f = field_at(j, "field", "", is, override_field);
  auto a = get_int(j, "a", "", is, 0), b = get_int(j, "b", "", is, 0), dh = get_int(j, "dimH", "", is, 1);
  const Json* action = member(j, "action", "", is);
  if (!is.empty() || !f) is.raise("invalid module");
  if (!action->is_array() || static_cast<long long>(action->size()) != *dh) {
    is.add("/action", "expected " + std::to_string(*dh) + " matrices (dimH)");
    is.raise("invalid module");
  }
  KroneckerModule m{f, static_cast<size_t>(*a), static_cast<size_t>(*b), {}};
  for (size_t k = 0; k < action->size(); ++k)
    m.action.push_back(get_mat((*action)[k], f, *b, *a, "/action/" + std::to_string(k), is));
  if (!is.empty()) is.raise("invalid module");
  return m;
}

ThetaShape shape_from_json(const Json& j, const FieldPtr& fallback) {
  Issues is;
  const FieldPtr f = field_at(j, "field", "", is, nullptr, fallback);
  auto u0 = get_int(j, "u0", "", is, 0), u1 = get_int(j, "u1", "", is, 0);
  const Json* gs = member(j, "G", "", is);
  if (!is.empty() || !f) is.raise("invalid theta shape");
  if (!gs->is_array()) {
    is.add("/G", "expected an array of matrices");
    is.raise("invalid theta shape");
  }
  ThetaShape g{static_cast<size_t>(*u0), static_cast<size_t>(*u1), {}};
  for (size_t k = 0; k < gs->size(); ++k) g.G.push_back(get_mat((*gs)[k], f, *u0, *u1, "/G/" + std::to_string(k), is));
  if (!is.empty()) is.raise("invalid theta shape");
  return g;
}

DeltaMap delta_from_json(const Json& j, const FieldPtr& fallback) {
  Issues is;
  const FieldPtr f = field_at(j, "field", "", is, nullptr, fallback);
  auto nv = get_int(j, "num_vars", "", is, 1);
  auto deg = get_int(j, "degree", "", is, 0);
  auto u0 = get_int(j, "u0", "", is, 0), u1 = get_int(j, "u1", "", is, 0);
  const Json* rows = member(j, "entries", "", is);
  if (!is.empty() || !f) is.raise("invalid delta map");
  DeltaMap d{static_cast<size_t>(*u0), static_cast<size_t>(*u1), {}};
  if (!rows->is_array() || static_cast<long long>(rows->size()) != *u0) {
    is.add("/entries", "expected " + std::to_string(*u0) + " rows");
    is.raise("invalid delta map");
  }
  for (size_t i = 0; i < d.u0; ++i) {
    const std::string rp = "/entries/" + std::to_string(i);
    std::vector<Form> row;
    if (!(*rows)[i].is_array() || (*rows)[i].size() != d.u1) {
      is.add(rp, "expected " + std::to_string(d.u1) + " forms");
      continue;
    }
    for (size_t c = 0; c < d.u1; ++c)
      row.push_back(get_form((*rows)[i][c], f, static_cast<int>(*nv), static_cast<int>(*deg), rp + "/" + std::to_string(c), is));
    d.entries.push_back(std::move(row));
  }
  if (!is.empty()) is.raise("invalid delta map");
  return d;
}

Submodule submodule_from_json(const Json& j, const FieldPtr& f) {
  Issues is;
  const Json* v = member(j, "V", "", is);
  const Json* w = member(j, "W", "", is);
  if (!is.empty()) is.raise("invalid submodule");
  Submodule s{get_mat(*v, f, -1, -1, "/V", is), get_mat(*w, f, -1, -1, "/W", is)};
  if (!is.empty()) is.raise("invalid submodule");
  return s;
}

HilbPoly hilbpoly_from_json(const Json& j) {
  Issues is;
  const Json* c = member(j, "coeffs", "", is);
  if (!is.empty()) is.raise("invalid Hilbert polynomial");
  if (!c->is_array()) {
    is.add("/coeffs", "expected an array");
    is.raise("invalid Hilbert polynomial");
  }
  std::vector<mpq_class> q;
  for (size_t i = 0; i < c->size(); ++i) {
    const Json& x = (*c)[i];
    try {
      if (x.is_number_integer()) {
        q.emplace_back(x.get<long>());
      } else if (x.is_string()) {
        mpq_class v(x.get<std::string>());
        v.canonicalize();
        q.push_back(v);
      } else {
        is.add("/coeffs/" + std::to_string(i), "expected a rational string");
      }
    } catch (const std::exception&) {
      is.add("/coeffs/" + std::to_string(i), "malformed rational");
    }
  }
  if (!is.empty()) is.raise("invalid Hilbert polynomial");
  return HilbPoly(q);
}

BridgeContext context_from_json(const Json& j) {
  Issues is;
  BridgeContext c;
  c.field = field_at(j, "field", "", is, nullptr);
  auto r = get_int(j, "r", "", is, 1);
  auto n = get_int(j, "n", "", is), m = get_int(j, "m", "", is);
  auto cap = get_int(j, "degree_cap", "", is, 0, false);
  auto budget = get_int(j, "theta_budget", "", is, 0, false);
  auto mp = get_int(j, "max_power", "", is, 1, false);
  std::optional<uint64_t> seed;
  if (j.is_object() && j.contains("seed")) {
    if (j["seed"].is_number_unsigned()) seed = j["seed"].get<uint64_t>();
    else is.add("/seed", "expected a nonnegative integer");
  }
  if (!is.empty()) is.raise("invalid context");
  c.r = static_cast<int>(*r);
  c.n = static_cast<int>(*n);
  c.m = static_cast<int>(*m);
  if (cap) c.degree_cap = static_cast<int>(*cap);
  if (budget) c.theta_budget = static_cast<uint64_t>(*budget);
  if (mp) c.max_power = static_cast<int>(*mp);
  if (seed) c.seed = *seed;
  return c;
}

Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& ex) {
    throw ParseError(source + ": " + ex.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ks::io
