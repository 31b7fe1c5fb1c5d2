#include "compfkg/io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace compfkg {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
  return s;
}

Json rational_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.dump());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("expected a rational as \"p/q\" or an integer, got " + j.dump());
}

Json composition_json(const Composition& k) { return Json(k.parts()); }

std::string composition_key(const Composition& k) {
  std::string s;
  for (std::size_t i = 0; i < k.parts().size(); ++i) {
    if (i) s += ',';
    s += std::to_string(k[i]);
  }
  return s;
}

Composition composition_from_key(const std::string& key) {
  std::vector<int> parts;
  std::stringstream in(key);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      parts.push_back(v);
    } catch (const std::exception&) {
      throw SchemaError("malformed composition key '" + key + "'");
    }
  }
  if (parts.empty()) throw SchemaError("empty composition key");
  return Composition(parts);
}

Json lattice_json(const CompositionLattice& lat) {
  Json j;
  j["n"] = lat.n();
  j["r"] = lat.r();
  Json elements = Json::array();
  for (const auto& k : lat.elements()) elements.push_back(composition_json(k));
  j["elements"] = std::move(elements);
  Json covers = Json::array();
  for (auto [a, b] : lat.covers()) covers.push_back({a, b});
  j["covers"] = std::move(covers);
  return j;
}

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw SchemaError(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

int dim_field(const Json& j) {
  const auto& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<long>() < 1) throw SchemaError("\"dim\" must be a positive integer");
  return d.get<int>();
}

const Json& list_of(const Json& j, const char* key) {
  if (j.is_array()) return j;
  const auto& l = field(j, key);
  if (!l.is_array()) throw SchemaError(std::string("\"") + key + "\" must be an array");
  return l;
}

}  // namespace

Json polytope_json(const RationalPolytope& p) {
  Json j;
  j["dim"] = p.dim();
  Json verts = Json::array();
  for (const auto& v : p.vertices()) {
    Json row = Json::array();
    for (const auto& c : v) row.push_back(rational_json(c));
    verts.push_back(std::move(row));
  }
  j["vertices"] = std::move(verts);
  return j;
}

RationalPolytope polytope_from_json(const Json& j) {
  const int dim = dim_field(j);
  const auto& verts = field(j, "vertices");
  if (!verts.is_array() || verts.empty()) throw SchemaError("\"vertices\" must be a non-empty array");
  std::vector<std::vector<Rational>> pts;
  for (const auto& row : verts) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim) throw SchemaError("vertex with wrong arity: " + row.dump());
    std::vector<Rational> p;
    for (const auto& c : row) p.push_back(rational_from_json(c));
    pts.push_back(std::move(p));
  }
  return RationalPolytope(dim, pts);
}

Json newton_json(const NewtonPolyhedron& g) {
  Json j;
  j["dim"] = g.dim();
  j["generators"] = g.generators();
  return j;
}

NewtonPolyhedron newton_from_json(const Json& j) {
  const int dim = dim_field(j);
  const auto& gens = field(j, "generators");
  if (!gens.is_array() || gens.empty()) throw SchemaError("\"generators\" must be a non-empty array");
  std::vector<std::vector<long>> pts;
  for (const auto& row : gens) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim) throw SchemaError("generator with wrong arity: " + row.dump());
    std::vector<long> p;
    for (const auto& c : row) {
      if (!c.is_number_integer()) throw SchemaError("generator coordinates must be integers: " + row.dump());
      p.push_back(c.get<long>());
    }
    pts.push_back(std::move(p));
  }
  return NewtonPolyhedron(dim, pts);
}

std::vector<RationalPolytope> bodies_from_json(const Json& j) {
  std::vector<RationalPolytope> out;
  for (const auto& b : list_of(j, "bodies")) out.push_back(polytope_from_json(b));
  if (out.empty()) throw SchemaError("no bodies given");
  return out;
}

std::vector<NewtonPolyhedron> polyhedra_from_json(const Json& j) {
  std::vector<NewtonPolyhedron> out;
  for (const auto& g : list_of(j, "polyhedra")) out.push_back(newton_from_json(g));
  if (out.empty()) throw SchemaError("no polyhedra given");
  return out;
}

MixedVolumeTable table_from_json(const Json& j) {
  const auto& nj = field(j, "n");
  const auto& rj = field(j, "r");
  if (!nj.is_number_integer() || !rj.is_number_integer()) throw SchemaError("\"n\" and \"r\" must be integers");
  const int n = nj.get<int>(), r = rj.get<int>();
  if (n < 0 || r < 1) throw SchemaError("need n >= 0 and r >= 1");
  const char* name = j.contains("covol") ? "covol" : "vol";
  const auto& vals = field(j, name);
  if (!vals.is_object()) throw SchemaError(std::string("\"") + name + "\" must be an object");
  auto lat = make_lattice(n, r);
  std::vector<Rational> values(lat->size());
  std::vector<bool> seen(lat->size(), false);
  for (const auto& [key, v] : vals.items()) {
    auto k = composition_from_key(key);
    auto idx = lat->find(k);
    if (!idx) throw SchemaError("key " + key + " is not in K_{" + std::to_string(n) + "," + std::to_string(r) + "}");
    values[*idx] = rational_from_json(v);
    if (sgn(values[*idx]) < 0) throw SchemaError("negative value at " + key);
    seen[*idx] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw SchemaError("table is missing key " + composition_key(lat->at(i)));
  }
  return MixedVolumeTable(n, r, std::move(values));
}

Json table_json(const MixedVolumeTable& t, const std::string& field_name) {
  Json j;
  j["n"] = t.dim();
  j["r"] = t.bodies();
  Json vals = Json::object();
  for (std::size_t i = 0; i < t.values().size(); ++i) vals[composition_key(t.keys().at(i))] = rational_json(t.values()[i]);
  j[field_name] = std::move(vals);
  return j;
}

LatticeFunction function_from_json(const Json& j, LatticePtr lat) {
  const auto& vals = field(j, "values");
  if (!vals.is_object()) throw SchemaError("\"values\" must be an object");
  return LatticeFunction::from(lat, [&](const Composition& k) {
    for (const auto& key : {composition_key(k), composition_key(Composition(k.sorted_desc()))}) {
      if (vals.contains(key)) return rational_from_json(vals.at(key));
    }
    throw SchemaError("function has no value for " + composition_key(k));
  });
}

Json fkg_report_json(const FkgReport& r) {
  Json j;
  j["av_f"] = rational_json(r.av_f);
  j["av_g"] = rational_json(r.av_g);
  j["av_fg"] = rational_json(r.av_fg);
  j["gap"] = rational_json(r.gap);
  j["expected_sign"] = r.expected_sign;
  j["holds"] = r.holds;
  j["equality"] = r.equality;
  j["equality_condition"] = r.equality_condition;
  j["equality_consistent"] = r.equality_consistent;
  j["f_monotonicity"] = r.f_monotonicity;
  j["g_monotonicity"] = r.g_monotonicity;
  return j;
}

Json certified_sign_json(const CertifiedSign& s) {
  Json j;
  j["sign"] = s.sign;
  j["precision"] = static_cast<long>(s.precision);
  j["lo"] = s.lo;
  j["hi"] = s.hi;
  return j;
}

Json read_json_file(const std::string& path, std::uint64_t* hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (hash) *hash = fnv1a(bytes);
  try {
    return Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string to_markdown(const Json& report) {
  std::ostringstream out;
  out << "# " << report.value("command", std::string("report")) << "\n\n";
  out << "| field | value |\n|---|---|\n";
  std::ostringstream blocks;
  for (const auto& [key, v] : report.items()) {
    if (v.is_structured()) {
      blocks << "\n## " << key << "\n\n```json\n" << v.dump(2) << "\n```\n";
    } else {
      out << "| " << key << " | " << (v.is_string() ? v.get<std::string>() : v.dump()) << " |\n";
    }
  }
  out << blocks.str();
  return out.str();
}

}  // namespace compfkg
