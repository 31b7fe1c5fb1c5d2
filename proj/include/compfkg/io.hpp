#pragma once

// JSON formats for lattices, bodies, Newton polyhedra, value tables and reports.
// Rationals travel as "p/q" strings; keys keep insertion order so output is stable.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "compfkg/averaging.hpp"
#include "compfkg/geometry.hpp"
#include "compfkg/lattice.hpp"

namespace compfkg {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "comp-fkg/1";

/// Malformed input file (bad JSON, missing or mistyped field).
class SchemaError : public DomainError {
 public:
  using DomainError::DomainError;
};

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

Json rational_json(const Rational& q);
Rational rational_from_json(const Json& j);
Json composition_json(const Composition& k);
/// "k1,k2,..."
std::string composition_key(const Composition& k);
Composition composition_from_key(const std::string& key);

/// {"n", "r", "elements", "covers"} with covers as [upper, lower] indices.
Json lattice_json(const CompositionLattice& lat);

/// {"dim", "vertices": [["p/q", ...], ...]}
Json polytope_json(const RationalPolytope& p);
RationalPolytope polytope_from_json(const Json& j);
/// {"dim", "generators": [[int, ...], ...]}
Json newton_json(const NewtonPolyhedron& g);
NewtonPolyhedron newton_from_json(const Json& j);

/// A list of objects, given as a top-level array or under "bodies" / "polyhedra".
std::vector<RationalPolytope> bodies_from_json(const Json& j);
std::vector<NewtonPolyhedron> polyhedra_from_json(const Json& j);

/// {"n": N, "r": r, "<field>": {"k1,...,kr": "p/q"}} with every k in K_{N,r};
/// "covol" is tried first, then "vol". Values must be non-negative.
MixedVolumeTable table_from_json(const Json& j);
Json table_json(const MixedVolumeTable& t, const std::string& field = "covol");

/// {"values": {"k1,...": "p/q"}} on `lat`. A missing key falls back to the
/// key of its sorted-descending representative, so invariant functions can be
/// given per class.
LatticeFunction function_from_json(const Json& j, LatticePtr lat);

Json fkg_report_json(const FkgReport& r);
Json certified_sign_json(const CertifiedSign& s);

/// Reads and parses a JSON file; SchemaError on I/O or syntax failure. `hash`
/// receives the FNV-1a of the raw bytes.
Json read_json_file(const std::string& path, std::uint64_t* hash = nullptr);
/// Stable dump: two-space indent and trailing newline.
std::string dump(const Json& j);
/// A flat rendering for people: scalar fields as a table, the rest as JSON blocks.
std::string to_markdown(const Json& report);

}  // namespace compfkg
