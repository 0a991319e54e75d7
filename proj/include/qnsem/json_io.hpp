#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qnsem/hilbert.hpp"
#include "qnsem/ks.hpp"
#include "qnsem/nmatrix.hpp"
#include "qnsem/oml.hpp"
#include "qnsem/quantum.hpp"

namespace qnsem {

using Json = nlohmann::ordered_json;

/// Parses a file; errors name the path.
Json load_json_file(const std::string& path);

ComplexMatrix matrix_from_json(const Json& j);
Json to_json(const ComplexMatrix& m);

/// Accepts the matrix form with optional "kind"; rejects a mismatched kind.
Projector projector_from_json(const Json& j, double tol = kDefaultTol);
DensityOperator density_from_json(const Json& j, double tol = kDefaultTol);
Json to_json(const Projector& p);
Json to_json(const DensityOperator& rho);

/// {"P": <projector>, ...}
Bindings bindings_from_json(const Json& j, double tol = kDefaultTol);

/// {"values":[...],"designated":[...],"tables":{"not":{"t":["F"]},"and":{"t,t":["t"]}}}
FiniteNMatrix finite_nmatrix_from_json(const Json& j);
Json to_json(const FiniteNMatrix& m);

/// Order-table form, or the Greechie form when "blocks" is present.
FiniteOML lattice_from_json(const Json& j);
Json to_json(const FiniteOML& l);

VectorContextFamily family_from_json(const Json& j);

/// {"pieces":[{"lo":0,"hi":1,"lo_open":true,"hi_open":true,"label":"T"},...]}
ThresholdMap threshold_map_from_json(const Json& j);

/// A JSON array of formula strings, or text with one formula per line
/// (blank lines and lines starting with # are skipped).
std::vector<Formula> load_formulas(const std::string& path);

}  // namespace qnsem
