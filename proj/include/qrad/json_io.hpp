#pragma once

#include <string>

#include "json.hpp"
#include "qrad/bounds.hpp"
#include "qrad/cmatrix.hpp"
#include "qrad/qradius.hpp"

namespace qrad {

/// Square: {"n": n, "data": [[re, im], ...]} with n² row-major entries.
/// Otherwise {"rows": r, "cols": c, "data": [...]}.
nlohmann::json matrix_to_json(const CMatrix& m);
/// Accepts both shapes. Throws ParseError on wrong shape or length and
/// NonFinite on NaN/Inf entries.
CMatrix matrix_from_json(const nlohmann::json& j);
/// Reads and parses a matrix file; ParseError if unreadable.
CMatrix read_matrix_file(const std::string& path);

nlohmann::json vector_to_json(const CVector& v);

nlohmann::json report_to_json(const IneqReport& r);
IneqReport report_from_json(const nlohmann::json& j);

}  // namespace qrad
