#pragma once

#include <string>

#include <json.hpp>

#include "qfrac/qmatrix.hpp"
#include "qfrac/quadrature.hpp"
#include "qfrac/spectral.hpp"

namespace qfrac {

// Matrix file format: {"n": int, "entries": [[[w,x,y,z], ...], ...]} row-major.
// Doubles round-trip exactly through the emitted text.
nlohmann::json matrix_to_json(const QMatrix& t);
QMatrix matrix_from_json(const nlohmann::json& j);

// Parses a matrix file; malformed input raises ParseError with line/column.
QMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const QMatrix& t);

nlohmann::json quaternion_to_json(const Quaternion& q);
Quaternion quaternion_from_json(const nlohmann::json& j);

nlohmann::json spectral_report_to_json(const SpectralReport& rep);

nlohmann::json report_meta_to_json(double errorEstimate, long evaluations,
                                   bool converged);

} // namespace qfrac
