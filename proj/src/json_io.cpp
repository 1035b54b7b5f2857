#include "qfrac/json_io.hpp"

#include <fstream>
#include <sstream>

namespace qfrac {

namespace {

// nlohmann reports a byte offset; recover 1-based line/column for diagnostics.
std::pair<long, long> offset_to_position(const std::string& text, size_t offset) {
    long line = 1, column = 1;
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace

nlohmann::json quaternion_to_json(const Quaternion& q) {
    return nlohmann::json::array({q.w, q.x, q.y, q.z});
}

Quaternion quaternion_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4)
        throw ParseError("quaternion must be a 4-array [w,x,y,z]", 0, 0);
    return Quaternion(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                      j[3].get<double>());
}

nlohmann::json matrix_to_json(const QMatrix& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < t.n(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < t.n(); ++j) row.push_back(quaternion_to_json(t.at(i, j)));
        rows.push_back(row);
    }
    return nlohmann::json{{"n", t.n()}, {"entries", rows}};
}

QMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
        throw ParseError("matrix file must carry \"n\" and \"entries\"", 0, 0);
    const int n = j["n"].get<int>();
    if (n <= 0) throw ParseError("matrix dimension must be positive", 0, 0);
    const auto& rows = j["entries"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        throw ParseError("\"entries\" must be an n x n array", 0, 0);
    QMatrix t(n);
    for (int i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ParseError("\"entries\" must be an n x n array", 0, 0);
        for (int k = 0; k < n; ++k)
            t.at(i, k) = quaternion_from_json(row[static_cast<size_t>(k)]);
    }
    return t;
}

QMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0, 0);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = offset_to_position(text, e.byte);
        throw ParseError(std::string("parse error: ") + e.what(), line, column);
    }
    return matrix_from_json(j);
}

void save_matrix(const std::string& path, const QMatrix& t) {
    std::ofstream out(path);
    out << matrix_to_json(t).dump(2) << "\n";
}

nlohmann::json spectral_report_to_json(const SpectralReport& rep) {
    nlohmann::json spheres = nlohmann::json::array();
    for (const auto& s : rep.spheres)
        spheres.push_back({{"s0", s.s0}, {"s1", s.s1}, {"multiplicity", s.multiplicity}});
    return nlohmann::json{{"spheres", spheres},
                          {"maxModulus", rep.maxModulus},
                          {"maxArg", rep.maxArg}};
}

nlohmann::json report_meta_to_json(double errorEstimate, long evaluations,
                                   bool converged) {
    return nlohmann::json{{"errorEstimate", errorEstimate},
                          {"evaluations", evaluations},
                          {"converged", converged}};
}

} // namespace qfrac
