#include "qmeas/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace qmeas {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(field + ": complex number must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

Json state_to_json(const SystemState& psi) {
    Json out = Json::array();
    for (int k = 0; k < psi.dim(); ++k) out.push_back(complex_to_json(psi[k]));
    return out;
}

SystemState state_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() < 2)
        throw ConfigError(field + ": state must be a list of >= 2 complex entries");
    Vector v(j.size());
    for (std::size_t k = 0; k < j.size(); ++k)
        v[static_cast<int>(k)] =
            complex_from_json(j[k], field + "[" + std::to_string(k) + "]");
    try {
        return SystemState(std::move(v));
    } catch (const Error& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

Json operator_to_json(const SystemOperator& op) {
    Json out = Json::array();
    for (int r = 0; r < op.dim(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < op.dim(); ++c) row.push_back(complex_to_json(op.matrix()(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty())
        throw ConfigError(field + ": matrix must be a non-empty list of rows");
    const std::size_t d = j.size();
    Matrix m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        if (!j[r].is_array() || j[r].size() != d)
            throw ConfigError(field + ": matrix must be square, row " + std::to_string(r) +
                              " has wrong length");
        for (std::size_t c = 0; c < d; ++c)
            m(static_cast<int>(r), static_cast<int>(c)) = complex_from_json(
                j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
    return m;
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& metadata,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    for (const auto& line : metadata) out << "# " << line << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "");
        out << "\n";
    }
    if (!out) throw Error("write failed for " + path.string());
}

namespace {

std::vector<std::string> grid_metadata(const PointerGrid& grid) {
    return {"n_points=" + std::to_string(grid.n()),
            "q_min=" + format_number(grid.q_min()),
            "q_max=" + format_number(grid.q_max()),
            "hbar=" + format_number(grid.hbar())};
}

} // namespace

void write_pointer_csv(const std::filesystem::path& path, const PointerState& phi,
                       const std::vector<std::string>& extra_metadata) {
    auto metadata = grid_metadata(phi.grid());
    metadata.insert(metadata.end(), extra_metadata.begin(), extra_metadata.end());
    std::vector<std::vector<std::string>> rows;
    rows.reserve(phi.grid().n());
    for (int j = 0; j < phi.grid().n(); ++j) {
        const Complex a = phi.amplitudes()[j];
        rows.push_back({format_number(phi.grid().q(j)), format_number(a.real()),
                        format_number(a.imag()), format_number(std::norm(a))});
    }
    write_csv(path, metadata, {"q", "re_phi", "im_phi", "abs2_phi"}, rows);
}

void write_profile_csv(const std::filesystem::path& path, const PointerGrid& grid,
                       const std::string& column_name, const Eigen::VectorXd& profile,
                       const std::vector<std::string>& extra_metadata) {
    auto metadata = grid_metadata(grid);
    metadata.insert(metadata.end(), extra_metadata.begin(), extra_metadata.end());
    std::vector<std::vector<std::string>> rows;
    rows.reserve(grid.n());
    for (int j = 0; j < grid.n(); ++j)
        rows.push_back({format_number(grid.q(j)), format_number(profile[j])});
    write_csv(path, metadata, {"q", column_name}, rows);
}

} // namespace qmeas
