#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmeas/hilbert.hpp"
#include "qmeas/pointer.hpp"

namespace qmeas {

using Json = nlohmann::json;

/// Complex numbers are serialized as [re, im]; matrices row-major.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& field);

Json state_to_json(const SystemState& psi);
SystemState state_from_json(const Json& j, const std::string& field);

Json operator_to_json(const SystemOperator& op);
Matrix matrix_from_json(const Json& j, const std::string& field);

/// "%.17g": every double round-trips exactly.
std::string format_number(double value);

/// CSV with '#'-prefixed metadata lines, a header row, and %.17g numbers.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& metadata,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows);

/// Pointer wavefunction export: columns q, re_phi, im_phi, abs2_phi.
void write_pointer_csv(const std::filesystem::path& path, const PointerState& phi,
                       const std::vector<std::string>& extra_metadata = {});

/// Position-distribution export: columns q, <column_name>.
void write_profile_csv(const std::filesystem::path& path, const PointerGrid& grid,
                       const std::string& column_name, const Eigen::VectorXd& profile,
                       const std::vector<std::string>& extra_metadata = {});

} // namespace qmeas
