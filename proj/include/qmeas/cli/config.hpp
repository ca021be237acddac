#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qmeas/exact.hpp"
#include "qmeas/hilbert.hpp"
#include "qmeas/pointer.hpp"

namespace qmeas::cli {

/// Parsed experiment configuration. Single JSON document; complex numbers are
/// [re, im] pairs, operators are given either as a projector basis or as a
/// Hermitian matrix.
struct ExperimentConfig {
    int dimension = 0;
    std::optional<SystemState> psi;
    std::optional<SystemState> psi_f;
    std::optional<SystemOperator> op;
    bool op_from_projector_basis = false;

    int n_points = 1024;
    double q_min = -20.0;
    double q_max = 20.0;
    double sigma = 1.0;
    double center = 0.0;
    double hbar = 1.0;

    std::vector<double> gammas;
    std::vector<PointerObservable> observables;

    std::string output_directory = "out";
    bool csv_output = true;
    bool json_output = true;

    std::string raw_text; // exact file contents, hashed into the manifest

    PointerGrid grid() const;
    PointerState phi0() const;
    /// The configured operator as a projector; ConfigError if it is not one.
    Projector projector() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace qmeas::cli
