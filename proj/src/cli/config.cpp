#include "qmeas/cli/config.hpp"

#include "qmeas/serialize.hpp"

#include <fstream>
#include <sstream>

namespace qmeas::cli {

namespace {

const Json* find(const Json& j, const char* key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double require_number(const Json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field + ": expected a number");
    return j.get<double>();
}

PointerObservable parse_observable(const Json& j, const std::string& field,
                                   std::size_t index) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "q") return PointerObservable::position();
        if (name == "p") return PointerObservable::momentum();
        if (name == "q2") return PointerObservable::position_power(2);
        if (name == "p2") return PointerObservable::momentum_power(2);
        if (name == "qp") return PointerObservable::polynomial({{1.0, 1, 1}}, "qp");
        throw ConfigError(field + ": unknown observable '" + name +
                          "' (use q, p, q2, p2, qp or a terms object)");
    }
    if (j.is_object() && find(j, "terms")) {
        const Json& terms = j["terms"];
        if (!terms.is_array() || terms.empty())
            throw ConfigError(field + ".terms: expected a non-empty list");
        std::vector<ObservableTerm> parsed;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const Json& t = terms[i];
            const std::string tf = field + ".terms[" + std::to_string(i) + "]";
            if (!t.is_object()) throw ConfigError(tf + ": expected an object");
            ObservableTerm term{};
            term.coeff = require_number(t.value("coeff", Json()), tf + ".coeff");
            term.q_power = static_cast<int>(
                require_number(t.value("q_power", Json(0)), tf + ".q_power"));
            term.p_power = static_cast<int>(
                require_number(t.value("p_power", Json(0)), tf + ".p_power"));
            if (term.q_power < 0 || term.p_power < 0)
                throw ConfigError(tf + ": powers must be non-negative");
            parsed.push_back(term);
        }
        // positional name keeps per-observable output files distinct
        return PointerObservable::polynomial(std::move(parsed),
                                             "poly" + std::to_string(index));
    }
    throw ConfigError(field + ": expected an observable name or a terms object");
}

} // namespace

PointerGrid ExperimentConfig::grid() const {
    try {
        return PointerGrid(n_points, q_min, q_max, hbar);
    } catch (const Error& e) {
        throw ConfigError(std::string("pointer: ") + e.what());
    }
}

PointerState ExperimentConfig::phi0() const {
    try {
        return gaussian_pointer(grid(), center, sigma);
    } catch (const GridContainment& e) {
        throw ConfigError(std::string("pointer: ") + e.what());
    }
}

Projector ExperimentConfig::projector() const {
    if (!op) throw ConfigError("system.operator: missing");
    try {
        return Projector(op->matrix());
    } catch (const NotIdempotent& e) {
        throw ConfigError(std::string("system.operator: not a projector (") + e.what() +
                          ")");
    }
}

ExperimentConfig parse_config(const std::string& text) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");

    ExperimentConfig cfg;
    cfg.raw_text = text;

    const Json* system = find(root, "system");
    if (!system || !system->is_object())
        throw ConfigError("system: required object is missing");
    cfg.dimension =
        static_cast<int>(require_number(system->value("dimension", Json()), "system.dimension"));
    if (cfg.dimension < 2) throw ConfigError("system.dimension: must be >= 2");

    const Json* psi = find(*system, "psi");
    if (!psi) throw ConfigError("system.psi: required");
    cfg.psi = state_from_json(*psi, "system.psi");
    if (cfg.psi->dim() != cfg.dimension)
        throw ConfigError("system.psi: length does not match system.dimension");

    if (const Json* psi_f = find(*system, "psi_f")) {
        cfg.psi_f = state_from_json(*psi_f, "system.psi_f");
        if (cfg.psi_f->dim() != cfg.dimension)
            throw ConfigError("system.psi_f: length does not match system.dimension");
    }

    const Json* op_spec = find(*system, "operator");
    if (!op_spec || !op_spec->is_object())
        throw ConfigError("system.operator: required object is missing");
    if (const Json* basis = find(*op_spec, "projector_basis")) {
        if (!basis->is_array() || basis->empty())
            throw ConfigError("system.operator.projector_basis: expected a non-empty list");
        std::vector<SystemState> vectors;
        for (std::size_t i = 0; i < basis->size(); ++i)
            vectors.push_back(state_from_json(
                (*basis)[i],
                "system.operator.projector_basis[" + std::to_string(i) + "]"));
        try {
            cfg.op = make_projector(vectors);
        } catch (const Error& e) {
            throw ConfigError(std::string("system.operator.projector_basis: ") + e.what());
        }
        cfg.op_from_projector_basis = true;
    } else if (const Json* herm = find(*op_spec, "hermitian_matrix")) {
        try {
            cfg.op = SystemOperator(
                matrix_from_json(*herm, "system.operator.hermitian_matrix"));
        } catch (const Error& e) {
            throw ConfigError(std::string("system.operator.hermitian_matrix: ") + e.what());
        }
    } else {
        throw ConfigError(
            "system.operator: needs either projector_basis or hermitian_matrix");
    }
    if (cfg.op->dim() != cfg.dimension)
        throw ConfigError("system.operator: dimension does not match system.dimension");

    if (const Json* pointer = find(root, "pointer")) {
        if (!pointer->is_object()) throw ConfigError("pointer: expected an object");
        cfg.n_points = static_cast<int>(
            require_number(pointer->value("n_points", Json(1024)), "pointer.n_points"));
        if (const Json* range = find(*pointer, "q_range")) {
            if (!range->is_array() || range->size() != 2)
                throw ConfigError("pointer.q_range: expected [q_min, q_max]");
            cfg.q_min = require_number((*range)[0], "pointer.q_range[0]");
            cfg.q_max = require_number((*range)[1], "pointer.q_range[1]");
        }
        cfg.sigma = require_number(pointer->value("sigma", Json(1.0)), "pointer.sigma");
        cfg.center = require_number(pointer->value("center", Json(0.0)), "pointer.center");
        cfg.hbar = require_number(pointer->value("hbar", Json(1.0)), "pointer.hbar");
        if (cfg.sigma <= 0) throw ConfigError("pointer.sigma: must be > 0");
    }

    const Json* sweep = find(root, "sweep");
    if (!sweep || !sweep->is_object())
        throw ConfigError("sweep: required object is missing");
    if (const Json* list = find(*sweep, "gamma")) {
        if (!list->is_array() || list->empty())
            throw ConfigError("sweep.gamma: expected a non-empty list");
        for (std::size_t i = 0; i < list->size(); ++i)
            cfg.gammas.push_back(
                require_number((*list)[i], "sweep.gamma[" + std::to_string(i) + "]"));
    } else if (const Json* range = find(*sweep, "gamma_range")) {
        if (!range->is_array() || range->size() != 2)
            throw ConfigError("sweep.gamma_range: expected [lo, hi]");
        const double lo = require_number((*range)[0], "sweep.gamma_range[0]");
        const double hi = require_number((*range)[1], "sweep.gamma_range[1]");
        const int steps = static_cast<int>(
            require_number(sweep->value("steps", Json()), "sweep.steps"));
        if (steps < 1) throw ConfigError("sweep.steps: must be >= 1");
        for (int i = 0; i < steps; ++i)
            cfg.gammas.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
    } else {
        throw ConfigError("sweep: needs either gamma or gamma_range+steps");
    }

    if (const Json* observables = find(root, "observables")) {
        if (!observables->is_array() || observables->empty())
            throw ConfigError("observables: expected a non-empty list");
        for (std::size_t i = 0; i < observables->size(); ++i)
            cfg.observables.push_back(parse_observable(
                (*observables)[i], "observables[" + std::to_string(i) + "]", i));
        for (std::size_t i = 0; i < cfg.observables.size(); ++i)
            for (std::size_t j = i + 1; j < cfg.observables.size(); ++j)
                if (cfg.observables[i].name() == cfg.observables[j].name())
                    throw ConfigError("observables: duplicate entry '" +
                                      cfg.observables[i].name() + "'");
    } else {
        cfg.observables = {PointerObservable::position(), PointerObservable::momentum()};
    }

    if (const Json* outputs = find(root, "outputs")) {
        if (!outputs->is_object()) throw ConfigError("outputs: expected an object");
        cfg.output_directory = outputs->value("directory", std::string("out"));
        if (const Json* formats = find(*outputs, "formats")) {
            if (!formats->is_array())
                throw ConfigError("outputs.formats: expected a list");
            cfg.csv_output = false;
            cfg.json_output = false;
            for (const auto& f : *formats) {
                const std::string name = f.get<std::string>();
                if (name == "csv")
                    cfg.csv_output = true;
                else if (name == "json")
                    cfg.json_output = true;
                else
                    throw ConfigError("outputs.formats: unknown format '" + name + "'");
            }
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace qmeas::cli
