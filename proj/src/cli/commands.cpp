#include "qmeas/cli/commands.hpp"

#include "qmeas/cli/config.hpp"
#include "qmeas/cli/manifest.hpp"
#include "qmeas/exact.hpp"
#include "qmeas/montecarlo.hpp"
#include "qmeas/oracle.hpp"
#include "qmeas/serialize.hpp"
#include "qmeas/verify.hpp"
#include "qmeas/version.hpp"
#include "qmeas/weak.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace qmeas::cli {

namespace {

namespace fs = std::filesystem;

template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return 3;
    }
}

ExperimentConfig load_with_format(const CommandOptions& options) {
    if (options.config_path.empty())
        throw ConfigError("--config: required for this command");
    ExperimentConfig cfg = load_config(options.config_path);
    if (options.format) {
        cfg.csv_output = (*options.format == "csv");
        cfg.json_output = (*options.format == "json");
    }
    return cfg;
}

fs::path resolve_out_dir(const CommandOptions& options, const ExperimentConfig& cfg) {
    const fs::path dir = options.out_dir.value_or(fs::path(cfg.output_directory));
    fs::create_directories(dir);
    return dir;
}

RunManifest start_manifest(const std::string& command, const CommandOptions& options,
                           const ExperimentConfig& cfg) {
    RunManifest m;
    m.command = command;
    m.config_hash = fnv1a_hex(cfg.raw_text);
    m.tool_version = kVersion;
    m.timestamp = iso8601_utc_now();
    m.seed = options.seed;
    return m;
}

std::vector<std::string> sweep_metadata(const std::string& command, double gamma) {
    return {"command=" + command, "gamma=" + format_number(gamma)};
}

void print_check(std::ostream& log, const CheckResult& check) {
    log << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": max residual "
        << format_number(check.max_residual) << " (tol "
        << format_number(check.tolerance) << ")";
    if (!check.note.empty()) log << " -- " << check.note;
    log << "\n";
}

Json check_to_json(const CheckResult& check) {
    Json j;
    j["name"] = check.name;
    j["pass"] = check.pass;
    j["max_residual"] = check.max_residual;
    j["tolerance"] = check.tolerance;
    j["note"] = check.note;
    j["seconds"] = check.seconds;
    return j;
}

void write_json_file(const fs::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

} // namespace

std::vector<MeasurementConfig> sweep_configs(const ExperimentConfig& cfg) {
    const Projector a = cfg.projector();
    const PointerState phi = cfg.phi0();
    std::vector<MeasurementConfig> sweep;
    sweep.reserve(cfg.gammas.size());
    for (double gamma : cfg.gammas) sweep.emplace_back(gamma, a, phi);
    return sweep;
}

int cmd_ps(const CommandOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        const ExperimentConfig cfg = load_with_format(options);
        const std::vector<MeasurementConfig> sweep = sweep_configs(cfg);
        const SystemState& psi = *cfg.psi;
        const auto q = PointerObservable::position();
        const auto p = PointerObservable::momentum();

        const fs::path out = resolve_out_dir(options, cfg);
        RunManifest manifest = start_manifest("ps", options, cfg);

        if (cfg.csv_output) {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < sweep.size(); ++i) {
                const MeasurementConfig& m = sweep[i];
                const std::string name = "ps_profile_" + std::to_string(i) + ".csv";
                write_profile_csv(out / name, m.phi0.grid(), "ps_profile",
                                  ps_profile(psi, m.phi0, m.op, m.gamma),
                                  sweep_metadata("ps", m.gamma));
                manifest.outputs.push_back(name);
                rows.push_back({format_number(m.gamma),
                                format_number(ps_mean(q, psi, m.phi0, m.op, m.gamma)),
                                format_number(ps_mean(p, psi, m.phi0, m.op, m.gamma)),
                                format_number(ps_variance(q, psi, m.phi0, m.op, m.gamma))});
            }
            write_csv(out / "ps_means.csv", {"command=ps"},
                      {"gamma", "mean_q", "mean_p", "var_q"}, rows);
            manifest.outputs.push_back("ps_means.csv");
        }
        write_manifest(out, manifest);
        log << "ps: wrote " << manifest.outputs.size() << " output file(s) to "
            << out.string() << "\n";
        return 0;
    });
}

int cmd_pps(const CommandOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        const ExperimentConfig cfg = load_with_format(options);
        if (!cfg.psi_f)
            throw ConfigError("system.psi_f: required for the pps command");
        const std::vector<MeasurementConfig> sweep = sweep_configs(cfg);
        const PPSContext ctx = pps_context(*cfg.psi, *cfg.psi_f, sweep.front().op);
        const auto q = PointerObservable::position();
        const auto p = PointerObservable::momentum();

        const fs::path out = resolve_out_dir(options, cfg);
        RunManifest manifest = start_manifest("pps", options, cfg);

        Json summary = Json::array();
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            const double gamma = sweep[i].gamma;
            const Projector& a = sweep[i].op;
            const PointerState& phi = sweep[i].phi0;
            const PPSPointerState state = pps_pointer_state(ctx, a, phi, gamma);
            if (cfg.csv_output) {
                const std::string profile_name =
                    "pps_profile_" + std::to_string(i) + ".csv";
                write_profile_csv(out / profile_name, phi.grid(), "pps_profile",
                                  pps_profile(ctx, a, phi, gamma),
                                  sweep_metadata("pps", gamma));
                manifest.outputs.push_back(profile_name);
                const std::string state_name = "pps_state_" + std::to_string(i) + ".csv";
                write_pointer_csv(out / state_name, state.pointer,
                                  sweep_metadata("pps", gamma));
                manifest.outputs.push_back(state_name);
            }
            rows.push_back({format_number(gamma),
                            format_number(pps_mean(q, ctx, a, phi, gamma)),
                            format_number(pps_mean(p, ctx, a, phi, gamma)),
                            format_number(pps_variance(q, ctx, a, phi, gamma))});
            Json row;
            row["gamma"] = gamma;
            row["a_w_re"] = ctx.a_w.re();
            row["a_w_im"] = ctx.a_w.im();
            row["chi"] = ctx.chi;
            row["n"] = state.normalization_n;
            summary.push_back(std::move(row));
        }
        if (cfg.csv_output) {
            write_csv(out / "pps_means.csv", {"command=pps"},
                      {"gamma", "mean_q", "mean_p", "var_q"}, rows);
            manifest.outputs.push_back("pps_means.csv");
        }
        if (cfg.json_output) {
            Json doc;
            doc["overlap"] = complex_to_json(ctx.overlap);
            doc["rows"] = std::move(summary);
            write_json_file(out / "pps_summary.json", doc);
            manifest.outputs.push_back("pps_summary.json");
        }
        write_manifest(out, manifest);
        log << "pps: wrote " << manifest.outputs.size() << " output file(s) to "
            << out.string() << "\n";
        return 0;
    });
}

int cmd_verify(const CommandOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        std::optional<ExperimentConfig> cfg;
        if (!options.config_path.empty()) cfg = load_config(options.config_path);

        std::vector<CheckResult> results;
        if (cfg) {
            const std::optional<SystemState> psi_f = cfg->psi_f;
            results.push_back(checks::configured_instance(*cfg->psi, psi_f, *cfg->op,
                                                          cfg->phi0(), cfg->gammas));
        }
        VerifyOptions vopt;
        vopt.instances = options.verify_instances;
        vopt.seed = options.seed;
        const std::vector<CheckResult> suite = run_verify_suite(vopt);
        results.insert(results.end(), suite.begin(), suite.end());

        bool all_pass = true;
        for (const auto& check : results) {
            print_check(log, check);
            all_pass = all_pass && check.pass;
        }

        const fs::path out =
            options.out_dir.value_or(cfg ? fs::path(cfg->output_directory) : "out");
        fs::create_directories(out);
        RunManifest manifest;
        manifest.command = "verify";
        manifest.config_hash = cfg ? fnv1a_hex(cfg->raw_text) : fnv1a_hex("");
        manifest.tool_version = kVersion;
        manifest.timestamp = iso8601_utc_now();
        manifest.seed = vopt.seed;

        Json report;
        report["all_pass"] = all_pass;
        report["instances"] = vopt.instances;
        Json items = Json::array();
        for (const auto& check : results) items.push_back(check_to_json(check));
        report["checks"] = std::move(items);
        write_json_file(out / "verify_report.json", report);
        manifest.outputs.push_back("verify_report.json");
        write_manifest(out, manifest);

        log << (all_pass ? "verify: all checks passed\n"
                         : "verify: FAILURES detected\n");
        return all_pass ? 0 : 2;
    });
}

int cmd_sensitivity(const CommandOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        const ExperimentConfig cfg = load_with_format(options);
        const PointerState phi = cfg.phi0();
        const SystemState& psi = *cfg.psi;
        const SystemOperator& op = *cfg.op;
        const bool pps = cfg.psi_f.has_value();
        const auto q = PointerObservable::position();

        std::optional<PPSContext> ctx;
        if (pps) ctx = pps_context(psi, *cfg.psi_f, op);

        const fs::path out = resolve_out_dir(options, cfg);
        RunManifest manifest = start_manifest("sensitivity", options, cfg);

        const std::string nan = format_number(std::nan(""));
        for (const auto& m : cfg.observables) {
            if (!cfg.csv_output) break;
            std::vector<std::vector<std::string>> rows;
            for (double gamma : cfg.gammas) {
                std::string delta_a = nan, delta_g = nan, delta_re = nan;
                std::string b_im = nan, c_val = nan, status = "ok";
                bool weak_warning = false;
                try {
                    const SensitivityReport ps_rep =
                        sensitivity_ps(m, psi, op, phi, gamma);
                    delta_a = format_number(ps_rep.delta_mean_a);
                    b_im = format_number(ps_rep.b_mp.imag());
                    c_val = format_number(ps_rep.c_mp);
                    weak_warning = ps_rep.weakness_warning;
                    if (pps) {
                        const SensitivityReport pps_rep =
                            sensitivity_re_weak_value(m, *ctx, op, phi, gamma);
                        delta_re = format_number(pps_rep.delta_re_aw);
                        weak_warning = weak_warning || pps_rep.weakness_warning;
                    }
                    delta_g = format_number(sensitivity_gamma(psi, op, phi));
                } catch (const UndefinedSensitivity& e) {
                    status = "undefined_sensitivity";
                } catch (const InvalidRegime& e) {
                    status = "invalid_regime";
                }
                if (weak_warning)
                    log << "warning: gamma=" << format_number(gamma)
                        << " is outside the heuristic weak regime for observable "
                        << m.name() << "\n";
                rows.push_back({format_number(gamma), delta_a, delta_g, delta_re, b_im,
                                c_val, status});
            }
            const std::string name = "sensitivity_" + m.name() + ".csv";
            write_csv(out / name, {"command=sensitivity", "observable=" + m.name()},
                      {"gamma", "delta_mean_a", "delta_gamma", "delta_re_aw", "b_mp_im",
                       "c_mp", "status"},
                      rows);
            manifest.outputs.push_back(name);
        }

        if (cfg.json_output) {
            Json doc;
            doc["n_draws"] = options.mc_draws;
            doc["seed"] = options.seed;
            Json rows = Json::array();
            if (op.is_projector()) {
                const Projector proj(op.matrix());
                Rng rng(options.seed);
                for (double gamma : cfg.gammas) {
                    Json row;
                    row["gamma"] = gamma;
                    Json checks = Json::array();
                    auto add = [&](const McCheck& c) {
                        Json item;
                        item["quantity"] = c.quantity;
                        item["predicted"] = c.predicted;
                        item["empirical"] = c.empirical;
                        item["rel_diff"] = c.rel_diff;
                        checks.push_back(std::move(item));
                    };
                    try {
                        if (pps) {
                            add(mc_check_re_aw(*ctx, proj, phi, gamma, options.mc_draws,
                                               rng));
                            // sign of the Im A_w accuracy term for M = q
                            const MomentReport mom = moments(phi, q);
                            const double c_qp =
                                pair_moment_functional(phi, q, true).real();
                            const double bracket =
                                c_qp - 2.0 * mom.mean_p *
                                           (mom.var_q - mom.mean_q * mom.mean_q);
                            const double effect = bracket * ctx->a_w.im();
                            row["im_aw_accuracy_term"] = effect;
                            row["im_aw_accuracy_effect"] =
                                std::abs(effect) < 1e-12 ? "none"
                                : effect < 0.0           ? "increases_accuracy"
                                                         : "decreases_accuracy";
                        } else {
                            add(mc_check_mean_a(psi, proj, phi, gamma, options.mc_draws,
                                                rng));
                            add(mc_check_gamma(psi, proj, phi, gamma, options.mc_draws,
                                               rng));
                        }
                    } catch (const UndefinedSensitivity& e) {
                        row["status"] = std::string("undefined_sensitivity: ") + e.what();
                    }
                    row["checks"] = std::move(checks);
                    rows.push_back(std::move(row));
                }
            } else {
                doc["note"] = "monte-carlo comparison skipped: operator is not a "
                              "projector, so no exact profile is available";
            }
            doc["rows"] = std::move(rows);
            write_json_file(out / "mc_comparison.json", doc);
            manifest.outputs.push_back("mc_comparison.json");
        }

        write_manifest(out, manifest);
        log << "sensitivity: wrote " << manifest.outputs.size()
            << " output file(s) to " << out.string() << "\n";
        return 0;
    });
}

} // namespace qmeas::cli
