#include <CLI11.hpp>

#include "qmeas/cli/commands.hpp"
#include "qmeas/version.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Measurement-pointer toolkit: exact and weak von Neumann "
                 "pointer statistics for pre- and post-selected systems"};
    app.set_version_flag("--version", qmeas::kVersion);
    app.require_subcommand(1);

    qmeas::cli::CommandOptions options;
    std::string config, out, format;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* copt = sub->add_option("--config", config, "experiment config (JSON)");
        if (config_required) copt->required();
        sub->add_option("--out", out, "output directory (overrides the config)");
        sub->add_option("--seed", options.seed, "RNG seed recorded in the manifest");
        sub->add_option("--format", format, "restrict outputs to one format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* ps = app.add_subcommand("ps", "pre-selected measurement sweep");
    add_common(ps, true);
    CLI::App* pps = app.add_subcommand("pps", "pre/post-selected measurement sweep");
    add_common(pps, true);
    CLI::App* verify =
        app.add_subcommand("verify", "closed forms vs brute-force oracle");
    add_common(verify, false);
    verify->add_option("--instances", options.verify_instances,
                       "randomized instances per check");
    CLI::App* sensitivity =
        app.add_subcommand("sensitivity", "error-propagation sensitivities");
    add_common(sensitivity, true);
    sensitivity->add_option("--draws", options.mc_draws,
                            "monte-carlo draws per comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // bad invocation counts as a config error
    }

    if (!config.empty()) options.config_path = config;
    if (!out.empty()) options.out_dir = out;
    if (!format.empty()) options.format = format;

    if (ps->parsed()) return qmeas::cli::cmd_ps(options, std::cout);
    if (pps->parsed()) return qmeas::cli::cmd_pps(options, std::cout);
    if (verify->parsed()) return qmeas::cli::cmd_verify(options, std::cout);
    if (sensitivity->parsed()) return qmeas::cli::cmd_sensitivity(options, std::cout);
    return 1;
}
