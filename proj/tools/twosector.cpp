// Command-line front end: validate, bgp, stability, simulate, sweep.

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "twosector/errors.hpp"
#include "twosector/report.hpp"

using namespace twosector;

int main(int argc, char** argv) {
    CLI::App app{"Two-sector endogenous growth model: balanced growth, stability and dynamics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string config_path;
    std::string model;
    std::vector<std::string> overrides;
    std::string format;
    std::string out_path;

    const std::pair<const char*, const char*> commands[] = {
        {"validate", "check the balanced-growth existence gates"},
        {"bgp", "solve the balanced-growth steady state"},
        {"stability", "Jacobian spectrum and classification at the steady state"},
        {"simulate", "integrate the full or stationary system"},
        {"sweep", "steady state and stability over a one-parameter grid"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--model", model, "ces or cd (must agree with the config)")
            ->check(CLI::IsMember({"ces", "cd"}));
        sub->add_option("--set", overrides, "override, e.g. rho=0.05 or solver.tol=1e-10");
        sub->add_option("--format", format, "text, json or csv")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        sub->add_option("--out", out_path, "output file (default stdout)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    const Command command = command_from_string(app.get_subcommands().front()->get_name());
    try {
        std::optional<Variant> hint;
        if (!model.empty()) hint = model_from_string(model);
        RunConfig cfg = load_config(config_path, hint);
        for (const auto& o : overrides) apply_override(cfg, o);
        if (!format.empty()) cfg.output.format = format_from_string(format);
        if (!out_path.empty()) cfg.output.path = out_path;

        const ReportRecord report = run(command, cfg);
        emit(report, cfg.output.format, cfg.output.path);
        if (!report.document["error"].is_null()) {
            std::cerr << "error: " << report.document["error"].get<std::string>() << "\n";
        } else if (report.exit_code != 0) {
            std::cerr << "validation failed\n";
            for (const auto& m : report.document["results"]["messages"]) {
                std::cerr << "  " << m.get<std::string>() << "\n";
            }
        }
        return report.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
