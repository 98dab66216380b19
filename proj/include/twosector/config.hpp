#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "twosector/bgp.hpp"
#include "twosector/dynamics.hpp"
#include "twosector/params.hpp"

namespace twosector {

enum class Format { text, json, csv };
enum class Scale { linear, log };

std::string_view to_string(Format f);
Format format_from_string(std::string_view s);
std::string_view to_string(Scale s);

struct SolverConfig {
    double bracket_lo = 0.5;
    double bracket_hi = 2.0;
    double tol = 1e-12;
    std::size_t max_iter = 200;
    ParamMode mode = ParamMode::strict;
    bool operator==(const SolverConfig&) const = default;
};

struct IntegratorConfig {
    Method method = Method::rk45_adaptive;
    double dt = 1e-3;
    double rtol = 1e-9;
    double atol = 1e-12;
    double t_end = 100.0;
    double max_dt = 0.1;
    bool operator==(const IntegratorConfig&) const = default;
};

struct SweepConfig {
    std::string key;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
    Scale scale = Scale::linear;
    bool operator==(const SweepConfig&) const = default;

    std::vector<double> grid() const;
};

/// Initial point for `simulate`; an empty `initial` starts on the balanced
/// growth path.
struct SimulateConfig {
    System system = System::reduced;
    std::vector<double> initial;
    bool operator==(const SimulateConfig&) const = default;
};

struct OutputConfig {
    Format format = Format::text;
    std::string path;  ///< empty: stdout
    bool operator==(const OutputConfig&) const = default;
};

/// Fully resolved run configuration. `provenance` maps every dotted key to
/// "file", "default" or "override"; it is bookkeeping and does not take part
/// in equality.
struct RunConfig {
    Variant model = Variant::cd;
    std::variant<CesParams, CdParams> parameters;
    SolverConfig solver;
    IntegratorConfig integrator;
    std::optional<SweepConfig> sweep;
    SimulateConfig simulate;
    OutputConfig output;
    std::map<std::string, std::string> provenance;

    bool operator==(const RunConfig& o) const {
        return model == o.model && parameters == o.parameters && solver == o.solver &&
               integrator == o.integrator && sweep == o.sweep && simulate == o.simulate &&
               output == o.output;
    }
};

/// Parses the JSON config. Throws ConfigError for syntax errors (with line
/// and column), unknown keys, missing or mistyped fields, and a parameter
/// block that does not match the model. `model_hint` supplies the model when
/// the document has none and must agree with it otherwise.
RunConfig parse_config(std::string_view text, std::optional<Variant> model_hint = {});

RunConfig load_config(const std::string& path, std::optional<Variant> model_hint = {});

/// The resolved config as a document parse_config accepts.
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

/// Applies `key=value`: a bare parameter name (rho, A1, ...) or a dotted
/// path such as solver.tol or integrator.t_end.
void apply_override(RunConfig& cfg, std::string_view assignment);

/// Sets one model parameter by name. Throws ConfigError for names foreign to
/// the model.
void set_parameter(RunConfig& cfg, std::string_view key, double value);
double get_parameter(const RunConfig& cfg, std::string_view key);
std::vector<std::string> parameter_names(Variant model);

Variant model_from_string(std::string_view s);

SolverOptions solver_options(const RunConfig& cfg);
IntegratorOptions integrator_options(const RunConfig& cfg);

}  // namespace twosector
