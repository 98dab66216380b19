#include "twosector/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "twosector/errors.hpp"

namespace twosector {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Format f) {
    switch (f) {
        case Format::text: return "text";
        case Format::json: return "json";
        case Format::csv: return "csv";
    }
    return "text";
}

Format format_from_string(std::string_view s) {
    if (s == "text") return Format::text;
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw ConfigError(fmt::format("unknown output format '{}'", s));
}

std::string_view to_string(Scale s) { return s == Scale::linear ? "linear" : "log"; }

namespace {

Scale scale_from_string(std::string_view s) {
    if (s == "linear") return Scale::linear;
    if (s == "log") return Scale::log;
    throw ConfigError(fmt::format("unknown sweep scale '{}'", s));
}

System system_from_string(std::string_view s) {
    if (s == "full") return System::full;
    if (s == "reduced") return System::reduced;
    throw ConfigError(fmt::format("unknown system '{}' (expected full|reduced)", s));
}

}  // namespace

Variant model_from_string(std::string_view s) {
    if (s == "ces") return Variant::ces;
    if (s == "cd") return Variant::cd;
    throw ConfigError(fmt::format("unknown model '{}' (expected ces|cd)", s));
}

std::vector<double> SweepConfig::grid() const {
    std::vector<double> out;
    if (count == 0) return out;
    if (count == 1) return {lo};
    for (std::size_t i = 0; i < count; ++i) {
        const double n = static_cast<double>(count - 1);
        const double k = static_cast<double>(i);
        out.push_back(scale == Scale::linear ? lo + (hi - lo) * k / n
                                             : lo * std::pow(hi / lo, k / n));
    }
    out.back() = hi;
    return out;
}

std::vector<std::string> parameter_names(Variant model) {
    if (model == Variant::ces) {
        return {"A1", "A2", "alpha1", "alpha2", "psi1", "psi2", "delta_k", "delta_h", "rho", "epsilon"};
    }
    return {"A1", "A2", "alpha", "beta", "delta_k", "delta_h", "rho", "epsilon"};
}

namespace {

double* ces_field(CesParams& p, std::string_view k) {
    if (k == "A1") return &p.A1;
    if (k == "A2") return &p.A2;
    if (k == "alpha1") return &p.alpha1;
    if (k == "alpha2") return &p.alpha2;
    if (k == "psi1") return &p.psi1;
    if (k == "psi2") return &p.psi2;
    if (k == "delta_k") return &p.delta_k;
    if (k == "delta_h") return &p.delta_h;
    if (k == "rho") return &p.rho;
    if (k == "epsilon") return &p.epsilon;
    return nullptr;
}

double* cd_field(CdParams& p, std::string_view k) {
    if (k == "A1") return &p.A1;
    if (k == "A2") return &p.A2;
    if (k == "alpha") return &p.alpha;
    if (k == "beta") return &p.beta;
    if (k == "delta_k") return &p.delta_k;
    if (k == "delta_h") return &p.delta_h;
    if (k == "rho") return &p.rho;
    if (k == "epsilon") return &p.epsilon;
    return nullptr;
}

double* param_field(RunConfig& cfg, std::string_view key) {
    if (auto* ces = std::get_if<CesParams>(&cfg.parameters)) return ces_field(*ces, key);
    return cd_field(std::get<CdParams>(cfg.parameters), key);
}

std::string line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return fmt::format("line {}, column {}", line, col);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, std::string_view where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(fmt::format("unknown key '{}' in {}", key, where));
        }
    }
}

const json& require_object(const json& j, std::string_view where) {
    if (!j.is_object()) throw ConfigError(fmt::format("{} must be a JSON object", where));
    return j;
}

double number_at(const json& obj, const std::string& key, std::string_view where) {
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(fmt::format("{}.{} must be a number", where, key));
    }
    return v.get<double>();
}

std::string string_at(const json& obj, const std::string& key, std::string_view where) {
    const json& v = obj.at(key);
    if (!v.is_string()) {
        throw ConfigError(fmt::format("{}.{} must be a string", where, key));
    }
    return v.get<std::string>();
}

std::size_t count_at(const json& obj, const std::string& key, std::string_view where) {
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ConfigError(fmt::format("{}.{} must be a non-negative integer", where, key));
    }
    return v.get<std::size_t>();
}

/// Reads an optional key; records where the value came from.
template <typename T, typename Reader>
void optional_field(const json* obj, const std::string& block, const std::string& key, T& out,
                    Reader read, std::map<std::string, std::string>& prov) {
    const std::string path = block + "." + key;
    if (obj && obj->contains(key)) {
        out = read(*obj, key, block);
        prov[path] = "file";
    } else {
        prov[path] = "default";
    }
}

}  // namespace

RunConfig parse_config(std::string_view text, std::optional<Variant> model_hint) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config syntax error at {}: {}", line_col(text, e.byte), e.what()));
    }
    require_object(doc, "config");
    reject_unknown(doc, {"model", "parameters", "solver", "integrator", "sweep", "simulate", "output"},
                   "config");

    RunConfig cfg;
    auto& prov = cfg.provenance;
    if (doc.contains("model")) {
        cfg.model = model_from_string(string_at(doc, "model", "config"));
        prov["model"] = "file";
        if (model_hint && *model_hint != cfg.model) {
            throw ConfigError(fmt::format("--model {} contradicts config model {}",
                                          to_string(*model_hint), to_string(cfg.model)));
        }
    } else if (model_hint) {
        cfg.model = *model_hint;
        prov["model"] = "override";
    } else {
        throw ConfigError("config is missing 'model'");
    }

    if (!doc.contains("parameters")) throw ConfigError("config is missing 'parameters'");
    const json& params = require_object(doc.at("parameters"), "parameters");
    const auto names = parameter_names(cfg.model);
    if (cfg.model == Variant::ces) {
        cfg.parameters = CesParams{};
    } else {
        cfg.parameters = CdParams{};
    }
    for (const auto& [key, _] : params.items()) {
        if (!param_field(cfg, key)) {
            const auto other = parameter_names(cfg.model == Variant::ces ? Variant::cd : Variant::ces);
            const bool foreign = std::find(other.begin(), other.end(), key) != other.end();
            throw ConfigError(foreign ? fmt::format("parameter '{}' does not belong to model {}", key,
                                                    to_string(cfg.model))
                                      : fmt::format("unknown key '{}' in parameters", key));
        }
    }
    for (const auto& name : names) {
        if (!params.contains(name)) {
            throw ConfigError(fmt::format("parameters block for model {} is missing '{}'",
                                          to_string(cfg.model), name));
        }
        *param_field(cfg, name) = number_at(params, name, "parameters");
        prov["parameters." + name] = "file";
    }

    const auto block = [&](const char* name) -> const json* {
        if (!doc.contains(name)) return nullptr;
        return &require_object(doc.at(name), name);
    };

    const json* solver = block("solver");
    if (solver) reject_unknown(*solver, {"bracket_lo", "bracket_hi", "tol", "max_iter", "mode"}, "solver");
    optional_field(solver, "solver", "bracket_lo", cfg.solver.bracket_lo, number_at, prov);
    optional_field(solver, "solver", "bracket_hi", cfg.solver.bracket_hi, number_at, prov);
    optional_field(solver, "solver", "tol", cfg.solver.tol, number_at, prov);
    optional_field(solver, "solver", "max_iter", cfg.solver.max_iter, count_at, prov);
    optional_field(solver, "solver", "mode", cfg.solver.mode,
                   [](const json& o, const std::string& k, std::string_view w) {
                       return param_mode_from_string(string_at(o, k, w));
                   },
                   prov);

    const json* integ = block("integrator");
    if (integ) {
        reject_unknown(*integ, {"method", "dt", "rtol", "atol", "t_end", "max_dt"}, "integrator");
    }
    optional_field(integ, "integrator", "method", cfg.integrator.method,
                   [](const json& o, const std::string& k, std::string_view w) {
                       return method_from_string(string_at(o, k, w));
                   },
                   prov);
    optional_field(integ, "integrator", "dt", cfg.integrator.dt, number_at, prov);
    optional_field(integ, "integrator", "rtol", cfg.integrator.rtol, number_at, prov);
    optional_field(integ, "integrator", "atol", cfg.integrator.atol, number_at, prov);
    optional_field(integ, "integrator", "t_end", cfg.integrator.t_end, number_at, prov);
    optional_field(integ, "integrator", "max_dt", cfg.integrator.max_dt, number_at, prov);

    if (const json* sweep = block("sweep")) {
        reject_unknown(*sweep, {"key", "lo", "hi", "count", "scale"}, "sweep");
        SweepConfig sc;
        for (const char* required : {"key", "lo", "hi", "count"}) {
            if (!sweep->contains(required)) {
                throw ConfigError(fmt::format("sweep is missing '{}'", required));
            }
        }
        sc.key = string_at(*sweep, "key", "sweep");
        sc.lo = number_at(*sweep, "lo", "sweep");
        sc.hi = number_at(*sweep, "hi", "sweep");
        sc.count = count_at(*sweep, "count", "sweep");
        prov["sweep.key"] = prov["sweep.lo"] = prov["sweep.hi"] = prov["sweep.count"] = "file";
        optional_field(sweep, "sweep", "scale", sc.scale,
                       [](const json& o, const std::string& k, std::string_view w) {
                           return scale_from_string(string_at(o, k, w));
                       },
                       prov);
        if (!param_field(cfg, sc.key)) {
            throw ConfigError(fmt::format("sweep key '{}' is not a {} parameter", sc.key,
                                          to_string(cfg.model)));
        }
        if (sc.scale == Scale::log && !(sc.lo > 0 && sc.hi > 0)) {
            throw ConfigError("log-scale sweep needs positive bounds");
        }
        cfg.sweep = sc;
    }

    const json* sim = block("simulate");
    if (sim) reject_unknown(*sim, {"system", "initial"}, "simulate");
    optional_field(sim, "simulate", "system", cfg.simulate.system,
                   [](const json& o, const std::string& k, std::string_view w) {
                       return system_from_string(string_at(o, k, w));
                   },
                   prov);
    optional_field(sim, "simulate", "initial", cfg.simulate.initial,
                   [](const json& o, const std::string& k, std::string_view) {
                       const json& arr = o.at(k);
                       if (!arr.is_array()) throw ConfigError("simulate.initial must be an array");
                       std::vector<double> out;
                       for (const auto& x : arr) {
                           if (!x.is_number()) throw ConfigError("simulate.initial must hold numbers");
                           out.push_back(x.get<double>());
                       }
                       return out;
                   },
                   prov);

    const json* out = block("output");
    if (out) reject_unknown(*out, {"format", "path"}, "output");
    optional_field(out, "output", "format", cfg.output.format,
                   [](const json& o, const std::string& k, std::string_view w) {
                       return format_from_string(string_at(o, k, w));
                   },
                   prov);
    optional_field(out, "output", "path", cfg.output.path, string_at, prov);
    return cfg;
}

RunConfig load_config(const std::string& path, std::optional<Variant> model_hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), model_hint);
}

ordered_json config_to_json(const RunConfig& cfg) {
    ordered_json doc;
    doc["model"] = to_string(cfg.model);
    ordered_json params = ordered_json::object();
    for (const auto& name : parameter_names(cfg.model)) params[name] = get_parameter(cfg, name);
    doc["parameters"] = params;
    doc["solver"] = {{"bracket_lo", cfg.solver.bracket_lo},
                     {"bracket_hi", cfg.solver.bracket_hi},
                     {"tol", cfg.solver.tol},
                     {"max_iter", cfg.solver.max_iter},
                     {"mode", to_string(cfg.solver.mode)}};
    doc["integrator"] = {{"method", to_string(cfg.integrator.method)},
                         {"dt", cfg.integrator.dt},
                         {"rtol", cfg.integrator.rtol},
                         {"atol", cfg.integrator.atol},
                         {"t_end", cfg.integrator.t_end},
                         {"max_dt", cfg.integrator.max_dt}};
    if (cfg.sweep) {
        doc["sweep"] = {{"key", cfg.sweep->key},
                        {"lo", cfg.sweep->lo},
                        {"hi", cfg.sweep->hi},
                        {"count", cfg.sweep->count},
                        {"scale", to_string(cfg.sweep->scale)}};
    }
    doc["simulate"] = {{"system", to_string(cfg.simulate.system)},
                       {"initial", cfg.simulate.initial}};
    doc["output"] = {{"format", to_string(cfg.output.format)}, {"path", cfg.output.path}};
    return doc;
}

void set_parameter(RunConfig& cfg, std::string_view key, double value) {
    double* field = param_field(cfg, key);
    if (!field) {
        throw ConfigError(fmt::format("'{}' is not a {} parameter", key, to_string(cfg.model)));
    }
    *field = value;
}

double get_parameter(const RunConfig& cfg, std::string_view key) {
    return *param_field(const_cast<RunConfig&>(cfg), key);
}

namespace {

double parse_number(std::string_view key, std::string_view text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(text), &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("--set {}: '{}' is not a number", key, text));
    }
}

}  // namespace

void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError(fmt::format("--set expects key=value, got '{}'", assignment));
    }
    std::string key(assignment.substr(0, eq));
    const std::string_view value = assignment.substr(eq + 1);
    if (key.rfind("parameters.", 0) == 0) key = key.substr(11);

    if (param_field(cfg, key)) {
        set_parameter(cfg, key, parse_number(key, value));
        cfg.provenance["parameters." + key] = "override";
        return;
    }
    // round-trip through the JSON form so dotted keys reuse the parser's checks
    ordered_json doc = config_to_json(cfg);
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        throw ConfigError(fmt::format("unknown override key '{}'", key));
    }
    const std::string block = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    if (block == "sweep" && !doc.contains("sweep")) {
        doc["sweep"] = {{"key", "rho"}, {"lo", 0.0}, {"hi", 0.0}, {"count", 0}};
    }
    if (!doc.contains(block) || !doc[block].is_object()) {
        throw ConfigError(fmt::format("unknown override key '{}'", key));
    }
    const json parsed = json::parse(std::string(value), nullptr, false);
    // bare words are strings; quoted ones parse to the same string
    if (!parsed.is_discarded()) {
        doc[block][field] = parsed;
    } else {
        doc[block][field] = std::string(value);
    }
    auto prov = cfg.provenance;
    RunConfig updated = parse_config(doc.dump());
    prov[key] = "override";
    updated.provenance = std::move(prov);
    cfg = std::move(updated);
}

SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions o;
    o.bracket.start_lo = cfg.solver.bracket_lo;
    o.bracket.start_hi = cfg.solver.bracket_hi;
    o.root.tol = cfg.solver.tol;
    o.root.max_iter = cfg.solver.max_iter;
    o.mode = cfg.solver.mode;
    return o;
}

IntegratorOptions integrator_options(const RunConfig& cfg) {
    IntegratorOptions o;
    o.method = cfg.integrator.method;
    o.dt = cfg.integrator.dt;
    o.rtol = cfg.integrator.rtol;
    o.atol = cfg.integrator.atol;
    o.t_end = cfg.integrator.t_end;
    o.max_dt = cfg.integrator.max_dt;
    return o;
}

}  // namespace twosector
