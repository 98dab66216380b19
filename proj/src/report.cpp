#include "twosector/report.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "twosector/errors.hpp"
#include "twosector/stability.hpp"

namespace twosector {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(Command c) {
    switch (c) {
        case Command::validate: return "validate";
        case Command::bgp: return "bgp";
        case Command::stability: return "stability";
        case Command::simulate: return "simulate";
        case Command::sweep: return "sweep";
    }
    return "bgp";
}

Command command_from_string(std::string_view s) {
    if (s == "validate") return Command::validate;
    if (s == "bgp") return Command::bgp;
    if (s == "stability") return Command::stability;
    if (s == "simulate") return Command::simulate;
    if (s == "sweep") return Command::sweep;
    throw ConfigError(fmt::format("unknown command '{}'", s));
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{}", x);
}

namespace {

// NaN has no JSON representation; it is emitted as null.
ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json validation_json(const ValidationReport& v) {
    ordered_json j;
    j["ok"] = v.ok;
    j["mode"] = to_string(v.mode);
    j["cd_adapted"] = v.cd_adapted;
    j["left_bound"] = num(v.left_bound);
    j["right_bound_1"] = num(v.right_bound_1);
    j["right_bound_2"] = num(v.right_bound_2);
    j["s2_at_0"] = num(v.s2_at_0);
    j["s3_at_0"] = num(v.s3_at_0);
    j["epsilon_gt_one"] = v.epsilon_gt_one;
    j["messages"] = v.messages;
    return j;
}

ordered_json steady_json(const SteadyState& ss) {
    ordered_json j;
    j["w_star"] = num(ss.w_star);
    j["r_star"] = num(ss.r_star);
    j["u_star"] = num(ss.u_star);
    j["v_star"] = num(ss.v_star);
    j["q_star"] = num(ss.q_star);
    j["z_star"] = num(ss.z_star);
    j["transversality"] = num(ss.transversality);
    j["residual"] = num(ss.residual);
    j["iterations"] = ss.iterations;
    return j;
}

ordered_json stability_json(const StabilityReport& r) {
    ordered_json j;
    j["steady_state"] = steady_json(r.steady_state);
    ordered_json jac = ordered_json::array();
    for (Eigen::Index i = 0; i < r.jacobian.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index k = 0; k < r.jacobian.cols(); ++k) row.push_back(num(r.jacobian(i, k)));
        jac.push_back(row);
    }
    j["jacobian"] = jac;
    ordered_json ev = ordered_json::array();
    for (const auto& e : r.eigenvalues) ev.push_back({num(e.real()), num(e.imag())});
    j["eigenvalues"] = ev;
    j["determinant"] = num(r.determinant);
    j["det_tol"] = num(r.det_tol);
    j["eig_zero_tol"] = num(r.eig_zero_tol);
    j["n_stable"] = r.n_stable;
    j["n_unstable"] = r.n_unstable;
    j["n_center"] = r.n_center;
    j["classification"] = to_string(r.classification);
    if (r.variant == Variant::ces) {
        j["constraint_residual"] = num(r.constraint_residual);
        j["null_vector_residual"] = num(r.null_vector_residual);
    }
    j["paper_deviation"] = r.paper_deviation;
    j["findings"] = r.findings;
    return j;
}

ordered_json parameters_json(const RunConfig& cfg) {
    ordered_json j = ordered_json::object();
    for (const auto& name : parameter_names(cfg.model)) j[name] = get_parameter(cfg, name);
    return j;
}

ordered_json tolerances_json(const RunConfig& cfg) {
    ordered_json j;
    j["root_tol"] = cfg.solver.tol;
    j["root_certificate"] = kRootCertificate;
    j["uv_guard"] = kUvGuard;
    j["share_margin"] = kShareMargin;
    j["jacobian_rel_step"] = kJacobianRelStep;
    j["null_vector_tol"] = kNullVectorTol;
    j["rtol"] = cfg.integrator.rtol;
    j["atol"] = cfg.integrator.atol;
    return j;
}

ValidationReport validate_any(const RunConfig& cfg) {
    if (const auto* p = std::get_if<CesParams>(&cfg.parameters)) return validate(*p, cfg.solver.mode);
    return validate(std::get<CdParams>(cfg.parameters), cfg.solver.mode);
}

SteadyState steady_any(const RunConfig& cfg) {
    const SolverOptions opts = solver_options(cfg);
    if (const auto* p = std::get_if<CesParams>(&cfg.parameters)) return steady_state_ces(*p, opts);
    return steady_state_cd(std::get<CdParams>(cfg.parameters), opts);
}

StabilityReport stability_any(const RunConfig& cfg) {
    const SolverOptions opts = solver_options(cfg);
    if (const auto* p = std::get_if<CesParams>(&cfg.parameters)) return stability_report(*p, opts);
    return stability_report(std::get<CdParams>(cfg.parameters), opts);
}

/// Evaluates fn(i) for i in [0, n) on a small worker pool; results keep
/// index order.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn) {
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
    };
    const std::size_t n_threads =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

struct SweepRow {
    double value = 0.0;
    std::string status;
    std::string reason;
    std::optional<StabilityReport> stability;
};

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

void run_sweep(ReportRecord& rec, const RunConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep command needs a 'sweep' block");
    const SweepConfig& sw = *cfg.sweep;
    const std::vector<double> grid = sw.grid();
    const auto rows = parallel_map<SweepRow>(grid.size(), [&](std::size_t i) {
        RunConfig point = cfg;
        set_parameter(point, sw.key, grid[i]);
        SweepRow row;
        row.value = grid[i];
        const ValidationReport v = validate_any(point);
        if (!v.ok) {
            row.status = "skipped";
            row.reason = join(v.messages, "; ");
            return row;
        }
        try {
            row.stability = stability_any(point);
            row.status = "ok";
        } catch (const Error& e) {
            row.status = "failed";
            row.reason = e.what();
        }
        return row;
    });

    const int n = cfg.model == Variant::ces ? 4 : 3;
    rec.table_header = {sw.key, "status", "reason", "w_star", "r_star", "u_star", "v_star",
                        "q_star", "z_star", "transversality", "determinant", "classification"};
    for (int i = 1; i <= n; ++i) {
        rec.table_header.push_back(fmt::format("eig{}_re", i));
        rec.table_header.push_back(fmt::format("eig{}_im", i));
    }

    ordered_json jrows = ordered_json::array();
    std::size_t n_ok = 0;
    for (const auto& r : rows) {
        ordered_json jr;
        jr["value"] = r.value;
        jr["status"] = r.status;
        jr["reason"] = r.reason;
        std::vector<std::string> cells = {format_number(r.value), r.status, r.reason};
        if (r.stability) {
            ++n_ok;
            const auto& s = *r.stability;
            const auto& ss = s.steady_state;
            jr["steady_state"] = steady_json(ss);
            ordered_json ev = ordered_json::array();
            for (const auto& e : s.eigenvalues) ev.push_back({num(e.real()), num(e.imag())});
            jr["eigenvalues"] = ev;
            jr["determinant"] = num(s.determinant);
            jr["classification"] = to_string(s.classification);
            for (double x : {ss.w_star, ss.r_star, ss.u_star, ss.v_star, ss.q_star, ss.z_star,
                             ss.transversality, s.determinant}) {
                cells.push_back(format_number(x));
            }
            cells.emplace_back(to_string(s.classification));
            for (const auto& e : s.eigenvalues) {
                cells.push_back(format_number(e.real()));
                cells.push_back(format_number(e.imag()));
            }
        }
        cells.resize(rec.table_header.size());
        rec.table_rows.push_back(std::move(cells));
        jrows.push_back(std::move(jr));
    }
    ordered_json res;
    res["key"] = sw.key;
    res["scale"] = to_string(sw.scale);
    res["count"] = sw.count;
    res["evaluated"] = n_ok;
    res["rows"] = jrows;
    rec.document["results"] = res;
}

template <typename Params>
void run_simulate(ReportRecord& rec, const RunConfig& cfg, const Params& p) {
    const SolverOptions sopts = solver_options(cfg);
    const IntegratorOptions iopts = integrator_options(cfg);
    const System system = cfg.simulate.system;
    SteadyState ss;
    if constexpr (std::is_same_v<Params, CesParams>) {
        ss = steady_state_ces(p, sopts);
    } else {
        ss = steady_state_cd(p, sopts);
    }
    Eigen::VectorXd x0 = bgp_point(system, ss);
    if (!cfg.simulate.initial.empty()) {
        if (static_cast<Eigen::Index>(cfg.simulate.initial.size()) != x0.size()) {
            throw ConfigError(fmt::format("simulate.initial needs {} values for the {} {} system",
                                          x0.size(), to_string(system), to_string(cfg.model)));
        }
        x0 = Eigen::Map<const Eigen::VectorXd>(cfg.simulate.initial.data(), x0.size());
    }
    const Trajectory traj = simulate(system, p, x0, iopts, sopts);

    ordered_json res;
    res["system"] = to_string(system);
    res["method"] = to_string(iopts.method);
    res["samples"] = traj.size();
    res["t_final"] = traj.times.back();
    res["truncated"] = traj.truncated;
    res["stop_reason"] = traj.stop_reason;
    res["accepted_steps"] = traj.accepted_steps;
    res["rejected_steps"] = traj.rejected_steps;
    ordered_json initial = ordered_json::object();
    ordered_json final_state = ordered_json::object();
    for (std::size_t i = 0; i < traj.state_names.size(); ++i) {
        initial[traj.state_names[i]] = num(traj.states.front()(static_cast<Eigen::Index>(i)));
        final_state[traj.state_names[i]] = num(traj.states.back()(static_cast<Eigen::Index>(i)));
    }
    res["initial"] = initial;
    res["final"] = final_state;

    const auto column = [&](std::string_view name) {
        std::vector<double> out;
        const auto it = std::find(traj.diagnostic_names.begin(), traj.diagnostic_names.end(), name);
        if (it == traj.diagnostic_names.end()) return out;
        const auto idx = static_cast<std::size_t>(it - traj.diagnostic_names.begin());
        for (const auto& row : traj.diagnostics) out.push_back(row[idx]);
        return out;
    };
    const auto dist = column("distance");
    res["max_distance"] = num(*std::max_element(dist.begin(), dist.end()));
    res["final_distance"] = num(dist.back());
    const auto resid = column("constraint_residual");
    if (!resid.empty()) {
        double drift = 0.0;
        for (double r : resid) drift = std::max(drift, std::abs(r - resid.front()));
        res["constraint_drift"] = num(drift);
    }
    if (system == System::full && traj.size() >= 2) {
        std::vector<double> c;
        for (const auto& x : traj.states) c.push_back(x(2));
        try {
            const WelfareEstimate w = welfare(traj.times, c, preferences(p));
            res["welfare"] = {{"quadrature", num(w.quadrature)},
                              {"tail", num(w.tail)},
                              {"total", num(w.total)},
                              {"terminal_rate", num(w.terminal_rate)}};
        } catch (const NumericalError& e) {
            rec.warnings.push_back(fmt::format("welfare not evaluated: {}", e.what()));
        }
    }
    if (traj.truncated) rec.warnings.push_back("trajectory truncated: " + traj.stop_reason);
    rec.document["results"] = res;

    rec.table_header = {"t"};
    for (const auto& n : traj.state_names) rec.table_header.push_back(n);
    for (const auto& n : traj.diagnostic_names) rec.table_header.push_back(n);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::vector<std::string> row = {format_number(traj.times[i])};
        for (Eigen::Index k = 0; k < traj.states[i].size(); ++k) {
            row.push_back(format_number(traj.states[i](k)));
        }
        for (double d : traj.diagnostics[i]) row.push_back(format_number(d));
        rec.table_rows.push_back(std::move(row));
    }
}

}  // namespace

ReportRecord run(Command command, const RunConfig& cfg) {
    ReportRecord rec;
    rec.command = command;
    rec.model = cfg.model;
    auto& doc = rec.document;
    doc["command"] = to_string(command);
    doc["model"] = to_string(cfg.model);
    doc["parameters"] = parameters_json(cfg);
    doc["provenance"] = cfg.provenance;
    doc["results"] = nullptr;

    try {
        switch (command) {
            case Command::validate: {
                const ValidationReport v = validate_any(cfg);
                doc["results"] = validation_json(v);
                if (v.cd_adapted) rec.warnings.push_back("CD-adapted gates evaluated at w*");
                if (!v.ok) rec.exit_code = kExitValidation;
                break;
            }
            case Command::bgp: {
                const SteadyState ss = steady_any(cfg);
                doc["results"] = steady_json(ss);
                break;
            }
            case Command::stability: {
                const StabilityReport r = stability_any(cfg);
                doc["results"] = stability_json(r);
                for (const auto& f : r.findings) rec.warnings.push_back(f);
                break;
            }
            case Command::simulate: {
                if (const auto* p = std::get_if<CesParams>(&cfg.parameters)) {
                    run_simulate(rec, cfg, *p);
                } else {
                    run_simulate(rec, cfg, std::get<CdParams>(cfg.parameters));
                }
                break;
            }
            case Command::sweep:
                run_sweep(rec, cfg);
                break;
        }
        doc["error"] = nullptr;
    } catch (const ParameterError& e) {
        rec.exit_code = kExitValidation;
        doc["error"] = e.what();
    } catch (const NumericalError& e) {
        rec.exit_code = kExitNumerical;
        doc["error"] = e.what();
    } catch (const ConfigError& e) {
        rec.exit_code = kExitConfig;
        doc["error"] = e.what();
    }
    // re-seat keys in their published order
    ordered_json ordered;
    for (const char* key : {"command", "model", "parameters", "provenance", "results"}) {
        ordered[key] = doc[key];
    }
    ordered["warnings"] = rec.warnings;
    ordered["error"] = doc.contains("error") ? doc["error"] : ordered_json(nullptr);
    ordered["exit_code"] = rec.exit_code;
    ordered["tolerances"] = tolerances_json(cfg);
    ordered["version"] = kToolVersion;
    rec.document = std::move(ordered);
    return rec;
}

namespace {

std::string scalar_text(const ordered_json& v) {
    if (v.is_null()) return "null";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void flatten(const ordered_json& v, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
    if (v.is_object()) {
        if (v.empty()) out.emplace_back(prefix, "{}");
        for (const auto& [k, child] : v.items()) {
            flatten(child, prefix.empty() ? k : prefix + "." + k, out);
        }
    } else if (v.is_array()) {
        const bool flat = std::all_of(v.begin(), v.end(), [](const auto& e) { return !e.is_structured(); });
        if (flat) {
            std::string s = "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ", ";
                s += scalar_text(v[i]);
            }
            out.emplace_back(prefix, s + "]");
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) {
                flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
            }
        }
    } else {
        out.emplace_back(prefix, scalar_text(v));
    }
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string render(const ReportRecord& report, Format format) {
    switch (format) {
        case Format::json:
            return report.document.dump(2) + "\n";
        case Format::csv: {
            std::string out;
            if (!report.table_header.empty() || report.command == Command::sweep) {
                std::vector<std::string> cells;
                for (const auto& h : report.table_header) cells.push_back(csv_cell(h));
                out += join(cells, ",") + "\n";
                for (const auto& row : report.table_rows) {
                    cells.clear();
                    for (const auto& c : row) cells.push_back(csv_cell(c));
                    out += join(cells, ",") + "\n";
                }
                return out;
            }
            std::vector<std::pair<std::string, std::string>> kv;
            flatten(report.document, "", kv);
            out = "key,value\n";
            for (const auto& [k, v] : kv) out += csv_cell(k) + "," + csv_cell(v) + "\n";
            return out;
        }
        case Format::text: {
            std::vector<std::pair<std::string, std::string>> kv;
            ordered_json doc = report.document;
            if (report.command == Command::sweep && doc["results"].is_object()) {
                doc["results"].erase("rows");
            }
            flatten(doc, "", kv);
            std::size_t width = 0;
            for (const auto& [k, v] : kv) width = std::max(width, k.size());
            std::string out;
            for (const auto& [k, v] : kv) out += fmt::format("{:<{}}  {}\n", k, width, v);
            if (report.command == Command::sweep && !report.table_header.empty()) {
                std::vector<std::size_t> widths(report.table_header.size());
                for (std::size_t i = 0; i < widths.size(); ++i) widths[i] = report.table_header[i].size();
                for (const auto& row : report.table_rows) {
                    for (std::size_t i = 0; i < row.size(); ++i) {
                        widths[i] = std::max(widths[i], row[i].size());
                    }
                }
                const auto line = [&](const std::vector<std::string>& cells) {
                    std::string s;
                    for (std::size_t i = 0; i < cells.size(); ++i) {
                        s += fmt::format("{:<{}}", cells[i], widths[i]);
                        if (i + 1 < cells.size()) s += "  ";
                    }
                    while (!s.empty() && s.back() == ' ') s.pop_back();
                    return s + "\n";
                };
                out += "\n" + line(report.table_header);
                for (const auto& row : report.table_rows) out += line(row);
            }
            return out;
        }
    }
    return {};
}

void emit(const ReportRecord& report, Format format, const std::string& path) {
    const std::string text = render(report, format);
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        if (!std::cout) throw ConfigError("failed writing report to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
    out << text;
    out.close();
    if (!out) throw ConfigError(fmt::format("failed writing '{}'", path));
}

}  // namespace twosector
