#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "twosector/config.hpp"

namespace twosector {

enum class Command { validate, bgp, stability, simulate, sweep };

std::string_view to_string(Command c);
Command command_from_string(std::string_view s);

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitNumerical = 2,
    kExitConfig = 3,
};

/// Result of one command. `document` holds the machine-readable report in a
/// fixed key order: command, model, parameters, provenance, results,
/// warnings, error, exit_code, tolerances, version. `table` carries the row data
/// (sweep points or trajectory samples) used by the CSV format.
struct ReportRecord {
    Command command = Command::bgp;
    Variant model = Variant::cd;
    nlohmann::ordered_json document;
    std::vector<std::string> table_header;
    std::vector<std::vector<std::string>> table_rows;
    std::vector<std::string> warnings;
    int exit_code = kExitOk;
};

/// Runs a command against a resolved config. Library errors are folded into
/// the record (exit code per the mapping above) rather than thrown.
ReportRecord run(Command command, const RunConfig& cfg);

/// Renders the record; identical records render to identical bytes.
std::string render(const ReportRecord& report, Format format);

/// Writes render(report, format) to `path`, or stdout when empty. Throws
/// ConfigError on I/O failure.
void emit(const ReportRecord& report, Format format, const std::string& path);

/// Shortest round-trip representation, as used in text and CSV output.
std::string format_number(double x);

}  // namespace twosector
