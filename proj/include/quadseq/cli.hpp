#pragma once

#include "quadseq/family.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Command-line front end: argument parsing with distinct usage exit codes,
// dispatch over the compute modules with an optional worker pool, and
// text/json/csv rendering with deterministic bodies.

namespace quadseq::cli {

using arith::Int;

enum class Command { cf, pell, unit, classnum, certify, search, kbound, polyscan };
enum class Format { text, json, csv };

const char* to_string(Command c);
const char* to_string(Format f);

struct RunConfig {
    Command command = Command::cf;
    Format format = Format::text;
    std::optional<std::string> out_path;
    int workers = 1;
    unsigned precision_bits = 128;
    std::optional<long> k;
    std::optional<Int> n;  // radicand for cf/pell/unit/classnum, family n otherwise
    Int n_min = 2;
    std::optional<Int> n_max;
    std::optional<double> X;
    std::optional<double> eps;
    bool operator==(const RunConfig&) const = default;
};

// Usage and I/O failures carry the process exit status: 2 unknown flag or
// command, 3 missing parameter, 4 invalid value, 5 unwritable output.
struct UsageError : std::runtime_error {
    int exit_code;
    UsageError(int code, const std::string& msg)
        : std::runtime_error(msg), exit_code(code) {}
};

// --help or --version: text for stdout, process exits 0.
struct InfoRequested {
    std::string text;
};

// Parses argv with the program name already removed. Defaults for --workers
// and --precision come from QUADSEQ_WORKERS and QUADSEQ_PRECISION when the
// flags are absent. Validates every parameter before any computation.
RunConfig parse_args(const std::vector<std::string>& args);

struct Report {
    std::string version;
    RunConfig config;
    nlohmann::ordered_json results;
    double wall_seconds = 0.0;  // timing; never part of report equality
    int exit_code = 0;          // 0, or 1 when a search exhausts its range

    bool operator==(const Report& o) const {
        return version == o.version && config == o.config && results == o.results &&
               exit_code == o.exit_code;
    }
};

Report run(const RunConfig& config);

nlohmann::ordered_json report_to_json(const Report& report);
Report report_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json certificate_to_json(const family::FamilyCertificate& cert);
family::FamilyCertificate certificate_from_json(const nlohmann::ordered_json& j);

std::string render(const Report& report, Format format);
void emit(const Report& report, Format format, const std::optional<std::string>& path);

inline constexpr const char* kVersion = "quadseq 0.1.0";
inline constexpr const char* kCsvHeader = "k,n,i,A_i,x_i,y_i,N_i,m_i,D_i,h,norm,L1";

}  // namespace quadseq::cli
