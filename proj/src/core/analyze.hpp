#ifndef DHOA_CORE_ANALYZE_HPP
#define DHOA_CORE_ANALYZE_HPP

#include <string>

#include "json.hpp"

#include "core/bargmann.hpp"

namespace dhoa {

using Json = nlohmann::json;

// Full run configuration for the analyze pipeline. Parsed from JSON; flag
// overrides are applied by the CLI before parsing.
struct RunConfig {
    Json weight_spec;
    Mode mode = Mode::annihilation;
    double mu = 0.0;
    MellinMethod method = MellinMethod::automatic;
    QuadratureOptions quadrature{};
    int grid_points = 201;
    double grid_span = 40.0;
    long basis_extent = 64;
    std::vector<Complex> coherent_points; // optional explicit eigen samples
    VerifyOptions verify{};
    CheckOptions checks{};

    static RunConfig from_json(const Json& j); // throws ParseError
    WeightFunction make_weight() const;        // throws ParseError
    Json echo() const;
};

struct RunResult {
    Json report;
    int exit_status = 0; // 0 ok, 1 verification failure/rejection, 3 numerical failure
};

// weight -> transform -> algebra -> representation -> verification, with a
// machine-readable report of every check.
RunResult run_analyze(const RunConfig& cfg);

// Fixed battery over the five built-in weight families, each cross-checked
// against its closed form and fully verified. max_threads = 0 reads the
// DHOA_THREADS environment variable (default: hardware concurrency).
RunResult run_reproduce_paper(int max_threads = 0);

// Shared serialization helpers.
Json to_json(const DiagnosticsReport& rep);
Json num_or_str(double v); // +-inf cannot be a JSON number

} // namespace dhoa

#endif
