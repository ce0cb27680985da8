#pragma once
// Orchestration: resolve a run configuration, execute the estimator with
// its exact reference alongside, and serialize results. All output paths
// (text report, JSON, sweep CSV, event dumps) are deterministic functions
// of (config, seed) alone; timing figures appear only in the text report
// and JSON, never in CSV or dumps, so those stay byte-identical across
// reruns and worker counts.

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "belltomo/core.hpp"
#include "belltomo/estimator.hpp"

namespace belltomo {

enum class OutputFormat { report, csv };

struct RunConfig {
    RunParams run;            // defaults: n_blocks 20, seed 1 set by the CLI
    int workers = 0;          // 0 = BELLTOMO_WORKERS env, else hardware threads
    std::string output_path;  // empty = stdout
    OutputFormat format = OutputFormat::report;
    std::string dump_path;    // empty = no event dump
};

// explicit --workers wins, then BELLTOMO_WORKERS, then hardware threads
int resolve_workers(int requested);

struct RunReport {
    RunParams run;
    int workers_used = 0;
    BellEstimate estimate;
    double bell_analytic = 0.0;
    std::array<double, 4> correlation_analytic{};  // C(a,b), C(a,b'), C(a',b'), C(a',b)
    double truncation_deficit = 0.0;
    double wall_seconds = 0.0;
    double events_per_second = 0.0;
};

RunReport run_single(const RunConfig& cfg);

struct SweepSpec {
    enum class Axis { phi, eta };
    Axis axis = Axis::phi;
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;  // number of points; 1 means start only

    std::vector<double> values() const;
};

// one sweep point; on failure the estimate is absent and status names the
// error class so partial sweeps still serialize
struct PointResult {
    double sweep_value = 0.0;
    std::string status;  // "ok" or a short failure marker
    BellEstimate estimate;
    double bell_analytic = std::numeric_limits<double>::quiet_NaN();
};

// point i runs with seed sub_seed(cfg.run.seed, i); a failing point is
// recorded and the sweep continues
std::vector<PointResult> run_sweep(const RunConfig& cfg, const SweepSpec& spec);

std::string format_report_text(const RunReport& report);
std::string report_to_json_string(const RunReport& report);
RunReport report_from_json_string(const std::string& text);

// fixed schema, one row per point, every value %.17g:
// sweep_value,B,B_err,C_ab,C_ab_err,C_abp,C_abp_err,C_apbp,C_apbp_err,
// C_apb,C_apb_err,P11,P11_err,B_analytic,status
std::string sweep_to_csv(const std::vector<PointResult>& points);

// single run rendered as a one-point CSV (sweep_value = crystal phase)
std::string report_to_csv(const RunReport& report);

void write_text_file(const std::string& path, const std::string& content);

// regenerates the run's events unit by unit in block order (identical to
// what the estimator consumed, independent of workers) and writes
// x1..x4, phi1..phi4 per event; ".csv" suffix writes text with a header
// row, anything else raw native-endian f64
void dump_events(const RunParams& run, const std::string& path);

}  // namespace belltomo
