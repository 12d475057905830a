#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "swelab/analysis.hpp"
#include "swelab/solver.hpp"
#include "swelab/stats.hpp"

namespace swelab::experiments {

/// Full study description. Defaults reproduce the reference study: four gel
/// levels x five frequencies x three repetitions, both estimation methods.
struct SweepConfig {
    std::vector<double> gel_levels_m = {0.0, 0.002, 0.007, 0.012};
    std::vector<double> frequencies_hz = {100.0, 150.0, 200.0, 250.0, 300.0};
    int repetitions = 3;
    /// Additive measurement noise emulating repetition variability
    /// (0.5% of the default excitation amplitude).
    double noise_sigma_m = 5e-7;
    std::uint64_t base_seed = 12345;
    int threads = 0;  // 0 = hardware concurrency
    bool emit_kspace = false;
    std::string out_dir = "out";

    solver::PhantomGeometry geometry;       // gel_thickness is taken per level
    solver::ElasticMaterial pad;
    dispersion::VoigtMaterial gel = dispersion::gel_material();
    solver::SpongeSpec sponge;
    solver::Excitation excitation;          // frequency is taken per cell
    solver::SolverConfig solver;

    void validate() const;
};

struct SweepRow {
    double gel_m = 0.0;
    double frequency_hz = 0.0;
    int rep = 0;
    analysis::SpeedMethod method = analysis::SpeedMethod::phase_gradient;
    double speed_mps = 0.0;   // NaN when failed
    double ci_mps = 0.0;      // 0 when not available
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct ComparisonRow {
    double frequency_hz = 0.0;
    double gel_m = 0.0;            // nonzero level compared against base
    double percent_change = 0.0;   // of mean speed vs the 0 mm base
    stats::TTestResult ttest;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
};

/// Runs the full sweep: per (gel level, frequency) cell one deterministic
/// simulation, then `repetitions` seeded noisy copies estimated by both
/// methods. Cells run on a bounded worker pool; row order and content are
/// independent of the thread count. Failed cells/rows carry a reason in
/// `status` and never abort the sweep.
SweepResult run_sweep(const SweepConfig& config);

/// Percent change and unpaired t-test of every nonzero gel level against the
/// 0 mm base, per frequency. Uses the k-space method rows (the study's
/// numerical estimator). Throws when the base level is absent.
ComparisonReport compare_levels(const SweepResult& result);

/// Writes sweep.csv, comparison.csv, dispersion.svg and run_manifest into
/// config.out_dir (plus kspace_<mm>_<hz>.csv grids when enabled).
void emit_outputs(const SweepResult& result, const ComparisonReport& report,
                  const SweepConfig& config);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
SweepResult read_sweep_csv(std::istream& in);
SweepResult read_sweep_csv_file(const std::string& path);
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);

/// Speed vs frequency plot, one polyline per gel level with sd error bars
/// over repetitions (k-space method rows).
void write_dispersion_svg(std::ostream& out, const SweepResult& result);

/// Config file I/O: INI-style `key = value` under [section] headers; every
/// key has a default equal to the study setup, so an empty file reproduces
/// the paper configuration. write_config emits the complete key set (this is
/// the run manifest format).
SweepConfig load_config(std::istream& in);
SweepConfig load_config_file(const std::string& path);
void write_config(std::ostream& out, const SweepConfig& config);

/// CLI entry point (subcommands simulate | analyze | fit | sweep | report).
/// Returns the process exit status.
int run_cli(const std::vector<std::string>& args);

}  // namespace swelab::experiments
