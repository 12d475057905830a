#include "swelab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "swelab/csv.hpp"
#include "swelab/errors.hpp"
#include "swelab/svg.hpp"

namespace swelab::experiments {

namespace {

namespace fs = std::filesystem;

std::string level_tag(double gel_m) { return csv::format_double(gel_m * 1000.0); }

}  // namespace

void SweepConfig::validate() const {
    if (gel_levels_m.empty()) throw DomainError("sweep: gel level list is empty");
    if (frequencies_hz.empty()) throw DomainError("sweep: frequency list is empty");
    if (repetitions < 1) throw DomainError("sweep: repetitions must be >= 1");
    if (!(noise_sigma_m >= 0.0)) throw DomainError("sweep: noise sigma must be >= 0");
    for (double g : gel_levels_m)
        if (!(g >= 0.0)) throw DomainError("sweep: gel levels must be >= 0");
    for (double f : frequencies_hz)
        if (!(f > 0.0)) throw DomainError("sweep: frequencies must be positive");
}

SweepResult run_sweep(const SweepConfig& config) {
    config.validate();
    const std::size_t n_levels = config.gel_levels_m.size();
    const std::size_t n_freqs = config.frequencies_hz.size();
    const std::size_t n_cells = n_levels * n_freqs;
    const auto reps = static_cast<std::size_t>(config.repetitions);

    struct Cell {
        std::vector<SweepRow> rows;
    };
    std::vector<Cell> cells(n_cells);

    auto run_cell = [&](std::size_t cell) {
        const std::size_t li = cell / n_freqs;
        const std::size_t fi = cell % n_freqs;
        const double gel_m = config.gel_levels_m[li];
        const double freq = config.frequencies_hz[fi];
        Cell& out = cells[cell];

        auto fail_all = [&](const std::string& reason) {
            for (std::size_t r = 0; r < reps; ++r)
                for (auto method :
                     {analysis::SpeedMethod::phase_gradient, analysis::SpeedMethod::kspace}) {
                    SweepRow row;
                    row.gel_m = gel_m;
                    row.frequency_hz = freq;
                    row.rep = static_cast<int>(r);
                    row.method = method;
                    row.speed_mps = std::numeric_limits<double>::quiet_NaN();
                    row.status = reason;
                    out.rows.push_back(row);
                }
        };

        WavefieldRecord base;
        try {
            solver::PhantomGeometry geom = config.geometry;
            geom.gel_thickness = gel_m;
            const solver::PhantomModel model =
                solver::build_model(geom, config.pad, config.gel, config.sponge,
                                    config.excitation.contact_width_m);
            solver::Excitation exc = config.excitation;
            exc.frequency_hz = freq;
            base = solver::simulate(model, exc, config.solver);
        } catch (const std::exception& e) {
            fail_all(std::string("solver: ") + e.what());
            return;
        }

        for (std::size_t r = 0; r < reps; ++r) {
            const std::uint64_t seed = config.base_seed + cell * reps + r;
            WavefieldRecord noisy;
            try {
                noisy = analysis::add_measurement_noise(base, config.noise_sigma_m, seed);
            } catch (const std::exception& e) {
                // Per-rep failure: record both method rows as failed.
                for (auto method :
                     {analysis::SpeedMethod::phase_gradient, analysis::SpeedMethod::kspace}) {
                    SweepRow row;
                    row.gel_m = gel_m;
                    row.frequency_hz = freq;
                    row.rep = static_cast<int>(r);
                    row.method = method;
                    row.speed_mps = std::numeric_limits<double>::quiet_NaN();
                    row.status = std::string("noise: ") + e.what();
                    out.rows.push_back(row);
                }
                continue;
            }
            for (auto method :
                 {analysis::SpeedMethod::phase_gradient, analysis::SpeedMethod::kspace}) {
                SweepRow row;
                row.gel_m = gel_m;
                row.frequency_hz = freq;
                row.rep = static_cast<int>(r);
                row.method = method;
                try {
                    analysis::SpeedEstimate est;
                    if (method == analysis::SpeedMethod::phase_gradient) {
                        est = analysis::phase_delay_speed(noisy, freq);
                    } else {
                        est = analysis::kspace_peak_speed(analysis::kspace_transform(noisy),
                                                          freq);
                    }
                    row.speed_mps = est.speed_mps;
                    row.ci_mps = est.ci_halfwidth_mps.value_or(0.0);
                } catch (const std::exception& e) {
                    row.speed_mps = std::numeric_limits<double>::quiet_NaN();
                    row.status = e.what();
                }
                out.rows.push_back(row);
            }
        }
    };

    unsigned n_threads = config.threads > 0
                             ? static_cast<unsigned>(config.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_cells));
    if (n_threads <= 1) {
        for (std::size_t c = 0; c < n_cells; ++c) run_cell(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t c = next.fetch_add(1); c < n_cells; c = next.fetch_add(1))
                    run_cell(c);
            });
        for (auto& th : pool) th.join();
    }

    SweepResult result;
    for (auto& cell : cells)
        for (auto& row : cell.rows) result.rows.push_back(std::move(row));
    return result;
}

ComparisonReport compare_levels(const SweepResult& result) {
    // speeds[frequency][gel level] -> per-rep k-space speeds
    std::map<double, std::map<double, std::vector<double>>> speeds;
    for (const auto& row : result.rows) {
        if (row.method != analysis::SpeedMethod::kspace || !row.ok()) continue;
        if (!std::isfinite(row.speed_mps)) continue;
        speeds[row.frequency_hz][row.gel_m].push_back(row.speed_mps);
    }
    if (speeds.empty()) throw InsufficientDataError("compare_levels: no usable k-space rows");

    ComparisonReport report;
    for (const auto& [freq, by_level] : speeds) {
        const auto base_it = by_level.find(0.0);
        if (base_it == by_level.end())
            throw InsufficientDataError("compare_levels: base (0 mm) level missing");
        const auto& base = base_it->second;
        const double base_mean = stats::describe(base).mean;
        for (const auto& [gel, sample] : by_level) {
            if (gel == 0.0) continue;
            ComparisonRow row;
            row.frequency_hz = freq;
            row.gel_m = gel;
            row.percent_change =
                100.0 * (stats::describe(sample).mean - base_mean) / base_mean;
            row.ttest = stats::t_test_unpaired(base, sample);
            report.rows.push_back(row);
        }
    }
    return report;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "gel_thickness_mm,frequency_hz,rep,method,speed_mps,ci_mps,status\n";
    for (const auto& row : result.rows) {
        out << csv::format_double(row.gel_m * 1000.0) << ',' << csv::format_double(row.frequency_hz)
            << ',' << row.rep << ',' << analysis::method_name(row.method) << ',';
        if (std::isfinite(row.speed_mps)) out << csv::format_double(row.speed_mps);
        out << ',';
        if (row.ci_mps > 0.0) out << csv::format_double(row.ci_mps);
        out << ',' << row.status << '\n';
    }
}

SweepResult read_sweep_csv(std::istream& in) {
    const auto lines = csv::read_lines(in);
    if (lines.empty()) throw Error("sweep csv: empty input");
    if (lines[0] != "gel_thickness_mm,frequency_hz,rep,method,speed_mps,ci_mps,status")
        throw Error("sweep csv: unexpected header");
    SweepResult result;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = csv::split_line(lines[i]);
        if (f.size() != 7) throw Error("sweep csv: bad column count on row " + std::to_string(i));
        SweepRow row;
        row.gel_m = csv::parse_double(f[0], "sweep csv gel") / 1000.0;
        row.frequency_hz = csv::parse_double(f[1], "sweep csv frequency");
        row.rep = static_cast<int>(csv::parse_double(f[2], "sweep csv rep"));
        if (f[3] == "phase_gradient")
            row.method = analysis::SpeedMethod::phase_gradient;
        else if (f[3] == "kspace")
            row.method = analysis::SpeedMethod::kspace;
        else
            throw Error("sweep csv: unknown method '" + f[3] + "'");
        row.speed_mps = f[4].empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : csv::parse_double(f[4], "sweep csv speed");
        row.ci_mps = f[5].empty() ? 0.0 : csv::parse_double(f[5], "sweep csv ci");
        row.status = f[6];
        result.rows.push_back(row);
    }
    return result;
}

SweepResult read_sweep_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open sweep csv", path);
    return read_sweep_csv(in);
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
    out << "frequency_hz,gel_level_mm,t,df,p,significant\n";
    for (const auto& row : report.rows) {
        out << csv::format_double(row.frequency_hz) << ',' << csv::format_double(row.gel_m * 1000.0)
            << ',' << csv::format_double(row.ttest.t_statistic) << ','
            << csv::format_double(row.ttest.degrees_of_freedom) << ','
            << csv::format_double(row.ttest.p_value) << ',' << (row.ttest.significant ? 1 : 0)
            << '\n';
    }
}

namespace {

svg::Series level_series(const SweepResult& result, double gel_m,
                         analysis::SpeedMethod method) {
    std::map<double, std::vector<double>> by_freq;
    for (const auto& row : result.rows)
        if (row.gel_m == gel_m && row.method == method && row.ok() &&
            std::isfinite(row.speed_mps))
            by_freq[row.frequency_hz].push_back(row.speed_mps);
    svg::Series s;
    s.label = level_tag(gel_m) + " mm gel";
    for (const auto& [freq, speeds] : by_freq) {
        const auto summary = stats::describe(speeds);
        s.points.push_back({freq, summary.mean, summary.sd.value_or(0.0)});
    }
    return s;
}

}  // namespace

void write_dispersion_svg(std::ostream& out, const SweepResult& result) {
    std::vector<double> levels;
    for (const auto& row : result.rows)
        if (std::find(levels.begin(), levels.end(), row.gel_m) == levels.end())
            levels.push_back(row.gel_m);
    std::sort(levels.begin(), levels.end());
    std::vector<svg::Series> series;
    for (double gel : levels)
        series.push_back(level_series(result, gel, analysis::SpeedMethod::kspace));
    svg::write_line_plot(out, "Surface wave speed vs frequency", "frequency [Hz]",
                         "speed [m/s]", series);
}

void emit_outputs(const SweepResult& result, const ComparisonReport& report,
                  const SweepConfig& config) {
    fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory", dir.string());

    {
        std::ofstream out(dir / "sweep.csv");
        if (!out) throw IoError("cannot write", (dir / "sweep.csv").string());
        write_sweep_csv(out, result);
    }
    {
        std::ofstream out(dir / "comparison.csv");
        if (!out) throw IoError("cannot write", (dir / "comparison.csv").string());
        write_comparison_csv(out, report);
    }
    {
        std::ofstream out(dir / "dispersion.svg");
        if (!out) throw IoError("cannot write", (dir / "dispersion.svg").string());
        write_dispersion_svg(out, result);
    }
    {
        std::ofstream out(dir / "run_manifest");
        if (!out) throw IoError("cannot write", (dir / "run_manifest").string());
        write_config(out, config);
    }

    if (config.emit_kspace) {
        // Recompute the noiseless record per cell and export its k-space grid.
        for (double gel_m : config.gel_levels_m) {
            for (double freq : config.frequencies_hz) {
                solver::PhantomGeometry geom = config.geometry;
                geom.gel_thickness = gel_m;
                try {
                    const auto model =
                        solver::build_model(geom, config.pad, config.gel, config.sponge,
                                            config.excitation.contact_width_m);
                    solver::Excitation exc = config.excitation;
                    exc.frequency_hz = freq;
                    const auto record = solver::simulate(model, exc, config.solver);
                    const auto map = analysis::kspace_transform(record);
                    const std::string name = "kspace_" + level_tag(gel_m) + "_" +
                                             csv::format_double(freq) + ".csv";
                    analysis::write_kspace_csv_file((dir / name).string(), map);
                } catch (const std::exception&) {
                    // Failed cells already surface in sweep.csv.
                }
            }
        }
    }
}

}  // namespace swelab::experiments
