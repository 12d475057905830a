#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "swelab/experiments.hpp"

namespace swelab::experiments {

namespace {

SweepConfig config_or_default(const std::string& path) {
    if (path.empty()) return SweepConfig{};
    return load_config_file(path);
}

void print_estimate(std::ostream& out, const analysis::SpeedEstimate& est) {
    out << analysis::method_name(est.method) << ": " << est.speed_mps << " m/s";
    if (est.ci_halfwidth_mps) out << " (95% CI +/- " << *est.ci_halfwidth_mps << ")";
    if (est.method == analysis::SpeedMethod::kspace)
        out << " (f_p " << est.f_peak_hz << " Hz, k_p " << est.k_peak_per_m << " 1/m)";
    else
        out << " (slope " << est.phase_slope_rad_per_m << " rad/m, r2 " << est.r_squared << ")";
    out << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"swelab: layered-phantom surface wave elastography workbench"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress informational output");

    std::string config_path, out_path, in_path;
    double frequency = 100.0;
    double gel_mm = 0.0;
    double rho = 1500.0;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto* sim = app.add_subcommand("simulate", "run one phantom simulation, write wavefield CSV");
    sim->add_option("--config", config_path, "sweep config file supplying geometry/materials");
    sim->add_option("--frequency", frequency, "excitation frequency [Hz]")->required();
    sim->add_option("--gel-mm", gel_mm, "gel thickness [mm]");
    sim->add_option("--out", out_path, "output wavefield CSV path")->required();

    auto* ana = app.add_subcommand("analyze", "estimate wave speed from a wavefield CSV");
    ana->add_option("--in", in_path, "wavefield CSV path")->required();
    ana->add_option("--frequency", frequency, "excitation frequency [Hz]")->required();
    std::string kspace_out;
    ana->add_option("--kspace-out", kspace_out, "also write the k-space grid CSV here");

    auto* fit = app.add_subcommand("fit", "fit Voigt parameters from a dispersion CSV");
    fit->add_option("--in", in_path, "dispersion CSV (frequency_hz,speed_mps[,speed_sd_mps])")
        ->required();
    fit->add_option("--rho", rho, "density used in the speed formula [kg/m^3]");
    fit->add_option("--out", out_path, "write the fit result CSV here");

    auto* sweep = app.add_subcommand("sweep", "run the full gel-thickness x frequency study");
    sweep->add_option("--config", config_path, "sweep config file (defaults reproduce the study)");
    sweep->add_option("--out", out_path, "output directory (overrides config out_dir)");
    sweep->add_option("--seed", seed, "base noise seed (overrides config)")
        ->each([&](const std::string&) { seed_set = true; });

    auto* rep = app.add_subcommand("report", "recompute comparison and plots from sweep.csv");
    rep->add_option("--in", in_path, "existing sweep.csv")->required();
    rep->add_option("--out", out_path, "output directory")->required();

    std::vector<std::string> argv_like(args.rbegin(), args.rend());
    try {
        app.parse(argv_like);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) {
            SweepConfig cfg = config_or_default(config_path);
            solver::PhantomGeometry geom = cfg.geometry;
            geom.gel_thickness = gel_mm / 1000.0;
            const auto model = solver::build_model(geom, cfg.pad, cfg.gel, cfg.sponge,
                                                   cfg.excitation.contact_width_m);
            if (!quiet) std::cout << model.summary();
            solver::Excitation exc = cfg.excitation;
            exc.frequency_hz = frequency;
            const auto record = solver::simulate(model, exc, cfg.solver);
            write_wavefield_csv_file(out_path, record);
            if (!quiet)
                std::cout << "wrote " << record.n_positions() << " x " << record.n_frames
                          << " record to " << out_path << '\n';
        } else if (ana->parsed()) {
            const auto record = read_wavefield_csv_file(in_path);
            print_estimate(std::cout, analysis::phase_delay_speed(record, frequency));
            const auto map = analysis::kspace_transform(record);
            print_estimate(std::cout, analysis::kspace_peak_speed(map, frequency));
            if (!kspace_out.empty()) analysis::write_kspace_csv_file(kspace_out, map);
        } else if (fit->parsed()) {
            const auto points = dispersion::read_dispersion_csv_file(in_path);
            const auto result = dispersion::fit_voigt(points, rho);
            std::cout << "mu1 = " << result.material.mu1 << " Pa\n"
                      << "mu2 = " << result.material.mu2 << " Pa.s\n"
                      << "rho = " << result.material.rho << " kg/m^3\n"
                      << "rms residual = " << result.rms_residual_mps << " m/s over "
                      << result.n_points << " points\n";
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw IoError("cannot write fit csv", out_path);
                dispersion::write_fit_csv(out, result);
            }
        } else if (sweep->parsed()) {
            SweepConfig cfg = config_or_default(config_path);
            if (!out_path.empty()) cfg.out_dir = out_path;
            if (seed_set) cfg.base_seed = seed;
            if (!quiet)
                std::cout << "sweep: " << cfg.gel_levels_m.size() << " levels x "
                          << cfg.frequencies_hz.size() << " frequencies x " << cfg.repetitions
                          << " reps\n";
            const auto result = run_sweep(cfg);
            const auto report = compare_levels(result);
            emit_outputs(result, report, cfg);
            std::size_t failed = 0;
            for (const auto& row : result.rows)
                if (!row.ok()) ++failed;
            if (!quiet) {
                std::cout << "wrote outputs to " << cfg.out_dir << " (" << result.rows.size()
                          << " rows";
                if (failed) std::cout << ", " << failed << " failed";
                std::cout << ")\n";
            }
        } else if (rep->parsed()) {
            const auto result = read_sweep_csv_file(in_path);
            const auto report = compare_levels(result);
            std::filesystem::create_directories(out_path);
            {
                std::ofstream out(std::filesystem::path(out_path) / "comparison.csv");
                if (!out) throw IoError("cannot write comparison csv", out_path);
                write_comparison_csv(out, report);
            }
            {
                std::ofstream out(std::filesystem::path(out_path) / "dispersion.svg");
                if (!out) throw IoError("cannot write dispersion svg", out_path);
                write_dispersion_svg(out, result);
            }
            if (!quiet) std::cout << "wrote report to " << out_path << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace swelab::experiments
