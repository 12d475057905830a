#include "swelab/dispersion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "swelab/csv.hpp"

namespace swelab::dispersion {

namespace {

constexpr double kRayleighFactor = 1.05;

void require_frequency(double frequency_hz) {
    if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0)
        throw DomainError("frequency must be finite and positive");
}

}  // namespace

void VoigtMaterial::validate() const {
    if (!std::isfinite(mu1) || !std::isfinite(mu2) || !std::isfinite(rho))
        throw DomainError("VoigtMaterial: non-finite parameter");
    if (mu1 <= 0.0) throw DomainError("VoigtMaterial: mu1 must be positive");
    if (mu2 < 0.0) throw DomainError("VoigtMaterial: mu2 must be non-negative");
    if (rho <= 0.0) throw DomainError("VoigtMaterial: rho must be positive");
}

double surface_wave_speed(const VoigtMaterial& mat, double frequency_hz) {
    mat.validate();
    require_frequency(frequency_hz);
    const double omega = 2.0 * std::numbers::pi * frequency_hz;
    const double m = mat.mu1 * mat.mu1 + omega * omega * mat.mu2 * mat.mu2;
    const double c = std::sqrt(2.0 * m / (mat.rho * (mat.mu1 + std::sqrt(m)))) / kRayleighFactor;
    return c;
}

double shear_wave_speed(const VoigtMaterial& mat, double frequency_hz) {
    return kRayleighFactor * surface_wave_speed(mat, frequency_hz);
}

ViscoModuli voigt_moduli(const VoigtMaterial& mat, double frequency_hz) {
    mat.validate();
    require_frequency(frequency_hz);
    const double omega = 2.0 * std::numbers::pi * frequency_hz;
    return {mat.mu1, omega * mat.mu2, mat.mu1};
}

double fit_objective(std::span<const DispersionPoint> points, double rho,
                     double mu1, double mu2) {
    const VoigtMaterial mat{mu1, mu2, rho};
    double ss = 0.0;
    for (const auto& p : points) {
        const double r = surface_wave_speed(mat, p.frequency_hz) - p.speed_mps;
        ss += r * r;
    }
    return ss;
}

namespace {

// Nelder-Mead on (mu1, mu2) with mu2 clamped at 0. Parameters are kept in
// physical units; the simplex is seeded around the grid minimum.
struct SimplexResult {
    double mu1, mu2, value;
    bool converged;
};

SimplexResult nelder_mead(std::span<const DispersionPoint> points, double rho,
                          double mu1_0, double mu2_0, const FitOptions& opt) {
    using Vertex = std::array<double, 2>;
    auto clamp = [&](Vertex v) {
        v[0] = std::clamp(v[0], 1e-6, 10.0 * opt.mu1_max);
        v[1] = std::clamp(v[1], 0.0, 10.0 * opt.mu2_max);
        return v;
    };
    auto eval = [&](const Vertex& v) { return fit_objective(points, rho, v[0], v[1]); };

    std::array<Vertex, 3> x = {Vertex{mu1_0, mu2_0},
                               Vertex{mu1_0 * 1.15, mu2_0},
                               Vertex{mu1_0, mu2_0 * 1.15 + 0.05}};
    for (auto& v : x) v = clamp(v);
    std::array<double, 3> f = {eval(x[0]), eval(x[1]), eval(x[2])};

    bool converged = false;
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        // Order best..worst.
        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
        const Vertex& best = x[idx[0]];
        const Vertex& good = x[idx[1]];
        Vertex& worst = x[idx[2]];

        const double spread = f[idx[2]] - f[idx[0]];
        if (spread <= opt.rel_tol * (std::abs(f[idx[0]]) + 1e-300)) {
            converged = true;
            break;
        }

        const Vertex centroid = {0.5 * (best[0] + good[0]), 0.5 * (best[1] + good[1])};
        auto along = [&](double t) {
            return clamp({centroid[0] + t * (centroid[0] - worst[0]),
                          centroid[1] + t * (centroid[1] - worst[1])});
        };

        Vertex xr = along(1.0);
        double fr = eval(xr);
        if (fr < f[idx[0]]) {
            Vertex xe = along(2.0);
            double fe = eval(xe);
            if (fe < fr) {
                worst = xe;
                f[idx[2]] = fe;
            } else {
                worst = xr;
                f[idx[2]] = fr;
            }
        } else if (fr < f[idx[1]]) {
            worst = xr;
            f[idx[2]] = fr;
        } else {
            Vertex xc = along(fr < f[idx[2]] ? 0.5 : -0.5);
            double fc = eval(xc);
            if (fc < std::min(fr, f[idx[2]])) {
                worst = xc;
                f[idx[2]] = fc;
            } else {
                // Shrink toward the best vertex.
                for (int k = 1; k < 3; ++k) {
                    x[idx[k]] = clamp({best[0] + 0.5 * (x[idx[k]][0] - best[0]),
                                       best[1] + 0.5 * (x[idx[k]][1] - best[1])});
                    f[idx[k]] = eval(x[idx[k]]);
                }
            }
        }
    }

    const int ibest = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
    return {x[ibest][0], x[ibest][1], f[ibest], converged};
}

}  // namespace

VoigtFit fit_voigt(std::span<const DispersionPoint> points, double rho,
                   const FitOptions& options) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("fit_voigt: rho must be positive");
    if (points.size() < 2)
        throw InsufficientDataError("fit_voigt: need at least 2 dispersion points");
    {
        bool distinct = false;
        for (std::size_t i = 1; i < points.size(); ++i)
            if (points[i].frequency_hz != points[0].frequency_hz) distinct = true;
        if (!distinct)
            throw InsufficientDataError("fit_voigt: points must span distinct frequencies");
    }
    for (const auto& p : points) {
        require_frequency(p.frequency_hz);
        if (!(p.speed_mps > 0.0) || !std::isfinite(p.speed_mps))
            throw DomainError("fit_voigt: speeds must be finite and positive");
    }

    // Coarse log-spaced grid; mu2 row 0 covers the elastic limit exactly.
    double best_mu1 = options.mu1_min, best_mu2 = 0.0;
    double best_val = std::numeric_limits<double>::infinity();
    const int n = std::max(4, options.grid_size);
    const double lmu1_lo = std::log(options.mu1_min), lmu1_hi = std::log(options.mu1_max);
    const double lmu2_lo = std::log(1e-3), lmu2_hi = std::log(options.mu2_max);
    for (int i = 0; i < n; ++i) {
        const double mu1 = std::exp(lmu1_lo + (lmu1_hi - lmu1_lo) * i / (n - 1));
        for (int j = -1; j < n; ++j) {
            const double mu2 =
                j < 0 ? 0.0 : std::exp(lmu2_lo + (lmu2_hi - lmu2_lo) * j / (n - 1));
            const double v = fit_objective(points, rho, mu1, mu2);
            if (v < best_val) {
                best_val = v;
                best_mu1 = mu1;
                best_mu2 = mu2;
            }
        }
    }

    const SimplexResult r = nelder_mead(points, rho, best_mu1, best_mu2, options);

    VoigtFit fit;
    fit.material = {r.mu1, r.mu2, rho};
    fit.rms_residual_mps = std::sqrt(r.value / static_cast<double>(points.size()));
    fit.n_points = points.size();
    if (!r.converged)
        throw FitConvergenceError("fit_voigt: simplex did not converge within iteration cap",
                                  fit);
    return fit;
}

std::vector<DispersionPoint> read_dispersion_csv(std::istream& in) {
    const auto lines = csv::read_lines(in);
    if (lines.empty()) throw Error("dispersion csv: empty input");
    const auto header = csv::split_line(lines[0]);
    if (header.size() < 2 || header[0] != "frequency_hz" || header[1] != "speed_mps")
        throw Error("dispersion csv: expected header frequency_hz,speed_mps[,speed_sd_mps]");
    std::vector<DispersionPoint> points;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv::split_line(lines[i]);
        if (fields.size() < 2) throw Error("dispersion csv: too few columns on row " + std::to_string(i));
        DispersionPoint p;
        p.frequency_hz = csv::parse_double(fields[0], "dispersion csv frequency");
        p.speed_mps = csv::parse_double(fields[1], "dispersion csv speed");
        if (fields.size() >= 3 && !fields[2].empty()) {
            const double sd = csv::parse_double(fields[2], "dispersion csv speed sd");
            if (sd < 0.0) throw DomainError("dispersion csv: speed_sd_mps must be >= 0");
            p.speed_sd_mps = sd;
        }
        points.push_back(p);
    }
    return points;
}

std::vector<DispersionPoint> read_dispersion_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dispersion csv", path);
    return read_dispersion_csv(in);
}

void write_fit_csv(std::ostream& out, const VoigtFit& fit) {
    out << "mu1_pa,mu2_pas,rho_kgm3,rms_residual_mps,n_points\n"
        << csv::format_double(fit.material.mu1) << ','
        << csv::format_double(fit.material.mu2) << ','
        << csv::format_double(fit.material.rho) << ','
        << csv::format_double(fit.rms_residual_mps) << ','
        << fit.n_points << '\n';
}

}  // namespace swelab::dispersion
