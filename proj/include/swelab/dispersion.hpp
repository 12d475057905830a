#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swelab/errors.hpp"

namespace swelab::dispersion {

/// Voigt (Kelvin-Voigt) viscoelastic solid: a shear spring mu1 in parallel
/// with a shear dashpot mu2, at mass density rho.
struct VoigtMaterial {
    double mu1 = 0.0;   // shear elasticity [Pa]
    double mu2 = 0.0;   // shear viscosity [Pa s]
    double rho = 0.0;   // density [kg/m^3]

    /// Throws DomainError unless mu1 > 0, mu2 >= 0, rho > 0, all finite.
    void validate() const;
};

/// Default sponge material (mu1 6.83 kPa, mu2 24 Pa s, cellulose density).
inline VoigtMaterial sponge_material() { return {6830.0, 24.0, 1500.0}; }

/// Default transmission-gel material.
inline VoigtMaterial gel_material() { return {1300.0, 24.0, 1000.0}; }

/// One measured point of a dispersion curve.
struct DispersionPoint {
    double frequency_hz = 0.0;
    double speed_mps = 0.0;
    std::optional<double> speed_sd_mps;
};

/// Frequency-domain moduli of a Voigt material.
struct ViscoModuli {
    double storage_pa = 0.0;    // G' = mu1
    double loss_pa = 0.0;       // G'' = omega * mu2
    double long_term_pa = 0.0;  // G_inf = mu1
};

struct VoigtFit {
    VoigtMaterial material;
    double rms_residual_mps = 0.0;
    std::size_t n_points = 0;
};

struct FitOptions {
    double mu1_min = 10.0;      // [Pa]  coarse-grid lower bound
    double mu1_max = 1e6;       // [Pa]
    double mu2_max = 1e3;       // [Pa s]; lower bound is the clamp at 0
    int grid_size = 40;         // log-spaced nodes per axis
    double rel_tol = 1e-10;     // objective convergence tolerance
    int max_iterations = 4000;  // simplex iteration cap
};

/// Surface (Rayleigh-scaled) wave phase speed of a Voigt material, m/s.
double surface_wave_speed(const VoigtMaterial& mat, double frequency_hz);

/// Bulk shear wave phase speed: 1.05 x surface_wave_speed.
double shear_wave_speed(const VoigtMaterial& mat, double frequency_hz);

/// Storage, loss and long-term shear moduli at the given frequency.
ViscoModuli voigt_moduli(const VoigtMaterial& mat, double frequency_hz);

/// Least-squares (mu1, mu2) identification from measured dispersion points.
///
/// Minimizes the sum of squared speed residuals over a log-spaced coarse grid
/// followed by Nelder-Mead refinement with mu2 clamped at 0. Needs at least
/// two points with distinct frequencies.
VoigtFit fit_voigt(std::span<const DispersionPoint> points, double rho,
                   const FitOptions& options = {});

/// Sum of squared speed residuals for the given parameters (the fit objective).
double fit_objective(std::span<const DispersionPoint> points, double rho,
                     double mu1, double mu2);

/// Non-convergence after the iteration cap; carries the best iterate found.
class FitConvergenceError : public Error {
public:
    FitConvergenceError(const std::string& msg, VoigtFit best)
        : Error(msg), best_(best) {}
    const VoigtFit& best_fit() const { return best_; }

private:
    VoigtFit best_;
};

/// Reads `frequency_hz,speed_mps[,speed_sd_mps]` rows (header required).
std::vector<DispersionPoint> read_dispersion_csv(std::istream& in);
std::vector<DispersionPoint> read_dispersion_csv_file(const std::string& path);

/// Writes header `mu1_pa,mu2_pas,rho_kgm3,rms_residual_mps,n_points` + one row.
void write_fit_csv(std::ostream& out, const VoigtFit& fit);

}  // namespace swelab::dispersion
