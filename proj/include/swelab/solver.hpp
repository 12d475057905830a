#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "swelab/dispersion.hpp"
#include "swelab/wavefield.hpp"

namespace swelab::solver {

/// Linear elastic material (the acoustic standoff pad).
struct ElasticMaterial {
    double youngs_modulus = 36700.0;  // [Pa]
    double poisson_ratio = 0.499;
    double rho = 1000.0;              // [kg/m^3]

    void validate() const;
};

inline ElasticMaterial pad_material() { return {}; }

/// Near-incompressible Poisson ratio assigned to Voigt regions, which the
/// paper characterizes by shear parameters only.
inline constexpr double kVoigtPoissonRatio = 0.499;

/// Sponge description: Voigt parameters plus the void-ratio density option.
struct SpongeSpec {
    dispersion::VoigtMaterial material = dispersion::sponge_material();
    double void_ratio = 0.7;
    bool use_effective_density = false;

    /// rho / (1 + void_ratio) when effective density is enabled.
    double solver_density() const;
    void validate() const;
};

struct PhantomGeometry {
    double pad_length = 0.09;       // [m]
    double pad_height = 0.015;
    double sponge_length = 0.12;
    double sponge_height = 0.02;
    double gel_thickness = 0.0;     // 0 (base), 0.002, 0.007 or 0.012 in the study
    double element_size = 0.001;
    double absorber_width = 0.01;   // band emulating the infinite region

    void validate() const;
};

struct Excitation {
    double frequency_hz = 100.0;
    double duration_s = 0.1;
    double amplitude_m = 1e-4;
    double contact_width_m = 0.003;  // indenter footprint; build_model consumes it

    void validate() const;
};

enum class Region : std::uint8_t { pad = 0, gel = 1, sponge = 2, absorber = 3 };

const char* region_name(Region r);

/// Plane-stress material bound to a mesh region.
struct RegionMaterial {
    double youngs_modulus = 0.0;
    double poisson_ratio = 0.0;
    double rho = 0.0;
    double shear_viscosity = 0.0;  // Voigt mu2; 0 for purely elastic regions
    bool active = false;

    double p_wave_speed() const;   // sqrt(E / (rho (1 - nu^2)))
    double s_wave_speed() const;   // sqrt(E / (2 (1 + nu) rho))
};

/// Meshed 2D layered phantom: structured bilinear quads on a common lattice,
/// boundary-condition node sets, and impedance-matched dashpots standing in
/// for the infinite region below the sponge.
struct PhantomModel {
    std::vector<double> node_x, node_y;
    std::vector<std::array<std::int32_t, 4>> elements;  // CCW corner nodes
    std::vector<std::uint8_t> element_region;
    std::array<RegionMaterial, 4> materials;            // indexed by Region
    std::array<std::size_t, 4> region_counts{};

    std::vector<std::int32_t> driven_nodes;   // prescribed vertical motion
    std::vector<std::int32_t> fixed_nodes;    // pinned in both directions
    struct Dashpot {
        std::int32_t node;
        double zx, zy;  // damping coefficient per direction [N s/m]
    };
    std::vector<Dashpot> dashpots;

    /// Sponge top-surface nodes in ascending x (the recordable surface).
    std::vector<std::int32_t> surface_nodes;

    double element_size = 0.0;
    double surface_y = 0.0;
    double source_center_x = 0.0;  // mid-point of the driven segment

    std::size_t n_nodes() const { return node_x.size(); }
    std::size_t n_elements() const { return elements.size(); }

    /// Plain-text report: element counts per region, node-set sizes, stable dt.
    std::string summary() const;
};

/// Width of the pinned segment at the pad top center, standing in for the
/// ultrasound array resting on the pad (38 mm linear-array footprint).
inline constexpr double kDefaultFixedSegmentWidth = 0.038;

/// Builds the layered phantom mesh. gel.thickness = 0 yields a two-layer
/// model (pad directly on the sponge). Throws MeshError when a region
/// dimension is not an integer multiple of element_size (within 1e-9 m).
PhantomModel build_model(const PhantomGeometry& geometry, const ElasticMaterial& pad,
                         const dispersion::VoigtMaterial& gel, const SpongeSpec& sponge,
                         double contact_width_m = 0.003,
                         double fixed_width_m = kDefaultFixedSegmentWidth);

/// Homogeneous block of sponge material with a driven segment at the top-left
/// surface and absorbing treatment on the bottom band and both full side
/// edges. Verification companion to the dispersion formula.
PhantomModel build_half_space(double length, double height, double element_size,
                              const SpongeSpec& sponge, double absorber_width,
                              double contact_width_m = 0.003);

/// Largest stable explicit step: cfl_factor * min over elements of
/// (h / c_p) * (sqrt(1 + xi^2) - xi), where c_p is the plane-stress P-wave
/// speed and xi = mu2 * (2 c_p / h) / (2 mu1) is the Voigt damping ratio at
/// the highest mesh frequency (xi = 0 for elastic regions).
double stable_time_step(const PhantomModel& model, double cfl_factor = 0.5);

struct RecordingSpec {
    /// Start of the sampled segment relative to the source center; the
    /// default begins 4 mm downstream, close enough to survive the strong
    /// Voigt attenuation at the study frequencies.
    double start_offset_m = 0.004;
    std::size_t position_count = 25;
    double frame_rate_hz = 2000.0;
};

struct SolverConfig {
    double cfl_factor = 0.5;
    RecordingSpec recording;
    double bound_factor = 100.0;  // instability bound, multiple of amplitude
    bool track_energy = false;
};

struct SimulationTrace {
    WavefieldRecord record;
    std::vector<double> kinetic_energy;  // per frame, when track_energy is set
    std::vector<double> strain_energy;
    double dt = 0.0;
    std::size_t n_steps = 0;
};

/// Explicit central-difference integration of the damped equations of motion
/// with the driven nodes following amplitude * ramp * sin(2 pi f t). Output is
/// deterministic and bit-identical for identical inputs.
WavefieldRecord simulate(const PhantomModel& model, const Excitation& excitation,
                         const SolverConfig& config = {});

/// Drive signal as an arbitrary function of time; superposition/verification
/// hook used by the linearity tests. Returns the full trace.
SimulationTrace simulate_with_drive(const PhantomModel& model,
                                    const std::function<double(double)>& drive,
                                    double duration_s, double amplitude_bound_m,
                                    const SolverConfig& config = {});

}  // namespace swelab::solver
