#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "swelab/wavefield.hpp"

namespace swelab::analysis {

/// |U_y(K, F)| over spatial frequency K [1/m] and temporal frequency F [Hz].
///
/// Sign convention: the spatial kernel is e^{+j 2 pi K x}, so a wave
/// propagating toward +x (away from the left-placed source) peaks in the
/// K > 0, F > 0 quadrant. Magnitudes are normalized by sqrt(Nk * Nf) so that
/// sum |U|^2 over the whole grid equals the windowed-signal energy.
struct KSpaceMap {
    std::vector<double> k_axis;     // ascending, uniform [1/m]
    std::vector<double> f_axis;     // ascending, uniform [Hz]
    std::vector<double> magnitude;  // size k_axis.size() * f_axis.size(), row-major in k

    double& at(std::size_t ik, std::size_t jf) { return magnitude[ik * f_axis.size() + jf]; }
    double at(std::size_t ik, std::size_t jf) const { return magnitude[ik * f_axis.size() + jf]; }
};

enum class SpeedMethod { phase_gradient, kspace };

const char* method_name(SpeedMethod m);

struct SpeedEstimate {
    double speed_mps = 0.0;
    SpeedMethod method = SpeedMethod::phase_gradient;
    std::optional<double> ci_halfwidth_mps;   // 95%, phase-gradient only

    // Diagnostics; populated per method.
    double phase_slope_rad_per_m = 0.0;       // phase_gradient
    double r_squared = 0.0;                   // phase_gradient
    double f_peak_hz = 0.0;                   // kspace
    double k_peak_per_m = 0.0;                // kspace
};

struct PhaseOptions {
    /// Lower bound on plausible wave speed, used to check that the position
    /// spacing resolves at least half a wavelength at the probed frequency.
    double min_speed_mps = 1.0;
    /// The projection window ends at the last frame and is the longest
    /// integer-period length not exceeding this fraction of the record.
    double window_fraction = 0.5;
};

/// Wave speed from the slope of unwrapped phase versus position.
///
/// Per position the complex amplitude at `frequency_hz` comes from a
/// single-bin discrete Fourier projection over an integer number of periods;
/// phases are unwrapped along x and fitted by ordinary least squares.
SpeedEstimate phase_delay_speed(const WavefieldRecord& record, double frequency_hz,
                                const PhaseOptions& options = {});

/// Hann-windowed, 4x zero-padded 2D DFT magnitude of the record.
KSpaceMap kspace_transform(const WavefieldRecord& record);

/// Phase velocity from the k-space peak on the F row nearest the excitation:
/// speed = f_p / k_p with k_p refined by 3-point parabolic interpolation.
SpeedEstimate kspace_peak_speed(const KSpaceMap& map, double excitation_frequency_hz);

/// Adds i.i.d. zero-mean Gaussian noise of standard deviation sigma to every
/// sample. Deterministic in (record, sigma, seed); sigma = 0 returns the
/// record unchanged.
WavefieldRecord add_measurement_noise(const WavefieldRecord& record, double sigma_m,
                                      std::uint64_t seed);

/// CSV grid: first row lists the f axis, first column the k axis.
void write_kspace_csv(std::ostream& out, const KSpaceMap& map);
void write_kspace_csv_file(const std::string& path, const KSpaceMap& map);

}  // namespace swelab::analysis
