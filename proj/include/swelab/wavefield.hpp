#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swelab {

/// Vertical surface displacement u_y sampled at uniformly spaced positions
/// and a fixed frame rate. samples are stored position-major: sample(i, n) is
/// position i at time origin + n * frame_interval_s (the absolute origin does
/// not matter to any estimator in this library).
struct WavefieldRecord {
    std::vector<double> positions_m;   // ascending, uniform spacing
    double frame_interval_s = 5e-4;    // 2000 frames/s
    std::size_t n_frames = 0;
    std::vector<double> samples;       // size n_positions * n_frames, meters

    std::size_t n_positions() const { return positions_m.size(); }
    double& sample(std::size_t pos, std::size_t frame) {
        return samples[pos * n_frames + frame];
    }
    double sample(std::size_t pos, std::size_t frame) const {
        return samples[pos * n_frames + frame];
    }

    /// Uniform position spacing; throws if fewer than 2 positions.
    double dx() const;

    /// Checks uniform sampling and finite values; with `full` also enforces
    /// the recording contract of at least 8 positions spanning at least 8 mm.
    void validate(bool full = true) const;
};

/// CSV schema: header `t_s,uy_x<pos_mm>mm,...`, one row per frame.
void write_wavefield_csv(std::ostream& out, const WavefieldRecord& record);
void write_wavefield_csv_file(const std::string& path, const WavefieldRecord& record);
WavefieldRecord read_wavefield_csv(std::istream& in);
WavefieldRecord read_wavefield_csv_file(const std::string& path);

}  // namespace swelab
