#include "swelab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

#include "swelab/csv.hpp"
#include "swelab/errors.hpp"
#include "swelab/stats.hpp"

namespace swelab::analysis {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPadFactor = 4;
constexpr double kMinSlopeRadPerM = 1e-6;
constexpr int kBoundaryMarginBins = 2;

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                     static_cast<double>(n - 1)));
    return w;
}

// Longest window length (in frames) ending at the last frame that covers an
// integer number of periods of `frequency`. Prefers lengths within the
// configured fraction of the record; falls back to the whole record when no
// integer-period window exists.
std::size_t projection_window(std::size_t n_frames, double frame_interval,
                              double frequency, double fraction) {
    const double frames_per_period = 1.0 / (frequency * frame_interval);
    const auto limit = static_cast<std::size_t>(
        std::max(1.0, std::floor(fraction * static_cast<double>(n_frames))));
    std::size_t best = 0;
    std::size_t smallest_valid = 0;
    for (int k = 1;; ++k) {
        const double len = k * frames_per_period;
        if (len > static_cast<double>(n_frames) + 1e-9) break;
        if (std::abs(len - std::round(len)) < 1e-9 * len) {
            const auto l = static_cast<std::size_t>(std::llround(len));
            if (smallest_valid == 0) smallest_valid = l;
            if (l <= limit) best = l;
        }
    }
    if (best != 0) return best;
    if (smallest_valid != 0) return smallest_valid;
    return n_frames;
}

}  // namespace

const char* method_name(SpeedMethod m) {
    return m == SpeedMethod::phase_gradient ? "phase_gradient" : "kspace";
}

SpeedEstimate phase_delay_speed(const WavefieldRecord& record, double frequency_hz,
                                const PhaseOptions& options) {
    record.validate(false);
    if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
        throw DomainError("phase_delay_speed: frequency must be positive");
    const std::size_t n = record.n_positions();
    if (n < 3)
        throw InsufficientDataError(
            "phase_delay_speed: need at least 3 positions for the regression");
    const double nyquist = 0.5 / record.frame_interval_s;
    if (frequency_hz >= nyquist)
        throw DomainError("phase_delay_speed: frequency at or above Nyquist");
    const double dx = record.dx();
    const double min_wavelength = options.min_speed_mps / frequency_hz;
    if (dx >= 0.5 * min_wavelength)
        throw AliasingError("phase_delay_speed: position spacing exceeds half the "
                            "shortest expected wavelength");

    const std::size_t len = projection_window(record.n_frames, record.frame_interval_s,
                                              frequency_hz, options.window_fraction);
    const std::size_t start = record.n_frames - len;

    // Single-bin projection per position.
    std::vector<double> phase(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> acc = 0.0;
        for (std::size_t m = 0; m < len; ++m) {
            const double t = static_cast<double>(start + m) * record.frame_interval_s;
            const double arg = -2.0 * kPi * frequency_hz * t;
            acc += record.sample(i, start + m) * std::complex<double>(std::cos(arg), std::sin(arg));
        }
        phase[i] = std::arg(acc);
    }

    // Unwrap along x; flag steps that land on the ambiguity boundary.
    for (std::size_t i = 1; i < n; ++i) {
        double d = phase[i] - phase[i - 1];
        d = std::remainder(d, 2.0 * kPi);
        if (std::abs(d) >= kPi * (1.0 - 1e-9))
            throw AliasingError("phase_delay_speed: adjacent phase step at the unwrap boundary");
        phase[i] = phase[i - 1] + d;
    }

    // OLS phase = a + m x.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = record.positions_m[i];
        sx += x;
        sy += phase[i];
        sxx += x * x;
        sxy += x * phase[i];
    }
    const double nn = static_cast<double>(n);
    const double sxx_c = sxx - sx * sx / nn;
    const double slope = (sxy - sx * sy / nn) / sxx_c;
    const double intercept = (sy - slope * sx) / nn;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / nn;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = intercept + slope * record.positions_m[i];
        ss_res += (phase[i] - fit) * (phase[i] - fit);
        ss_tot += (phase[i] - ybar) * (phase[i] - ybar);
    }

    if (std::abs(slope) < kMinSlopeRadPerM)
        throw DegenerateSlopeError("phase_delay_speed: phase slope below 1e-6 rad/m");

    const double omega = 2.0 * kPi * frequency_hz;
    SpeedEstimate est;
    est.method = SpeedMethod::phase_gradient;
    est.speed_mps = omega / std::abs(slope);
    est.phase_slope_rad_per_m = slope;
    est.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

    const double se_slope = std::sqrt(ss_res / (nn - 2.0) / sxx_c);
    const double tq = stats::student_t_quantile(0.975, nn - 2.0);
    est.ci_halfwidth_mps = est.speed_mps * tq * se_slope / std::abs(slope);
    return est;
}

KSpaceMap kspace_transform(const WavefieldRecord& record) {
    record.validate(false);
    const std::size_t nx = record.n_positions();
    const std::size_t nt = record.n_frames;
    const double dx = record.dx();
    const double dt = record.frame_interval_s;

    const std::size_t nk = kPadFactor * nx;
    const std::size_t nf = kPadFactor * nt;
    const auto wx = hann_window(nx);
    const auto wt = hann_window(nt);

    // Separable DFT of the windowed record. Temporal kernel e^{-j2pi F t},
    // spatial kernel e^{+j2pi K x} (rightward wave -> K > 0 at F > 0).
    std::vector<std::complex<double>> stage(nx * nf);
    std::vector<std::complex<double>> tw(nf * nt);
    for (std::size_t j = 0; j < nf; ++j)
        for (std::size_t m = 0; m < nt; ++m) {
            const double arg = -2.0 * kPi * static_cast<double>(j) * static_cast<double>(m) /
                               static_cast<double>(nf);
            tw[j * nt + m] = {std::cos(arg), std::sin(arg)};
        }
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nf; ++j) {
            std::complex<double> acc = 0.0;
            const std::complex<double>* k = &tw[j * nt];
            for (std::size_t m = 0; m < nt; ++m)
                acc += wx[i] * wt[m] * record.sample(i, m) * k[m];
            stage[i * nf + j] = acc;
        }
    }

    KSpaceMap map;
    map.k_axis.resize(nk);
    map.f_axis.resize(nf);
    map.magnitude.assign(nk * nf, 0.0);
    const double df = 1.0 / (static_cast<double>(nf) * dt);
    const double dk = 1.0 / (static_cast<double>(nk) * dx);
    const auto half_k = static_cast<std::ptrdiff_t>(nk / 2);
    const auto half_f = static_cast<std::ptrdiff_t>(nf / 2);
    for (std::size_t a = 0; a < nk; ++a)
        map.k_axis[a] = static_cast<double>(static_cast<std::ptrdiff_t>(a) - half_k) * dk;
    for (std::size_t b = 0; b < nf; ++b)
        map.f_axis[b] = static_cast<double>(static_cast<std::ptrdiff_t>(b) - half_f) * df;

    const double norm = 1.0 / std::sqrt(static_cast<double>(nk) * static_cast<double>(nf));
    for (std::size_t a = 0; a < nk; ++a) {
        // Axis index a maps to DFT bin (a - nk/2) mod nk.
        const auto bin = static_cast<std::size_t>(
            (static_cast<std::ptrdiff_t>(a) - half_k + static_cast<std::ptrdiff_t>(nk)) %
            static_cast<std::ptrdiff_t>(nk));
        for (std::size_t b = 0; b < nf; ++b) {
            std::complex<double> acc = 0.0;
            for (std::size_t i = 0; i < nx; ++i) {
                const double arg = 2.0 * kPi * static_cast<double>(bin) * static_cast<double>(i) /
                                   static_cast<double>(nk);
                acc += stage[i * nf + ((b + static_cast<std::size_t>(half_f)) % nf)] *
                       std::complex<double>(std::cos(arg), std::sin(arg));
            }
            map.at(a, b) = std::abs(acc) * norm;
        }
    }
    return map;
}

SpeedEstimate kspace_peak_speed(const KSpaceMap& map, double excitation_frequency_hz) {
    if (map.k_axis.empty() || map.f_axis.empty() || map.magnitude.empty())
        throw DomainError("kspace_peak_speed: empty map");
    if (excitation_frequency_hz < map.f_axis.front() ||
        excitation_frequency_hz > map.f_axis.back())
        throw DomainError("kspace_peak_speed: excitation frequency outside the F axis");

    // Nearest F row.
    std::size_t jf = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < map.f_axis.size(); ++j) {
        const double d = std::abs(map.f_axis[j] - excitation_frequency_hz);
        if (d < best) {
            best = d;
            jf = j;
        }
    }

    // Positive-K bins (the k axis is ascending).
    std::size_t first_pos = 0;
    while (first_pos < map.k_axis.size() && map.k_axis[first_pos] <= 0.0) ++first_pos;
    if (map.k_axis.size() - first_pos < 3)
        throw UnreliablePeakError("kspace_peak_speed: too few positive-K bins");

    std::size_t imax = first_pos;
    for (std::size_t i = first_pos; i < map.k_axis.size(); ++i)
        if (map.at(i, jf) > map.at(imax, jf)) imax = i;

    if (map.at(imax, jf) <= 0.0)
        throw UnreliablePeakError("kspace_peak_speed: flat magnitude row, no peak");
    if (imax + kBoundaryMarginBins >= map.k_axis.size())
        throw UnreliablePeakError("kspace_peak_speed: peak at the K-axis boundary");

    // 3-point parabolic refinement; the left neighbour of the first positive
    // bin is the K = 0 bin, which keeps sub-bin peaks resolvable.
    const double yl = map.at(imax - 1, jf);
    const double y0 = map.at(imax, jf);
    const double yr = map.at(imax + 1, jf);
    const double denom = yl - 2.0 * y0 + yr;
    const double delta = denom != 0.0 ? 0.5 * (yl - yr) / denom : 0.0;
    const double dk = map.k_axis[1] - map.k_axis[0];
    const double k_peak = map.k_axis[imax] + delta * dk;
    if (!(k_peak > 0.0) || !std::isfinite(k_peak))
        throw UnreliablePeakError("kspace_peak_speed: refined peak at K <= 0");

    SpeedEstimate est;
    est.method = SpeedMethod::kspace;
    est.f_peak_hz = map.f_axis[jf];
    est.k_peak_per_m = k_peak;
    est.speed_mps = est.f_peak_hz / k_peak;
    if (!(est.speed_mps > 0.0))
        throw UnreliablePeakError("kspace_peak_speed: non-positive speed from peak");
    return est;
}

WavefieldRecord add_measurement_noise(const WavefieldRecord& record, double sigma_m,
                                      std::uint64_t seed) {
    if (!(sigma_m >= 0.0) || !std::isfinite(sigma_m))
        throw DomainError("add_measurement_noise: sigma must be >= 0");
    WavefieldRecord out = record;
    if (sigma_m == 0.0) return out;
    std::mt19937_64 rng(seed);
    // Box-Muller on uniform draws from the raw generator; bit-reproducible
    // independent of the standard library's distribution implementations.
    auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    };
    bool have_spare = false;
    double spare = 0.0;
    auto gauss = [&]() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double a = 2.0 * kPi * uniform();
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    };
    for (double& v : out.samples) v += sigma_m * gauss();
    return out;
}

void write_kspace_csv(std::ostream& out, const KSpaceMap& map) {
    for (double f : map.f_axis) out << ',' << csv::format_double(f);
    out << '\n';
    for (std::size_t i = 0; i < map.k_axis.size(); ++i) {
        out << csv::format_double(map.k_axis[i]);
        for (std::size_t j = 0; j < map.f_axis.size(); ++j)
            out << ',' << csv::format_double(map.at(i, j));
        out << '\n';
    }
}

void write_kspace_csv_file(const std::string& path, const KSpaceMap& map) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write k-space csv", path);
    write_kspace_csv(out, map);
}

}  // namespace swelab::analysis
