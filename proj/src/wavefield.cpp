#include "swelab/wavefield.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "swelab/csv.hpp"
#include "swelab/errors.hpp"

namespace swelab {

double WavefieldRecord::dx() const {
    if (positions_m.size() < 2)
        throw DomainError("WavefieldRecord: need at least 2 positions for spacing");
    return positions_m[1] - positions_m[0];
}

void WavefieldRecord::validate(bool full) const {
    if (positions_m.size() < 2) throw DomainError("WavefieldRecord: too few positions");
    if (!(frame_interval_s > 0.0)) throw DomainError("WavefieldRecord: frame interval must be positive");
    if (n_frames == 0) throw DomainError("WavefieldRecord: no frames");
    if (samples.size() != positions_m.size() * n_frames)
        throw DomainError("WavefieldRecord: sample matrix size mismatch");
    const double d = positions_m[1] - positions_m[0];
    if (!(d > 0.0)) throw DomainError("WavefieldRecord: positions must be ascending");
    for (std::size_t i = 1; i < positions_m.size(); ++i) {
        const double di = positions_m[i] - positions_m[i - 1];
        if (std::abs(di - d) > 1e-9 * std::max(1.0, std::abs(d)))
            throw DomainError("WavefieldRecord: non-uniform position spacing");
    }
    for (double v : samples)
        if (!std::isfinite(v)) throw DomainError("WavefieldRecord: non-finite sample");
    if (full) {
        if (positions_m.size() < 8) throw DomainError("WavefieldRecord: fewer than 8 positions");
        if (positions_m.back() - positions_m.front() < 0.008 - 1e-12)
            throw DomainError("WavefieldRecord: span below 8 mm");
    }
}

void write_wavefield_csv(std::ostream& out, const WavefieldRecord& record) {
    out << "t_s";
    for (double x : record.positions_m)
        out << ",uy_x" << csv::format_double(x * 1000.0) << "mm";
    out << '\n';
    for (std::size_t n = 0; n < record.n_frames; ++n) {
        out << csv::format_double(static_cast<double>(n + 1) * record.frame_interval_s);
        for (std::size_t i = 0; i < record.n_positions(); ++i)
            out << ',' << csv::format_double(record.sample(i, n));
        out << '\n';
    }
}

void write_wavefield_csv_file(const std::string& path, const WavefieldRecord& record) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write wavefield csv", path);
    write_wavefield_csv(out, record);
}

WavefieldRecord read_wavefield_csv(std::istream& in) {
    const auto lines = csv::read_lines(in);
    if (lines.size() < 2) throw Error("wavefield csv: need a header and at least one frame");
    const auto header = csv::split_line(lines[0]);
    if (header.size() < 3 || header[0] != "t_s")
        throw Error("wavefield csv: expected header t_s,uy_x<pos_mm>mm,...");
    WavefieldRecord rec;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const std::string& h = header[c];
        if (h.rfind("uy_x", 0) != 0 || h.size() < 7 || h.substr(h.size() - 2) != "mm")
            throw Error("wavefield csv: bad position column '" + h + "'");
        const std::string num = h.substr(4, h.size() - 6);
        rec.positions_m.push_back(csv::parse_double(num, "wavefield csv position") / 1000.0);
    }
    rec.n_frames = lines.size() - 1;
    rec.samples.resize(rec.positions_m.size() * rec.n_frames);
    double t_prev = 0.0;
    for (std::size_t n = 0; n < rec.n_frames; ++n) {
        const auto fields = csv::split_line(lines[n + 1]);
        if (fields.size() != header.size())
            throw Error("wavefield csv: column count mismatch on row " + std::to_string(n + 1));
        const double t = csv::parse_double(fields[0], "wavefield csv time");
        if (n == 0)
            rec.frame_interval_s = t;
        else if (std::abs((t - t_prev) - rec.frame_interval_s) > 1e-9 * rec.frame_interval_s)
            throw Error("wavefield csv: non-uniform frame times");
        t_prev = t;
        for (std::size_t i = 0; i < rec.positions_m.size(); ++i)
            rec.sample(i, n) = csv::parse_double(fields[i + 1], "wavefield csv sample");
    }
    rec.validate(false);
    return rec;
}

WavefieldRecord read_wavefield_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open wavefield csv", path);
    return read_wavefield_csv(in);
}

}  // namespace swelab
