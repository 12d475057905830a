#include "swelab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "swelab/csv.hpp"

namespace swelab::svg {

namespace {

constexpr double kWidth = 640.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 55.0;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) { return csv::format_double_fixed(v, 2); }

struct Range {
    double lo = 0.0, hi = 1.0;
};

Range nice_range(double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.07 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::vector<double> ticks(const Range& r, int count) {
    std::vector<double> out;
    const double raw = (r.hi - r.lo) / count;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    const double first = std::ceil(r.lo / step) * step;
    for (double t = first; t <= r.hi + 1e-12 * step; t += step) out.push_back(t);
    return out;
}

}  // namespace

void write_line_plot(std::ostream& out, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
    double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;
    bool any = false;
    for (const auto& s : series)
        for (const auto& p : s.points) {
            if (!any) {
                xlo = xhi = p.x;
                ylo = p.y - p.y_err;
                yhi = p.y + p.y_err;
                any = true;
            }
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y - p.y_err);
            yhi = std::max(yhi, p.y + p.y_err);
        }
    const Range xr = nice_range(xlo, xhi);
    const Range yr = nice_range(ylo, yhi);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto X = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto Y = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ticks(xr, 6)) {
        out << "<line x1=\"" << num(X(t)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\""
            << num(X(t)) << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(X(t)) << "\" y=\"" << num(kTop + ph + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << csv::format_double(t) << "</text>\n";
    }
    for (double t : ticks(yr, 6)) {
        out << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(Y(t)) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(Y(t)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(Y(t) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << csv::format_double(t) << "</text>\n";
    }
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << kTop + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << kTop + ph / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % (sizeof(kColors) / sizeof(kColors[0]))];
        const auto& pts = series[s].points;
        if (!pts.empty()) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& p : pts) out << num(X(p.x)) << ',' << num(Y(p.y)) << ' ';
            out << "\"/>\n";
            for (const auto& p : pts) {
                out << "<circle cx=\"" << num(X(p.x)) << "\" cy=\"" << num(Y(p.y))
                    << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
                if (p.y_err > 0.0) {
                    const double y1 = Y(p.y - p.y_err), y2 = Y(p.y + p.y_err);
                    out << "<line x1=\"" << num(X(p.x)) << "\" y1=\"" << num(y1) << "\" x2=\""
                        << num(X(p.x)) << "\" y2=\"" << num(y2) << "\" stroke=\"" << color
                        << "\"/>\n";
                    for (double yy : {y1, y2})
                        out << "<line x1=\"" << num(X(p.x) - 3) << "\" y1=\"" << num(yy)
                            << "\" x2=\"" << num(X(p.x) + 3) << "\" y2=\"" << num(yy)
                            << "\" stroke=\"" << color << "\"/>\n";
                }
            }
        }
        const double ly = kTop + 14 + 16 * static_cast<double>(s);
        out << "<line x1=\"" << kLeft + 8 << "\" y1=\"" << num(ly - 4) << "\" x2=\""
            << kLeft + 28 << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << kLeft + 33 << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace swelab::svg
