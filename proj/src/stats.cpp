#include "swelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "swelab/errors.hpp"

namespace swelab::stats {

namespace {

double sample_mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x, double mean) {
    double s = 0.0;
    for (double v : x) s += (v - mean) * (v - mean);
    return s / static_cast<double>(x.size() - 1);
}

void require_finite(std::span<const double> x, const char* name) {
    for (double v : x) {
        if (!std::isfinite(v)) throw DomainError(std::string(name) + ": non-finite sample");
    }
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw Error("incomplete_beta: continued fraction failed to converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a, b must be positive");
    if (x < 0.0 || x > 1.0) throw DomainError("incomplete_beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // Use the symmetry relation where the continued fraction converges fastest.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) throw DomainError("student_t_cdf: df must be positive");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
    if (!(df > 0.0)) throw DomainError("student_t_quantile: df must be positive");
    if (!(p > 0.0) || !(p < 1.0)) throw DomainError("student_t_quantile: p outside (0, 1)");
    if (p == 0.5) return 0.0;
    // Bisection on the CDF; monotone, so this is robust. Bracket by doubling.
    double lo = -1.0, hi = 1.0;
    while (student_t_cdf(lo, df) > p) lo *= 2.0;
    while (student_t_cdf(hi, df) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, df) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * std::max(1.0, std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

SampleSummary describe(std::span<const double> samples) {
    if (samples.empty()) throw InsufficientDataError("describe: empty sample");
    require_finite(samples, "describe");
    SampleSummary out;
    out.n = samples.size();
    out.mean = sample_mean(samples);
    if (samples.size() >= 2) {
        const double var = sample_variance(samples, out.mean);
        out.sd = std::sqrt(var);
        out.sem = *out.sd / std::sqrt(static_cast<double>(out.n));
        const double tq = student_t_quantile(0.975, static_cast<double>(out.n - 1));
        out.ci95_halfwidth = tq * *out.sem;
    }
    return out;
}

TTestResult t_test_unpaired(std::span<const double> a, std::span<const double> b,
                            VarianceModel model) {
    if (a.size() < 2 || b.size() < 2)
        throw InsufficientDataError("t_test_unpaired: each sample needs n >= 2");
    require_finite(a, "t_test_unpaired");
    require_finite(b, "t_test_unpaired");

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = sample_mean(a);
    const double mb = sample_mean(b);
    const double va = sample_variance(a, ma);
    const double vb = sample_variance(b, mb);

    TTestResult r;
    if (va == 0.0 && vb == 0.0) {
        // Degenerate: all observations tie within each sample.
        if (ma == mb) {
            r.t_statistic = 0.0;
            r.degrees_of_freedom = na + nb - 2.0;
            r.p_value = 1.0;
            r.significant = false;
            return r;
        }
        r.t_statistic = (ma > mb) ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
        r.degrees_of_freedom = na + nb - 2.0;
        r.p_value = kPValueTolerance;
        r.significant = true;
        return r;
    }

    double se2 = 0.0;
    if (model == VarianceModel::welch) {
        se2 = va / na + vb / nb;
        const double denom = (va / na) * (va / na) / (na - 1.0) +
                             (vb / nb) * (vb / nb) / (nb - 1.0);
        r.degrees_of_freedom = se2 * se2 / denom;
    } else {
        const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
        se2 = sp2 * (1.0 / na + 1.0 / nb);
        r.degrees_of_freedom = na + nb - 2.0;
    }
    r.t_statistic = (ma - mb) / std::sqrt(se2);
    const double tail = student_t_cdf(-std::abs(r.t_statistic), r.degrees_of_freedom);
    r.p_value = std::min(1.0, 2.0 * tail);
    r.significant = r.p_value < 0.05;
    return r;
}

}  // namespace swelab::stats
