#pragma once

#include <optional>
#include <span>
#include <vector>

namespace swelab::stats {

/// Descriptive summary of one sample of speeds.
///
/// sd/sem/ci95_halfwidth are empty for n == 1 (undefined with a single
/// observation); accessing the empty optional throws std::bad_optional_access.
struct SampleSummary {
    std::size_t n = 0;
    double mean = 0.0;
    std::optional<double> sd;               // unbiased (n-1) standard deviation
    std::optional<double> sem;              // sd / sqrt(n)
    std::optional<double> ci95_halfwidth;   // t-quantile * sem, n-1 df
};

enum class VarianceModel {
    welch,   // unequal variances, Welch-Satterthwaite df
    pooled   // classic Student pooled variance, n_a + n_b - 2 df
};

struct TTestResult {
    double t_statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
    bool significant = false;   // p_value < 0.05
};

/// p-values below this are clamped (degenerate zero-variance separations).
inline constexpr double kPValueTolerance = 1e-6;

SampleSummary describe(std::span<const double> samples);

/// Unpaired two-tailed t-test of mean difference a vs b.
///
/// Degenerate zero-variance cases: equal means give t = 0, p = 1; unequal
/// means give t = +/-infinity and p clamped to kPValueTolerance.
TTestResult t_test_unpaired(std::span<const double> a, std::span<const double> b,
                            VarianceModel model = VarianceModel::welch);

/// Regularized incomplete beta function I_x(a, b), absolute accuracy ~1e-14.
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with df degrees of freedom.
double student_t_cdf(double t, double df);

/// Quantile (inverse CDF) of Student's t distribution.
double student_t_quantile(double p, double df);

}  // namespace swelab::stats
