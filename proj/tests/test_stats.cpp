#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "swelab/errors.hpp"
#include "swelab/stats.hpp"

using namespace swelab;
using namespace swelab::stats;

namespace {

// Independent oracle: two-tailed p via adaptive Simpson quadrature of the
// Student-t density (never touches the incomplete-beta path).
double t_density(double x, double df) {
    return std::exp(std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0)) /
           std::sqrt(df * M_PI) * std::pow(1.0 + x * x / df, -(df + 1.0) / 2.0);
}

double simpson(double a, double b, double df) {
    const int n = 4000;  // even
    const double h = (b - a) / n;
    double s = t_density(a, df) + t_density(b, df);
    for (int i = 1; i < n; ++i) s += t_density(a + i * h, df) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// The density integrates to 1/2 on [0, inf), so the two-tailed p needs only
// the finite integral over [0, |t|]; no tail truncation error.
double p_two_tailed_oracle(double t, double df) {
    return 1.0 - 2.0 * simpson(0.0, std::abs(t), df);
}

// Exact permutation test over all assignments of the pooled values into two
// groups of three, statistic |Welch t|, mid-p convention (ties counted at
// half weight). With only 20 partitions the p-value lives on a 0.05 grid, so
// mid-p is what keeps a comparison against a continuous p meaningful.
double permutation_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pool = a;
    pool.insert(pool.end(), b.begin(), b.end());
    auto welch_abs_t = [](const std::vector<double>& x, const std::vector<double>& y) {
        const auto r = t_test_unpaired(x, y);
        return std::abs(r.t_statistic);
    };
    const double t_obs = welch_abs_t(a, b);
    int greater = 0, ties = 0, total = 0;
    const int n = 6;
    for (int mask = 0; mask < (1 << n); ++mask) {
        if (__builtin_popcount(mask) != 3) continue;
        std::vector<double> ga, gb;
        for (int i = 0; i < n; ++i) (mask & (1 << i) ? ga : gb).push_back(pool[i]);
        ++total;
        const double t = welch_abs_t(ga, gb);
        if (t > t_obs + 1e-12)
            ++greater;
        else if (t >= t_obs - 1e-12)
            ++ties;
    }
    return (greater + 0.5 * ties) / total;
}

}  // namespace

TEST_CASE("describe basics") {
    const std::vector<double> equal = {4.0, 4.0, 4.0};
    auto s = describe(equal);
    CHECK(s.n == 3);
    CHECK(s.mean == doctest::Approx(4.0));
    CHECK(*s.sd == doctest::Approx(0.0));
    CHECK(*s.sem == doctest::Approx(0.0));

    const std::vector<double> v = {1.0, 2.0, 3.0};
    s = describe(v);
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(*s.sd == doctest::Approx(1.0));
    CHECK(*s.sem == doctest::Approx(0.5773502692).epsilon(1e-9));
    // ci95 = t(0.975, 2) * sem = 4.302652... * 0.57735
    CHECK(*s.ci95_halfwidth == doctest::Approx(4.302652729911 * 0.5773502692).epsilon(1e-6));
}

TEST_CASE("describe single observation leaves sd undefined") {
    const std::vector<double> one = {5.0};
    auto s = describe(one);
    CHECK(s.mean == doctest::Approx(5.0));
    CHECK(!s.sd.has_value());
    CHECK_THROWS_AS((void)s.ci95_halfwidth.value(), std::bad_optional_access);
}

TEST_CASE("describe rejects empty input") {
    CHECK_THROWS_AS(describe(std::vector<double>{}), InsufficientDataError);
}

TEST_CASE("incomplete beta endpoints and symmetry") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x : {0.1, 0.35, 0.62, 0.9}) {
        CHECK(incomplete_beta(2.5, 1.7, x) ==
              doctest::Approx(1.0 - incomplete_beta(1.7, 2.5, 1.0 - x)).epsilon(1e-12));
    }
    // I_x(1,1) = x
    CHECK(incomplete_beta(1.0, 1.0, 0.42) == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("student t cdf against quadrature oracle") {
    for (double df : {1.0, 2.0, 4.0, 7.5, 30.0}) {
        for (double t : {0.0, 0.5, 1.2247448714, 2.0, 3.5}) {
            const double two_tail = p_two_tailed_oracle(t, df);
            const double cdf = student_t_cdf(-t, df);
            CHECK(cdf == doctest::Approx(two_tail / 2.0).epsilon(1e-7));
        }
    }
}

TEST_CASE("student t quantile inverts the cdf") {
    for (double df : {1.0, 3.0, 6.0, 25.0}) {
        for (double p : {0.025, 0.1, 0.5, 0.9, 0.975}) {
            const double q = student_t_quantile(p, df);
            CHECK(student_t_cdf(q, df) == doctest::Approx(p).epsilon(1e-10));
        }
    }
    CHECK(student_t_quantile(0.975, 2.0) == doctest::Approx(4.302652729911).epsilon(1e-9));
}

TEST_CASE("t test identical samples") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const auto r = t_test_unpaired(a, a);
    CHECK(r.t_statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0));
    CHECK(!r.significant);
}

TEST_CASE("t test frozen example") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const std::vector<double> b = {2.0, 3.0, 4.0};
    const auto r = t_test_unpaired(a, b);
    CHECK(r.t_statistic == doctest::Approx(-1.2247448714).epsilon(1e-9));
    CHECK(r.degrees_of_freedom == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(0.2878641347).epsilon(1e-6));
    CHECK(r.p_value == doctest::Approx(p_two_tailed_oracle(r.t_statistic, 4.0)).epsilon(1e-6));
    CHECK(!r.significant);
}

TEST_CASE("t test degenerate zero variances") {
    const std::vector<double> a = {0.0, 0.0};
    const std::vector<double> b = {10.0, 10.0};
    const auto r = t_test_unpaired(a, b);
    CHECK(std::isinf(r.t_statistic));
    CHECK(r.t_statistic < 0);
    CHECK(r.p_value == doctest::Approx(kPValueTolerance));
    CHECK(r.significant);

    const auto same = t_test_unpaired(a, a);
    CHECK(same.t_statistic == 0.0);
    CHECK(same.p_value == 1.0);
}

TEST_CASE("t test rejects undersized samples") {
    const std::vector<double> one = {1.0};
    const std::vector<double> two = {1.0, 2.0};
    CHECK_THROWS_AS(t_test_unpaired(one, two), InsufficientDataError);
    CHECK_THROWS_AS(t_test_unpaired(two, one), InsufficientDataError);
}

TEST_CASE("t test symmetry and invariances") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(4), b(5);
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = 0.3 + u(rng);
        const auto r1 = t_test_unpaired(a, b);
        const auto r2 = t_test_unpaired(b, a);
        CHECK(r1.t_statistic == doctest::Approx(-r2.t_statistic).epsilon(1e-14));
        CHECK(r1.p_value == doctest::Approx(r2.p_value).epsilon(1e-14));

        // Location shift.
        std::vector<double> a_s = a, b_s = b;
        for (auto& v : a_s) v += 17.25;
        for (auto& v : b_s) v += 17.25;
        const auto r3 = t_test_unpaired(a_s, b_s);
        CHECK(r3.t_statistic == doctest::Approx(r1.t_statistic).epsilon(1e-10));
        CHECK(r3.p_value == doctest::Approx(r1.p_value).epsilon(1e-10));

        // Positive scaling.
        std::vector<double> a_m = a, b_m = b;
        for (auto& v : a_m) v *= 3.75;
        for (auto& v : b_m) v *= 3.75;
        const auto r4 = t_test_unpaired(a_m, b_m);
        CHECK(r4.t_statistic == doctest::Approx(r1.t_statistic).epsilon(1e-10));
        CHECK(r4.p_value == doctest::Approx(r1.p_value).epsilon(1e-10));
    }
}

TEST_CASE("pooled variance model coincides with welch for equal sizes and variances") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const std::vector<double> b = {2.0, 3.0, 4.0};
    const auto w = t_test_unpaired(a, b, VarianceModel::welch);
    const auto p = t_test_unpaired(a, b, VarianceModel::pooled);
    CHECK(w.t_statistic == doctest::Approx(p.t_statistic).epsilon(1e-14));
    CHECK(w.degrees_of_freedom == doctest::Approx(p.degrees_of_freedom).epsilon(1e-14));
}

TEST_CASE("welch p agrees with exact permutation test for n=3 pairs") {
    // With 20 partitions the permutation p cannot match a continuous p pair
    // by pair (atom spacing 0.1, plus genuine small-sample deviation of the
    // Satterthwaite approximation), so agreement is asserted on the median
    // absolute difference over 100 pinned-seed null draws.
    std::mt19937_64 rng(12);
    auto gauss = [&rng]() {
        const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    std::vector<double> diffs;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(3), b(3);
        for (auto& v : a) v = gauss();
        for (auto& v : b) v = gauss();
        const auto r = t_test_unpaired(a, b);
        diffs.push_back(std::abs(r.p_value - permutation_p(a, b)));
    }
    std::sort(diffs.begin(), diffs.end());
    const double median = 0.5 * (diffs[49] + diffs[50]);
    CHECK(median <= 0.05);
    CHECK(diffs.back() <= 0.45);  // no pathological disagreement
}
