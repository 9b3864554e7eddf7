#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "trimlab/errors.hpp"
#include "trimlab/rng.hpp"
#include "trimlab/stats.hpp"

using namespace trimlab;

TEST_CASE("empirical quantiles interpolate the order statistics") {
    auto d = EmpiricalDistribution::from({3.0, 1.0, 2.0, 4.0});
    CHECK(d.sorted == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(d.quantile(0.0) == 1.0);
    CHECK(d.quantile(1.0) == 4.0);
    CHECK(d.median() == doctest::Approx(2.5));
    CHECK(d.quantile(0.25) == doctest::Approx(1.75));
}

TEST_CASE("one-sample KS against a hand-computed example") {
    // sample {0.1, 0.5, 0.9} against U(0,1):
    // sup deviation is at x=0.5: F_n jumps to 2/3 while F=0.5 -> but the
    // left limit at 0.9 gives |2/3 - 0.9| = 0.2333...; max overall is
    // max(1/3-0.1, 0.5-1/3, 2/3-0.5, 0.9-2/3, 1-0.9) = 0.2333...
    std::vector<double> s{0.1, 0.5, 0.9};
    double ks = ks_distance(s, [](double x) { return x; });
    CHECK(ks == doctest::Approx(0.9 - 2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("one-sample KS is zero-consistent for the true CDF") {
    Rng r = Rng::from_seed(2);
    std::vector<double> s;
    for (int i = 0; i < 100000; ++i) s.push_back(r.uniform());
    std::sort(s.begin(), s.end());
    CHECK(ks_distance(s, [](double x) { return x; }) < 0.006);
}

TEST_CASE("two-sample KS on disjoint and identical samples") {
    std::vector<double> a{1.0, 2.0, 3.0}, b{4.0, 5.0, 6.0};
    CHECK(ks_two_sample(a, b) == doctest::Approx(1.0));
    CHECK(ks_two_sample(a, a) == doctest::Approx(0.0));
    // interleaved: {1,3} vs {2,4} -> sup |F_a - F_b| = 1/2
    std::vector<double> c{1.0, 3.0}, d{2.0, 4.0};
    CHECK(ks_two_sample(c, d) == doctest::Approx(0.5));
}

TEST_CASE("TV distance to Poisson: point mass at zero gives 1 - e^{-t}") {
    // empirical law = delta_0, target Poisson(1):
    // TV = 1/2 sum_j |1{j=0} - p_j| = 1/2 ((1 - e^-1) + (1 - e^-1)) = 1 - e^-1
    std::vector<std::uint64_t> hist{100};
    double tv = tv_distance_poisson(hist, 1.0, 50);
    CHECK(tv == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("TV distance vanishes for exact Poisson counts") {
    // build a histogram proportional to the Poisson(2) pmf itself
    const double t = 2.0;
    std::vector<std::uint64_t> hist;
    double pmf = std::exp(-t);
    const double scale = 1e15;
    for (int j = 0; j <= 60; ++j) {
        hist.push_back(std::uint64_t(pmf * scale));
        pmf *= t / double(j + 1);
    }
    CHECK(tv_distance_poisson(hist, t, 60) < 1e-9);
}

TEST_CASE("TV distance input guards") {
    std::vector<std::uint64_t> hist{1};
    CHECK_THROWS(tv_distance_poisson(hist, 0.0, 50));
    CHECK_THROWS(tv_distance_poisson(hist, 10.0, 50)); // cutoff < 10t
}

TEST_CASE("normal CDF fixed values") {
    CHECK(normal_cdf(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.0, 1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
    CHECK(normal_cdf(-1.0, 1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
    // variance 4: x = 2 is one sd
    CHECK(normal_cdf(2.0, 4.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
}

TEST_CASE("sample moments on a known list") {
    std::vector<double> s{1.0, 2.0, 3.0, 4.0};
    auto m = sample_moments(s, 3);
    CHECK(m[0] == doctest::Approx(2.5));
    CHECK(m[1] == doctest::Approx(1.25));  // population variance
    CHECK(m[2] == doctest::Approx(0.0));   // symmetric: zero third central moment
}

TEST_CASE("tail slope recovers the exponent of an exact Pareto grid") {
    // deterministic sample with ccdf(x) = x^{-8/3} on a fine grid
    const double a = 8.0 / 3.0;
    std::vector<double> s;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = (i + 0.5) / n;
        s.push_back(std::pow(u, -1.0 / a)); // inverse transform of the Pareto(8/3) law
    }
    std::sort(s.begin(), s.end());
    double slope = hill_tail_slope(s, 2.0);
    CHECK(slope == doctest::Approx(-a).epsilon(0.01));
}

TEST_CASE("tail slope throws when the decade is underpopulated") {
    std::vector<double> s;
    for (int i = 0; i < 50; ++i) s.push_back(1.0 + i * 0.01);
    CHECK_THROWS_AS(hill_tail_slope(s, 100.0), InsufficientTail);
}

TEST_CASE("pearson correlation on exact linear and independent data") {
    std::vector<double> a{1, 2, 3, 4, 5};
    std::vector<double> b{2, 4, 6, 8, 10};
    CHECK(pearson_correlation(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> c{5, 4, 3, 2, 1};
    CHECK(pearson_correlation(a, c) == doctest::Approx(-1.0).epsilon(1e-12));
    std::vector<double> d{1, -1, 1, -1, 1};
    CHECK(std::fabs(pearson_correlation(a, d)) < 0.35);
}
