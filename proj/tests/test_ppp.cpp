#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "trimlab/errors.hpp"
#include "trimlab/ppp.hpp"
#include "trimlab/stats.hpp"

using namespace trimlab;

TEST_CASE("arrival count on [0,1) is Poisson(1): mean, P(0), independence") {
    Rng r = Rng::from_seed(1);
    const int n = 100000;
    double count_sum = 0.0;
    int empty = 0;
    std::vector<double> c01, c12;
    for (int i = 0; i < n; ++i) {
        PppSample s = sample_ppp(2.0, r);
        int a = 0, b = 0;
        for (double x : s.arrivals) (x < 1.0 ? a : b)++;
        count_sum += a;
        if (a == 0) ++empty;
        c01.push_back(a);
        c12.push_back(b);
    }
    CHECK(std::fabs(count_sum / n - 1.0) < 0.01);
    CHECK(std::fabs(double(empty) / n - std::exp(-1.0)) < 0.005);
    CHECK(std::fabs(pearson_correlation(c01, c12)) < 0.01);
}

TEST_CASE("arrival spacings are sorted and below the horizon") {
    Rng r = Rng::from_seed(4);
    for (int i = 0; i < 1000; ++i) {
        PppSample s = sample_ppp(10.0, r);
        for (std::size_t j = 0; j < s.arrivals.size(); ++j) {
            CHECK(s.arrivals[j] > 0.0);
            CHECK(s.arrivals[j] < 10.0);
            if (j) CHECK(s.arrivals[j] > s.arrivals[j - 1]);
        }
    }
}

TEST_CASE("analytic centering values") {
    CHECK(centering_c_R(1.0, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(centering_c_R(0.5, 4.0) == doctest::Approx(2.0).epsilon(1e-12));
    // alpha = 2: integral converges to 1 as R grows
    CHECK(centering_c_R(2.0, 1e12) == doctest::Approx(1.0).epsilon(1e-9));
    // the convergent regime is not centered
    CHECK(effective_centering(2.0, 1e4) == 0.0);
    CHECK(effective_centering(0.75, 1e4) ==
          doctest::Approx(centering_c_R(0.75, 1e4)).epsilon(1e-15));
}

TEST_CASE("trimmed sum on a hand-built sample") {
    PppSample s;
    s.arrivals = {0.5, 2.0};
    s.horizon = 4.0;
    // K=1, alpha=1: drop the closest point, keep 1/2.0, subtract log 4
    CHECK(trimmed_ppp_sum(s, 1, 1.0, 4.0) ==
          doctest::Approx(0.5 - std::log(4.0)).epsilon(1e-12));
    // K beyond the arrival count leaves only the centering
    CHECK(trimmed_ppp_sum(s, 5, 1.0, 4.0) == doctest::Approx(-std::log(4.0)).epsilon(1e-12));
    // K=0, alpha=2: untrimmed and uncentered
    CHECK(trimmed_ppp_sum(s, 0, 2.0, 4.0) ==
          doctest::Approx(1.0 / 0.25 + 1.0 / 4.0).epsilon(1e-12));
    CHECK_THROWS_AS(trimmed_ppp_sum(s, 0, 0.4, 4.0), WrongRegime);
}

TEST_CASE("cumulant formula fixed values") {
    CHECK(cumulant(1, 0.75, 1.0, 10.0) == 0.0);
    CHECK(cumulant(2, 0.75, 1.0, 10.0) ==
          doctest::Approx(2.0 * (1.0 - std::pow(10.0, -0.5))).epsilon(1e-14));
    CHECK(cumulant(2, 0.75, 1.0, 10.0) == doctest::Approx(1.3675444679663241).epsilon(1e-12));
    // k * alpha = 1 log case on [1, e)
    CHECK(cumulant(2, 0.5, 1.0, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("moment recursion fixed values") {
    {
        std::vector<double> k{0.0, 2.5, 0.0, 0.0};
        auto m = moments_from_cumulants(k);
        CHECK(m[1] == doctest::Approx(2.5));
        CHECK(m[2] == doctest::Approx(0.0));
        CHECK(m[3] == doctest::Approx(3.0 * 2.5 * 2.5)); // Gaussian m4 = 3 sigma^4
    }
    {
        std::vector<double> k{0.0, 1.0, 1.0};
        auto m = moments_from_cumulants(k);
        CHECK(m[0] == doctest::Approx(0.0));
        CHECK(m[1] == doctest::Approx(1.0));
        CHECK(m[2] == doctest::Approx(1.0)); // m3 = kappa3 when kappa1 = 0
    }
}

TEST_CASE("Monte Carlo variance of the untrimmed sum on [1,10) matches kappa_2") {
    const double alpha = 0.75;
    const int n = 200000;
    std::vector<double> sums;
    sums.reserve(n);
    Rng r = Rng::from_seed(7);
    for (int i = 0; i < n; ++i) {
        PppSample s = sample_ppp(10.0, r);
        double acc = 0.0;
        for (double x : s.arrivals)
            if (x >= 1.0) acc += std::pow(x, -alpha);
        sums.push_back(acc - centering_c_R(alpha, 10.0));
    }
    auto m = sample_moments(sums, 4);
    double k2 = cumulant(2, alpha, 1.0, 10.0);
    double k3 = cumulant(3, alpha, 1.0, 10.0);
    double k4 = cumulant(4, alpha, 1.0, 10.0);
    // 3-standard-error band for the variance estimate
    double se = std::sqrt((m[3] - m[1] * m[1]) / double(n));
    CHECK(std::fabs(m[1] - k2) < 3.0 * se);
    auto predicted = moments_from_cumulants(std::vector<double>{0.0, k2, k3, k4});
    CHECK(std::fabs(m[2] - predicted[2]) / std::fabs(predicted[2]) < 0.05);
    CHECK(std::fabs(m[3] - predicted[3]) / std::fabs(predicted[3]) < 0.05);
    CHECK(std::fabs(m[0]) < 5.0 * std::sqrt(k2 / double(n)));
}

TEST_CASE("trimming identity holds pathwise") {
    Rng r = Rng::from_seed(9);
    for (int i = 0; i < 2000; ++i) {
        PppSample s = sample_ppp(5.0, r);
        for (int K : {0, 1, 2, 3}) {
            for (double t : {0.5, 1.0, 2.0, 4.9}) {
                std::size_t full = 0;
                for (double x : s.arrivals)
                    if (x < t) ++full;
                std::size_t trimmed = 0;
                for (std::size_t j = std::size_t(K); j < s.arrivals.size(); ++j)
                    if (s.arrivals[j] < t) ++trimmed;
                std::size_t expected = full > std::size_t(K) ? full - std::size_t(K) : 0;
                CHECK(trimmed == expected);
            }
        }
    }
}

TEST_CASE("reference law guards and determinism") {
    TrimmedPppLaw bad{0, 1.5, 1.0, 1e3};
    Rng r = Rng::from_seed(10);
    CHECK_THROWS_AS(draw_reference(bad, r), WrongRegime);
    TrimmedPppLaw shallow{1, 0.4, 1.0, 1e3};
    CHECK_THROWS_AS(draw_reference(shallow, r), WrongRegime);

    TrimmedPppLaw law{1, 0.75, 1.0, 1e3};
    auto a = sample_reference_law(law, 5000, 77, 1);
    auto b = sample_reference_law(law, 5000, 77, 8);
    CHECK(a == b); // worker count never changes results
    for (double v : a) CHECK(std::isfinite(v));
}

TEST_CASE("reference-law variance matches the tail cumulant within Monte Carlo error") {
    // the [1,R) part of the sum carries cumulant(2, alpha, 1, R); the trimmed
    // [0,1) head adds variance, so the total must exceed the tail prediction
    // while staying the same order of magnitude.
    TrimmedPppLaw law{1, 0.75, 1.0, 1e3};
    auto s = sample_reference_law(law, 100000, 13);
    auto m = sample_moments(s, 2);
    double tail_var = cumulant(2, 0.75, 1.0, 1e3);
    CHECK(m[1] > tail_var);
    CHECK(m[1] < 10.0 * tail_var);
}

TEST_CASE("alpha = 2, K = 1 draws are finite with a heavy right tail") {
    TrimmedPppLaw law{1, 2.0, 1.0, 1e3};
    auto s = sample_reference_law(law, 20000, 21);
    double maxv = 0.0;
    for (double v : s) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0); // uncentered convergent sum
        maxv = std::max(maxv, v);
    }
    auto d = EmpiricalDistribution::from(std::move(s));
    CHECK(maxv > 20.0 * d.median()); // heavy tail: extremes dwarf the bulk
}
