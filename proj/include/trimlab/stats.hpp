#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace trimlab {

struct EmpiricalDistribution {
    std::vector<double> sorted;

    static EmpiricalDistribution from(std::vector<double> samples);
    std::size_t count() const { return sorted.size(); }
    double quantile(double q) const;
    double median() const { return quantile(0.5); }
};

struct GofReport {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::size_t n_samples = 0;
};

inline GofReport make_report(std::string name, double statistic, double threshold,
                             std::size_t n) {
    return GofReport{std::move(name), statistic, threshold, statistic <= threshold, n};
}

// sup_x max(|F_n(x) - F(x)|, |F_n(x-) - F(x)|) over the sample points.
double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf);

double ks_two_sample(std::span<const double> sorted_a, std::span<const double> sorted_b);

// Total variation against Poisson(t): histogram[j] = #{count == j};
// truncation above `cutoff` is charged as tail mass on both sides.
double tv_distance_poisson(std::span<const std::uint64_t> histogram, double t, int cutoff);

double normal_cdf(double x, double sigma2);

// mean followed by central moments m_2..m_k (compensated accumulation).
std::vector<double> sample_moments(std::span<const double> samples, int up_to_k);

// Least-squares slope of log complementary CDF vs log x over
// [decade_start, 10 * decade_start]. Throws InsufficientTail if fewer than
// 100 samples land in the decade.
double hill_tail_slope(std::span<const double> sorted, double decade_start);

double pearson_correlation(std::span<const double> a, std::span<const double> b);

} // namespace trimlab
