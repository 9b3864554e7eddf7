#include "trimlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trimlab/errors.hpp"
#include "trimlab/trimming.hpp" // NeumaierSum

namespace trimlab {

EmpiricalDistribution EmpiricalDistribution::from(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    return EmpiricalDistribution{std::move(samples)};
}

double EmpiricalDistribution::quantile(double q) const {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    double pos = q * double(sorted.size() - 1);
    std::size_t i = static_cast<std::size_t>(pos);
    double frac = pos - double(i);
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

double ks_distance(std::span<const double> sorted, const std::function<double(double)>& cdf) {
    if (sorted.empty()) throw std::invalid_argument("ks_distance: empty sample");
    const double n = double(sorted.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double F = cdf(sorted[i]);
        ks = std::max(ks, std::max(double(i + 1) / n - F, F - double(i) / n));
    }
    return ks;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::size_t i = 0, j = 0;
    double ks = 0.0;
    const double na = double(a.size()), nb = double(b.size());
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        ks = std::max(ks, std::fabs(double(i) / na - double(j) / nb));
    }
    return ks;
}

double tv_distance_poisson(std::span<const std::uint64_t> histogram, double t, int cutoff) {
    if (t <= 0.0) throw std::invalid_argument("tv_distance_poisson: t > 0 required");
    if (cutoff < 10.0 * t) throw std::invalid_argument("tv_distance_poisson: cutoff >= 10t required");
    std::uint64_t total = 0;
    for (std::uint64_t c : histogram) total += c;
    if (total == 0) throw std::invalid_argument("tv_distance_poisson: empty histogram");

    double pmf = std::exp(-t); // iteratively t^j e^-t / j!
    double body = 0.0, pois_tail = 1.0, emp_tail = 0.0;
    for (int j = 0; j <= cutoff; ++j) {
        double phat = j < int(histogram.size()) ? double(histogram[j]) / double(total) : 0.0;
        body += std::fabs(phat - pmf);
        pois_tail -= pmf;
        pmf *= t / double(j + 1);
    }
    for (std::size_t j = std::size_t(cutoff) + 1; j < histogram.size(); ++j)
        emp_tail += double(histogram[j]) / double(total);
    return 0.5 * body + 0.5 * (std::max(pois_tail, 0.0) + emp_tail);
}

double normal_cdf(double x, double sigma2) {
    if (sigma2 <= 0.0) throw std::invalid_argument("normal_cdf: sigma2 > 0 required");
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * sigma2));
}

std::vector<double> sample_moments(std::span<const double> samples, int up_to_k) {
    if (samples.empty()) throw std::invalid_argument("sample_moments: empty sample");
    NeumaierSum mean_acc;
    for (double v : samples) mean_acc.add(v);
    double mean = mean_acc.value() / double(samples.size());
    std::vector<double> out;
    out.push_back(mean);
    for (int k = 2; k <= up_to_k; ++k) {
        NeumaierSum acc;
        for (double v : samples) acc.add(std::pow(v - mean, k));
        out.push_back(acc.value() / double(samples.size()));
    }
    return out;
}

double hill_tail_slope(std::span<const double> sorted, double decade_start) {
    if (decade_start <= 0.0)
        throw std::invalid_argument("hill_tail_slope: decade_start > 0 required");
    const double lo = decade_start, hi = 10.0 * decade_start;
    auto begin = std::lower_bound(sorted.begin(), sorted.end(), lo);
    auto end = std::lower_bound(sorted.begin(), sorted.end(), hi);
    if (std::distance(begin, end) < 100)
        throw InsufficientTail("fewer than 100 samples in the requested decade");

    const double n = double(sorted.size());
    // evaluate the empirical ccdf on a log-spaced grid across the decade
    const int grid = 40;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (int i = 0; i < grid; ++i) {
        double x = lo * std::pow(10.0, double(i) / double(grid - 1));
        auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        double ccdf = double(sorted.end() - it) / n;
        if (ccdf <= 0.0) break;
        double lx = std::log(x), ly = std::log(ccdf);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    if (used < 2) throw InsufficientTail("empirical ccdf vanishes inside the decade");
    double denom = double(used) * sxx - sx * sx;
    return (double(used) * sxy - sx * sy) / denom;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("pearson_correlation: size mismatch");
    NeumaierSum sa, sb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa.add(a[i]);
        sb.add(b[i]);
    }
    double ma = sa.value() / double(a.size()), mb = sb.value() / double(b.size());
    NeumaierSum cov, va, vb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        cov.add(da * db);
        va.add(da * da);
        vb.add(db * db);
    }
    return cov.value() / std::sqrt(va.value() * vb.value());
}

} // namespace trimlab
