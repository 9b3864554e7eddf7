#include "trimlab/ppp.hpp"

#include <cmath>
#include <stdexcept>

#include "trimlab/errors.hpp"
#include "trimlab/parallel.hpp"

namespace trimlab {

PppSample sample_ppp(double R, Rng& rng) {
    if (R <= 0.0) throw std::invalid_argument("sample_ppp: horizon must be positive");
    PppSample s;
    s.horizon = R;
    double t = 0.0;
    for (;;) {
        t += rng.exponential();
        if (t >= R) break;
        s.arrivals.push_back(t);
    }
    return s;
}

double centering_c_R(double alpha, double R) {
    if (R < 1.0) throw std::invalid_argument("centering_c_R: R >= 1 required");
    if (alpha == 1.0) return std::log(R);
    return (std::pow(R, 1.0 - alpha) - 1.0) / (1.0 - alpha);
}

double effective_centering(double alpha, double R) {
    return alpha > 1.0 ? 0.0 : centering_c_R(alpha, R);
}

double trimmed_ppp_sum(const PppSample& sample, int K, double alpha, double R) {
    if (alpha <= 0.5) throw WrongRegime("trimmed_ppp_sum requires alpha > 1/2");
    double horizon = std::min(R, sample.horizon);
    double acc = 0.0, comp = 0.0;
    std::size_t k = 0;
    for (double x : sample.arrivals) {
        if (x >= horizon) break;
        if (++k <= static_cast<std::size_t>(K)) continue; // the K closest points
        double v = std::pow(x, -alpha);
        double t = acc + v;
        comp += std::fabs(acc) >= std::fabs(v) ? (acc - t) + v : (v - t) + acc;
        acc = t;
    }
    return acc + comp - effective_centering(alpha, horizon);
}

double cumulant(int k, double alpha, double nlo, double nhi) {
    if (k < 1) throw std::invalid_argument("cumulant: k >= 1 required");
    if (k == 1) return 0.0; // centered
    double ka = double(k) * alpha;
    if (ka == 1.0) return std::log(nhi) - std::log(nlo);
    return (std::pow(nhi, 1.0 - ka) - std::pow(nlo, 1.0 - ka)) / (1.0 - ka);
}

std::vector<double> moments_from_cumulants(std::span<const double> kappas) {
    const std::size_t n = kappas.size();
    std::vector<double> m(n + 1, 0.0);
    m[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double binom = 1.0; // C(k-1, j-1), updated multiplicatively
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            acc += binom * kappas[j - 1] * m[k - j];
            binom *= double(k - j) / double(j);
        }
        m[k] = acc;
    }
    return {m.begin() + 1, m.end()};
}

double draw_reference(const TrimmedPppLaw& law, Rng& rng) {
    if (law.alpha <= 0.5) throw WrongRegime("reference law requires alpha > 1/2");
    if (law.alpha >= 1.0 && law.K < 1)
        throw WrongRegime("reference law with alpha >= 1 requires K >= 1");
    double t = 0.0, acc = 0.0, comp = 0.0;
    int k = 0;
    for (;;) {
        t += rng.exponential();
        if (t >= law.horizon) break;
        if (++k <= law.K) continue;
        double v = std::pow(t, -law.alpha);
        double s = acc + v;
        comp += std::fabs(acc) >= std::fabs(v) ? (acc - s) + v : (v - s) + acc;
        acc = s;
    }
    return law.coupling * (acc + comp - effective_centering(law.alpha, law.horizon));
}

std::vector<double> sample_reference_law(const TrimmedPppLaw& law, std::size_t n_samples,
                                         std::uint64_t seed, unsigned workers) {
    std::vector<double> out(n_samples);
    parallel_for_index(
        n_samples,
        [&](std::uint64_t i) {
            Rng rng = Rng::stream(seed, i);
            out[i] = draw_reference(law, rng);
        },
        workers);
    return out;
}

} // namespace trimlab
