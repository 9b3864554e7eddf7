#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trimlab/rng.hpp"

namespace trimlab {

// Poisson point process on [0, R) realized through cumulative i.i.d.
// standard-exponential spacings.
struct PppSample {
    std::vector<double> arrivals; // sorted, all < horizon
    double horizon = 0.0;
};

PppSample sample_ppp(double R, Rng& rng);

// int_1^R x^(-alpha) dx; the analytic centering of the reference law.
double centering_c_R(double alpha, double R);

// Centering actually applied: 0 in the absolutely convergent regime
// alpha > 1, the integral otherwise.
double effective_centering(double alpha, double R);

// sum over the trimmed process of x^(-alpha) on [0, min(R, horizon)),
// minus the effective centering. Trimming removes the K points closest
// to the origin.
double trimmed_ppp_sum(const PppSample& sample, int K, double alpha, double R);

// k-th cumulant of the centered untrimmed sum over [nlo, nhi).
double cumulant(int k, double alpha, double nlo, double nhi);

// Central moments m_1..m_n from cumulants kappa_1..kappa_n via
// m_k = sum_j C(k-1, j-1) kappa_j m_{k-j}.
std::vector<double> moments_from_cumulants(std::span<const double> kappas);

// Distributional limit of the centered trimmed sums; an R-truncated
// surrogate for the light-trimming reference law Y, scaled by the
// dynamical coupling constant c.
struct TrimmedPppLaw {
    int K = 1;
    double alpha = 0.75;
    double coupling = 1.0; // c = residue (c_geom B_d rho)^alpha
    double horizon = 1e4;  // default reference horizon R
};

// One draw, streaming (no arrival storage).
double draw_reference(const TrimmedPppLaw& law, Rng& rng);

// n deterministic i.i.d. draws; sample i uses RNG stream (seed, i), so the
// result is independent of worker scheduling.
std::vector<double> sample_reference_law(const TrimmedPppLaw& law, std::size_t n_samples,
                                         std::uint64_t seed, unsigned workers = 0);

} // namespace trimlab
