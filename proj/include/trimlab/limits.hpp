#pragma once

#include <cstdint>

#include "trimlab/dynsys.hpp"
#include "trimlab/observables.hpp"

namespace trimlab {

struct GeometryConstants {
    double B_d;     // volume of the d-dimensional unit ball (B_1 = 2, B_2 = pi)
    double c_geom;  // aperture
    double rho;     // invariant density at the singular site
    double residue; // Res(f) at the site
    int d;
    double alpha;

    // effective ball-measure prefactor mu(B_r) ~ ball_prefactor * r^d
    double ball_prefactor() const { return c_geom * B_d * rho; }
};

GeometryConstants geometry_of(const SystemModel& sys, const Observable& obs);

// alpha = 1 strong law: S_N^K / (N log N) -> residue * c_geom * B_d * rho.
double slln_light_constant(const GeometryConstants& g);

// alpha > 1 strong law: S_N^k / (N^alpha k^(1-alpha)) ->
//   residue / (alpha - 1) * (c_geom * B_d * rho)^alpha.
double slln_inter_constant(const GeometryConstants& g);

// E[f * 1{d(.,site) > r}]; closed form for radial profiles on the
// 1-d models, digit sum for the Gauss digits, quadrature otherwise.
double truncated_mean_outside(const SystemModel& sys, const Observable& obs, double r);

// Radius with mu(B_r(site)) = m; exact per model.
double radius_of_measure(const SystemModel& sys, const Observable& obs, double m);

struct InterNormalization {
    double a_N;
    double b_N;
    double sigma2; // 2 alpha / (2 alpha - 1)
    double r_N;    // trim radius, mu(B_{r_N}) = k/N
};

InterNormalization dlt_inter_normalization(const SystemModel& sys, const Observable& obs,
                                           std::uint64_t N, std::uint64_t k);

struct LightNormalization {
    double a_N;      // c N^alpha c_R + N E[f 1{d > R^{1/d} r_N}]
    double scale;    // N^alpha
    double coupling; // c = residue (c_geom B_d rho)^alpha
    double c_R;      // analytic centering of the reference law (0 for alpha > 1)
    double R;
    double cutoff_radius; // R^{1/d} r_N
};

LightNormalization dlt_light_normalization(const SystemModel& sys, const Observable& obs,
                                           std::uint64_t N, double R);

// r_N^t = (t / (c_geom B_d rho N))^{1/d}
double poisson_radius(const GeometryConstants& g, std::uint64_t N, double t);

// Superlevel threshold lambda with mu(f > lambda) = k/N.
double lambda_cut(const SystemModel& sys, const Observable& obs, std::uint64_t N,
                  std::uint64_t k);

} // namespace trimlab
