#include "trimlab/limits.hpp"

#include <cmath>

#include "trimlab/errors.hpp"
#include "trimlab/ppp.hpp"

namespace trimlab {

namespace {

// int_r^L s^(-beta) ds
double power_integral(double beta, double r, double L) {
    if (L <= r) return 0.0;
    if (beta == 1.0) return std::log(L / r);
    return (std::pow(L, 1.0 - beta) - std::pow(r, 1.0 - beta)) / (1.0 - beta);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0)
        throw QuadratureFailure("adaptive quadrature did not converge");
    if (std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-11) {
    if (b <= a) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol * std::max(1.0, std::fabs(whole)), 48);
}

double side_extent_plus(const SystemModel& sys, const Observable& obs) {
    return sys.torus_metric() ? 0.5 : 1.0 - obs.site[0];
}

double side_extent_minus(const SystemModel& sys, const Observable& obs) {
    return sys.torus_metric() ? 0.5 : obs.site[0];
}

} // namespace

GeometryConstants geometry_of(const SystemModel& sys, const Observable& obs) {
    GeometryConstants g;
    g.d = sys.dimension;
    g.B_d = g.d == 1 ? 2.0 : M_PI;
    g.c_geom = obs.aperture;
    g.rho = sys.density_at(obs.site);
    g.residue = obs.residue;
    g.alpha = obs.alpha;
    return g;
}

double slln_light_constant(const GeometryConstants& g) {
    if (std::fabs(g.alpha - 1.0) > 1e-9)
        throw WrongRegime("light SLLN constant requires alpha = 1");
    return g.residue * g.ball_prefactor();
}

double slln_inter_constant(const GeometryConstants& g) {
    if (g.alpha <= 1.0)
        throw WrongRegime("intermediate SLLN constant requires alpha > 1");
    return g.residue / (g.alpha - 1.0) * std::pow(g.ball_prefactor(), g.alpha);
}

double truncated_mean_outside(const SystemModel& sys, const Observable& obs, double r) {
    if (r <= 0.0) r = 0.0;
    switch (obs.profile) {
    case ProfileKind::Digit: {
        // sum of n * mu({a_1 = n} inter (r, 1])
        if (r >= 1.0) return 0.0;
        if (r == 0.0) throw WrongRegime("digit observable is not integrable");
        auto F = [](double x) { return std::log2(1.0 + x); };
        std::uint64_t M = static_cast<std::uint64_t>(std::floor(1.0 / r));
        double total = 0.0, comp = 0.0;
        auto add = [&](double v) {
            double t = total + v;
            comp += std::fabs(total) >= std::fabs(v) ? (total - t) + v : (v - t) + total;
            total = t;
        };
        for (std::uint64_t n = 1; n < M; ++n)
            add(double(n) * (F(1.0 / double(n)) - F(1.0 / double(n + 1))));
        if (M >= 1 && 1.0 / double(M) > r) add(double(M) * (F(1.0 / double(M)) - F(r)));
        return total + comp;
    }
    case ProfileKind::Radial: {
        if (sys.id == SystemId::GaussMap) break; // quadrature below
        double plus = power_integral(obs.beta, std::max(r, 1e-300), side_extent_plus(sys, obs));
        if (obs.aperture < 1.0) return obs.residue * plus;
        double minus = power_integral(obs.beta, std::max(r, 1e-300), side_extent_minus(sys, obs));
        return obs.residue * (plus + minus);
    }
    case ProfileKind::Oscillatory:
        break;
    }
    // generic 1-d quadrature of f * rho outside the ball
    if (sys.dimension != 1)
        throw QuadratureFailure("truncated mean: only 1-d quadrature supported");
    auto side = [&](double sign, double extent) {
        if (extent <= r) return 0.0;
        return integrate(
            [&](double s) {
                Point p{obs.site[0] + sign * s, 0.0};
                p[0] -= std::floor(p[0]);
                return obs.value_at_distance(p, s) * sys.density_at(p);
            },
            r, extent);
    };
    double e = side(+1.0, side_extent_plus(sys, obs));
    if (obs.aperture == 1.0) e += side(-1.0, side_extent_minus(sys, obs));
    return e;
}

double radius_of_measure(const SystemModel& sys, const Observable& obs, double m) {
    if (m <= 0.0) return 0.0;
    switch (sys.id) {
    case SystemId::CatMapFixed128:
        return std::sqrt(m / (obs.aperture * M_PI));
    case SystemId::DoublingBitstream:
        return m / (2.0 * obs.aperture);
    case SystemId::IIDUniform:
        return obs.aperture < 1.0 ? m : 0.5 * m;
    case SystemId::GaussMap: {
        // bisection on the exact ball measure
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (ball_measure(sys, obs.site, mid, obs.aperture) < m ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    }
    return 0.0;
}

InterNormalization dlt_inter_normalization(const SystemModel& sys, const Observable& obs,
                                           std::uint64_t N, std::uint64_t k) {
    GeometryConstants g = geometry_of(sys, obs);
    if (g.alpha <= 0.5)
        throw WrongRegime("intermediate DLT requires alpha > 1/2");
    InterNormalization out;
    out.sigma2 = 2.0 * g.alpha / (2.0 * g.alpha - 1.0);
    out.r_N = radius_of_measure(sys, obs, double(k) / double(N));
    out.b_N = g.residue * std::pow(g.ball_prefactor(), g.alpha) * std::pow(double(N), g.alpha) *
              std::pow(double(k), 0.5 - g.alpha);
    out.a_N = double(N) * truncated_mean_outside(sys, obs, out.r_N);
    return out;
}

LightNormalization dlt_light_normalization(const SystemModel& sys, const Observable& obs,
                                           std::uint64_t N, double R) {
    GeometryConstants g = geometry_of(sys, obs);
    if (g.alpha <= 0.5)
        throw WrongRegime("light DLT requires alpha > 1/2");
    if (R <= 1.0)
        throw WrongRegime("light DLT reference horizon must exceed 1");
    LightNormalization out;
    out.R = R;
    out.scale = std::pow(double(N), g.alpha);
    out.coupling = g.residue * std::pow(g.ball_prefactor(), g.alpha);
    out.c_R = g.alpha > 1.0 ? 0.0 : centering_c_R(g.alpha, R);
    double r_N = radius_of_measure(sys, obs, 1.0 / double(N));
    out.cutoff_radius = std::pow(R, 1.0 / g.d) * r_N;
    out.a_N = out.coupling * out.scale * out.c_R +
              double(N) * truncated_mean_outside(sys, obs, out.cutoff_radius);
    return out;
}

double poisson_radius(const GeometryConstants& g, std::uint64_t N, double t) {
    if (t <= 0.0) return 0.0;
    return std::pow(t / (g.ball_prefactor() * double(N)), 1.0 / g.d);
}

double lambda_cut(const SystemModel& sys, const Observable& obs, std::uint64_t N,
                  std::uint64_t k) {
    if (k >= N)
        throw WrongRegime("lambda_cut requires k < N");
    GeometryConstants g = geometry_of(sys, obs);
    double target = double(k) / double(N);
    if (obs.profile == ProfileKind::Radial && sys.id != SystemId::GaussMap)
        return g.residue * std::pow(target / g.ball_prefactor(), -g.alpha);
    // bisection on the nonincreasing tail measure, in log-lambda
    double lo = 1e-9, hi = 1e18;
    if (tail_measure(obs, sys, lo) < target || tail_measure(obs, sys, hi) > target)
        throw RootFindFailure("lambda_cut: target tail mass outside bracket");
    for (int i = 0; i < 200; ++i) {
        double mid = std::sqrt(lo * hi);
        (tail_measure(obs, sys, mid) > target ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

} // namespace trimlab
