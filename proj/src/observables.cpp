#include "trimlab/observables.hpp"

#include <algorithm>
#include <cstdint>

namespace trimlab {

namespace {

// Integral of the invariant density over [lo, hi] (no wrap-around).
double density_mass(const SystemModel& sys, double lo, double hi) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    if (hi <= lo) return 0.0;
    if (sys.id == SystemId::GaussMap) return std::log2((1.0 + hi) / (1.0 + lo));
    return hi - lo;
}

double side_extent(const SystemModel& sys) {
    return sys.torus_metric() ? 0.5 : 1.0;
}

// Boundary radius of the superlevel set {f > t} on one side of the site.
// Valid when t is large enough that the set is an interval touching the
// singularity; verified by sampling.
double superlevel_radius(const Observable& obs, const SystemModel& sys, double t, double sign) {
    double rmax = side_extent(sys);
    auto f_at = [&](double r) {
        Point p{obs.site[0] + sign * r, obs.site[1]};
        p[0] -= std::floor(p[0]);
        return obs.value_at_distance(p, r);
    };
    if (f_at(rmax) >= t) return rmax;
    double lo = 1e-15, hi = rmax;
    if (f_at(lo) <= t) return 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f_at(mid) > t ? lo : hi) = mid;
    }
    double rb = 0.5 * (lo + hi);
    // the set must actually be the interval (0, rb)
    for (int i = 1; i <= 64; ++i) {
        double r1 = rb * i / 65.0;
        double r2 = rb + (rmax - rb) * i / 65.0;
        if (f_at(r1) <= t * (1.0 - 1e-12) || f_at(r2) >= t * (1.0 + 1e-12))
            throw QuadratureFailure("superlevel set is not an interval at this threshold");
    }
    return rb;
}

} // namespace

Observable make_observable(ProfileKind profile, const SystemModel& sys, Point site,
                           double beta, double aperture, double amplitude) {
    Observable obs;
    obs.profile = profile;
    obs.site = site;
    obs.beta = beta;
    obs.alpha = beta / sys.dimension;
    obs.aperture = aperture;
    obs.amplitude = amplitude;
    obs.residue = obs.residue_profile(site);
    obs.bound_C0 = profile == ProfileKind::Oscillatory ? 1.5 * amplitude : amplitude;
    return obs;
}

Observable digit_observable() {
    Observable obs;
    obs.profile = ProfileKind::Digit;
    obs.site = {0.0, 0.0};
    obs.beta = 1.0;
    obs.alpha = 1.0;
    obs.aperture = 0.5; // one-sided singularity at 0
    obs.residue = 1.0;
    obs.bound_C0 = 1.0;
    return obs;
}

TailLaw tail_law(const Observable& obs, const SystemModel& sys) {
    double B_d = sys.dimension == 1 ? 2.0 : M_PI;
    double rho = sys.density_at(obs.site);
    return TailLaw{obs.alpha,
                   obs.aperture * B_d * rho * std::pow(obs.residue, 1.0 / obs.alpha)};
}

double tail_measure(const Observable& obs, const SystemModel& sys, double t) {
    if (t <= 0.0) return 1.0;
    switch (obs.profile) {
    case ProfileKind::Digit: {
        // {f >= t} = {x <= 1/ceil(t)} under the Gauss measure
        double n = std::max(1.0, std::ceil(t));
        return std::log2(1.0 + 1.0 / n);
    }
    case ProfileKind::Radial: {
        double r = std::pow(obs.residue / t, 1.0 / obs.beta);
        return ball_measure(sys, obs.site, r, obs.aperture);
    }
    case ProfileKind::Oscillatory: {
        double r_plus = superlevel_radius(obs, sys, t, +1.0);
        if (obs.aperture < 1.0)
            return density_mass(sys, obs.site[0], obs.site[0] + r_plus);
        double r_minus = superlevel_radius(obs, sys, t, -1.0);
        if (sys.torus_metric()) return r_plus + r_minus; // uniform density
        return density_mass(sys, obs.site[0] - r_minus, obs.site[0] + r_plus);
    }
    }
    return 0.0;
}

void validate_site(const SystemModel& sys, const Point& site) {
    if (sys.id == SystemId::IIDUniform || sys.id == SystemId::GaussMap) return;
    // Expanding toral maps: reject sites whose binary expansion is eventually
    // periodic with a short period (covers fixed and low-period points).
    auto check_coord = [](double c) {
        std::uint64_t bits = static_cast<std::uint64_t>((c - std::floor(c)) * 0x1p48);
        for (int period = 1; period <= 12; ++period) {
            bool periodic = true;
            for (int i = 0; i + period < 40; ++i) {
                if (((bits >> i) & 1) != ((bits >> (i + period)) & 1)) {
                    periodic = false;
                    break;
                }
            }
            if (periodic)
                throw ConfigError("singular site looks periodic (period " +
                                  std::to_string(period) + "); pick a generic point");
        }
    };
    check_coord(site[0]);
    if (sys.dimension == 2) check_coord(site[1]);
}

ProfileKind profile_from_name(const std::string& name) {
    if (name == "radial") return ProfileKind::Radial;
    if (name == "oscillatory") return ProfileKind::Oscillatory;
    if (name == "digit") return ProfileKind::Digit;
    throw ConfigError("unknown profile: " + name);
}

const char* profile_name(ProfileKind p) {
    switch (p) {
    case ProfileKind::Radial: return "radial";
    case ProfileKind::Oscillatory: return "oscillatory";
    case ProfileKind::Digit: return "digit";
    }
    return "?";
}

} // namespace trimlab
