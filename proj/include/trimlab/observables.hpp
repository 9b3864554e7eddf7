#pragma once

#include <cmath>
#include <string>

#include "trimlab/dynsys.hpp"
#include "trimlab/errors.hpp"

namespace trimlab {

enum class ProfileKind { Radial, Oscillatory, Digit };

// Observable with a power singularity of order beta at `site`:
//   f(x) = g(x) * d(x, site)^(-beta)
// with residue g(site) > 0. The oscillatory profile decouples "largest
// values" from "closest points"; the digit profile is the continued-fraction
// digit map floor(1/x) on the Gauss system.
struct Observable {
    Point site{0.0, 0.0};
    double beta = 1.0;
    double alpha = 1.0; // beta / d
    ProfileKind profile = ProfileKind::Radial;
    double aperture = 1.0;  // 1 = full ball, 1/2 = one-sided singularity
    double amplitude = 1.0; // multiplies the residue profile
    double residue = 1.0;   // g(site)
    double bound_C0 = 1.0;  // f(x) <= C0 d(x,site)^(-beta)

    double residue_profile(const Point& p) const {
        switch (profile) {
        case ProfileKind::Oscillatory:
            return amplitude * (1.0 + 0.5 * std::cos(2.0 * M_PI * (p[0] - site[0])));
        default:
            return amplitude;
        }
    }

    double evaluate(const SystemModel& sys, const Point& p) const {
        if (profile == ProfileKind::Digit) {
            if (p[0] == 0.0) throw DegenerateHit("digit observable at x = 0");
            return std::floor(1.0 / p[0]);
        }
        double r = sys.metric(p, site);
        if (r == 0.0) throw DegenerateHit("observable evaluated at singular site");
        return value_at_distance(p, r);
    }

    // f given a precomputed distance; hot-loop entry point.
    double value_at_distance(const Point& p, double r) const {
        double g = profile == ProfileKind::Radial
                       ? amplitude
                       : amplitude * (1.0 + 0.5 * std::cos(2.0 * M_PI * (p[0] - site[0])));
        if (beta == 1.0) return g / r;
        if (beta == 2.0) return g / (r * r);
        return g * std::pow(r, -beta);
    }
};

struct TailLaw {
    double alpha;
    double tail_constant; // mu(f > t) ~ tail_constant * t^(-1/alpha)
};

Observable make_observable(ProfileKind profile, const SystemModel& sys, Point site,
                           double beta, double aperture, double amplitude = 1.0);

Observable digit_observable();

TailLaw tail_law(const Observable& obs, const SystemModel& sys);

// mu({f > t}); closed form for radial profiles and the digit observable,
// bisection for the superlevel boundary otherwise.
double tail_measure(const Observable& obs, const SystemModel& sys, double t);

// Rejects singular sites that are visibly periodic for the expanding maps
// (a fixed point violates slow recurrence). Throws ConfigError.
void validate_site(const SystemModel& sys, const Point& site);

ProfileKind profile_from_name(const std::string& name);
const char* profile_name(ProfileKind p);

} // namespace trimlab
