#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "trimlab/errors.hpp"
#include "trimlab/rng.hpp"

namespace trimlab {

using Point = std::array<double, 2>; // coordinate 1 unused when d = 1

enum class SystemId { IIDUniform, DoublingBitstream, CatMapFixed128, GaussMap };

inline constexpr double kLog2 = 0.6931471805599453094;

struct SystemModel {
    SystemId id;
    int dimension;

    static SystemModel make(SystemId id) {
        return SystemModel{id, id == SystemId::CatMapFixed128 ? 2 : 1};
    }

    // Value of the invariant density d mu / d vol.
    double density_at(const Point& p) const {
        if (id == SystemId::GaussMap)
            return 1.0 / ((1.0 + p[0]) * kLog2);
        return 1.0;
    }

    // Whether distances wrap around the circle. The one-sided interval
    // models (i.i.d. baseline, Gauss map) use plain |a-b|.
    bool torus_metric() const {
        return id == SystemId::DoublingBitstream || id == SystemId::CatMapFixed128;
    }

    double metric(const Point& a, const Point& b) const;
};

inline double wrap_diff(double a, double b) {
    double t = std::fabs(a - b);
    return t > 0.5 ? 1.0 - t : t;
}

inline double SystemModel::metric(const Point& a, const Point& b) const {
    if (dimension == 2) {
        double dx = wrap_diff(a[0], b[0]);
        double dy = wrap_diff(a[1], b[1]);
        return std::sqrt(dx * dx + dy * dy);
    }
    if (torus_metric()) return wrap_diff(a[0], b[0]);
    return std::fabs(a[0] - b[0]);
}

inline double torus_distance(const SystemModel& sys, const Point& a, const Point& b) {
    return sys.metric(a, b);
}

// mu(B_r(center)), exact per model. `aperture` is 1 for a full ball and
// 1/2 when only one side of the singularity lies in the domain.
inline double ball_measure(const SystemModel& sys, const Point& center, double r,
                           double aperture = 1.0) {
    if (r <= 0.0) return 0.0;
    switch (sys.id) {
    case SystemId::CatMapFixed128: {
        double m = aperture * M_PI * r * r;
        return m > 1.0 ? 1.0 : m;
    }
    case SystemId::DoublingBitstream: {
        if (r >= 0.5) return 1.0;
        return aperture * 2.0 * r;
    }
    case SystemId::IIDUniform: {
        double lo = std::max(0.0, aperture < 1.0 ? center[0] : center[0] - r);
        double hi = std::min(1.0, center[0] + r);
        return std::max(0.0, hi - lo);
    }
    case SystemId::GaussMap: {
        double lo = std::max(0.0, aperture < 1.0 ? center[0] : center[0] - r);
        double hi = std::min(1.0, center[0] + r);
        if (hi <= lo) return 0.0;
        return std::log2(1.0 + hi) - std::log2(1.0 + lo);
    }
    }
    return 0.0;
}

// Exact system-specific state. The doubling map is realized as a shift over
// a lazily generated fair-bit stream (a 64-bit window of the expansion), so
// the orbit never collapses the way naive double-precision iteration does.
// The cat map runs on 128-bit fixed point, making (2x+y, x+y) mod 1 exact.
struct OrbitState {
    Rng rng{0};
    std::uint64_t step_index = 0;

    // DoublingBitstream
    std::uint64_t window = 0;
    std::uint64_t bit_buffer = 0;
    int bits_left = 0;

    // CatMapFixed128
    unsigned __int128 X = 0, Y = 0;

    // GaussMap / IIDUniform
    double x = 0.0;

    std::uint64_t next_bit() {
        if (bits_left == 0) {
            bit_buffer = rng.next();
            bits_left = 64;
        }
        std::uint64_t b = bit_buffer >> 63;
        bit_buffer <<= 1;
        --bits_left;
        return b;
    }
};

inline double fixed128_to_unit(unsigned __int128 v) {
    // top 64 bits carry all double-precision information
    return static_cast<double>(static_cast<std::uint64_t>(v >> 64)) * 0x1.0p-64;
}

inline Point current_point(const SystemModel& sys, const OrbitState& st) {
    switch (sys.id) {
    case SystemId::DoublingBitstream:
        return {static_cast<double>(st.window) * 0x1.0p-64, 0.0};
    case SystemId::CatMapFixed128:
        return {fixed128_to_unit(st.X), fixed128_to_unit(st.Y)};
    default:
        return {st.x, 0.0};
    }
}

// Sample the initial state from mu. The Gauss measure uses the inverse CDF
// x = 2^u - 1; the other models are uniform.
inline OrbitState sample_initial(const SystemModel& sys, Rng rng) {
    OrbitState st;
    switch (sys.id) {
    case SystemId::DoublingBitstream:
        st.window = rng.next();
        break;
    case SystemId::CatMapFixed128:
        st.X = (static_cast<unsigned __int128>(rng.next()) << 64) | rng.next();
        st.Y = (static_cast<unsigned __int128>(rng.next()) << 64) | rng.next();
        break;
    case SystemId::GaussMap:
        st.x = std::exp2(rng.uniform()) - 1.0;
        break;
    case SystemId::IIDUniform:
        st.x = rng.uniform();
        break;
    }
    st.rng = rng;
    return st;
}

inline void step(const SystemModel& sys, OrbitState& st) {
    switch (sys.id) {
    case SystemId::DoublingBitstream:
        st.window = (st.window << 1) | st.next_bit();
        break;
    case SystemId::CatMapFixed128: {
        unsigned __int128 nx = 2 * st.X + st.Y; // mod 2^128 is implicit
        unsigned __int128 ny = st.X + st.Y;
        st.X = nx;
        st.Y = ny;
        break;
    }
    case SystemId::GaussMap: {
        if (st.x == 0.0) throw DegenerateHit("Gauss map hit x = 0");
        double inv = 1.0 / st.x;
        st.x = inv - std::floor(inv);
        break;
    }
    case SystemId::IIDUniform:
        st.x = st.rng.uniform();
        break;
    }
    ++st.step_index;
}

// Inverse cat map, matrix (1,-1;-1,2); used by the exactness checks.
inline void step_back_catmap(OrbitState& st) {
    unsigned __int128 px = st.X - st.Y;
    unsigned __int128 py = 2 * st.Y - st.X;
    st.X = px;
    st.Y = py;
    --st.step_index;
}

// Visit the current point then the next n_steps - 1 iterates. The switch
// sits outside the loop so each system gets a tight inner loop.
template <class Visit>
void iterate_orbit(const SystemModel& sys, OrbitState& st, std::uint64_t n_steps, Visit&& visit) {
    switch (sys.id) {
    case SystemId::DoublingBitstream:
        for (std::uint64_t n = 0; n < n_steps; ++n) {
            visit(Point{static_cast<double>(st.window) * 0x1.0p-64, 0.0});
            st.window = (st.window << 1) | st.next_bit();
        }
        break;
    case SystemId::CatMapFixed128:
        for (std::uint64_t n = 0; n < n_steps; ++n) {
            visit(Point{fixed128_to_unit(st.X), fixed128_to_unit(st.Y)});
            unsigned __int128 nx = 2 * st.X + st.Y;
            unsigned __int128 ny = st.X + st.Y;
            st.X = nx;
            st.Y = ny;
        }
        break;
    case SystemId::GaussMap:
        for (std::uint64_t n = 0; n < n_steps; ++n) {
            visit(Point{st.x, 0.0});
            if (st.x == 0.0) throw DegenerateHit("Gauss map hit x = 0");
            double inv = 1.0 / st.x;
            st.x = inv - std::floor(inv);
        }
        break;
    case SystemId::IIDUniform:
        for (std::uint64_t n = 0; n < n_steps; ++n) {
            visit(Point{st.x, 0.0});
            st.x = st.rng.uniform();
        }
        break;
    }
    st.step_index += n_steps;
}

inline SystemId system_from_name(const std::string& name) {
    if (name == "iid") return SystemId::IIDUniform;
    if (name == "doubling") return SystemId::DoublingBitstream;
    if (name == "catmap") return SystemId::CatMapFixed128;
    if (name == "gauss") return SystemId::GaussMap;
    throw ConfigError("unknown system: " + name);
}

inline const char* system_name(SystemId id) {
    switch (id) {
    case SystemId::IIDUniform: return "iid";
    case SystemId::DoublingBitstream: return "doubling";
    case SystemId::CatMapFixed128: return "catmap";
    case SystemId::GaussMap: return "gauss";
    }
    return "?";
}

} // namespace trimlab
