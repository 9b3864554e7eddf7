#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trimlab/dynsys.hpp"
#include "trimlab/errors.hpp"
#include "trimlab/observables.hpp"

namespace trimlab {

// Neumaier compensated accumulation; N up to 1e9 with heavy-tailed summands.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

struct TrimSpec {
    enum class Mode { Light, PowerLaw, PolyLog };
    Mode mode = Mode::Light;
    std::uint64_t K = 1;     // Light
    double exponent = 0.3;   // gamma for PowerLaw, p for PolyLog

    std::uint64_t k_of(std::uint64_t N) const {
        switch (mode) {
        case Mode::Light:
            return K;
        case Mode::PowerLaw:
            return static_cast<std::uint64_t>(std::ceil(std::pow(double(N), exponent)));
        case Mode::PolyLog:
            return static_cast<std::uint64_t>(std::ceil(std::pow(std::log(double(N)), exponent)));
        }
        return K;
    }

    // "light:3", "inter:pow:0.3", "inter:polylog:2"
    static TrimSpec parse(const std::string& s);
    std::string to_string() const;

    bool operator==(const TrimSpec&) const = default;
};

struct TrimCheckpoint {
    std::uint64_t N = 0;
    std::uint64_t k_used = 0;
    double S = 0.0;        // untrimmed Birkhoff sum
    double S_trim = 0.0;   // S minus the k largest values
    double S_hat = 0.0;    // S minus f at the k closest points
    double max_value_removed = 0.0;
    double kth_distance = 0.0;
};

struct TrimmedSeries {
    std::vector<TrimCheckpoint> checkpoints;
};

namespace detail {

struct StoredPoint {
    double value;
    double distance;
    std::uint64_t index;
};

// Ties keep the earliest orbit index.
inline bool more_removable_by_value(const StoredPoint& a, const StoredPoint& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.index < b.index;
}

inline bool closer(const StoredPoint& a, const StoredPoint& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
}

// Bounded "best k" set as a binary heap whose root is the weakest kept entry.
template <class Better>
class TopK {
public:
    TopK(std::size_t capacity, Better better) : cap_(capacity), better_(better) {
        heap_.reserve(capacity);
    }

    void offer(const StoredPoint& p) {
        if (cap_ == 0) return;
        if (heap_.size() < cap_) {
            heap_.push_back(p);
            std::push_heap(heap_.begin(), heap_.end(), better_);
            return;
        }
        if (better_(p, heap_.front())) {
            std::pop_heap(heap_.begin(), heap_.end(), better_);
            heap_.back() = p;
            std::push_heap(heap_.begin(), heap_.end(), better_);
        }
    }

    // Strongest-first copy of the kept entries.
    std::vector<StoredPoint> sorted() const {
        std::vector<StoredPoint> v = heap_;
        std::sort(v.begin(), v.end(), better_);
        return v;
    }

private:
    std::size_t cap_;
    Better better_;
    std::vector<StoredPoint> heap_;
};

} // namespace detail

// Single-pass multi-checkpoint accumulator. Maintains a compensated running
// sum of f, the k_max largest f-values, and the k_max smallest distances to
// the singular site, where k_max = k(last checkpoint). Since k(N) is
// nondecreasing, the stored top-k_max of every prefix contains its
// top-k(N_j), so one heap serves all checkpoints. O(N log k) total.
class TrimStreamer {
public:
    TrimStreamer(const SystemModel& sys, const Observable& obs, const TrimSpec& trim,
                 std::span<const std::uint64_t> checkpoints)
        : sys_(sys), obs_(obs), trim_(trim),
          checkpoints_(checkpoints.begin(), checkpoints.end()),
          top_values_(capacity(trim, checkpoints), detail::more_removable_by_value),
          top_close_(capacity(trim, checkpoints), detail::closer),
          digit_(obs.profile == ProfileKind::Digit) {
        for (std::size_t i = 1; i < checkpoints_.size(); ++i)
            if (checkpoints_[i] <= checkpoints_[i - 1])
                throw InsufficientPoints("checkpoints must be strictly increasing");
        for (std::uint64_t N : checkpoints_)
            if (trim.k_of(N) >= N)
                throw InsufficientPoints("k(N) >= N at checkpoint N=" + std::to_string(N));
        series_.checkpoints.reserve(checkpoints_.size());
    }

    std::uint64_t total_steps() const { return checkpoints_.empty() ? 0 : checkpoints_.back(); }

    void accept(const Point& p) {
        double r, f;
        if (digit_) {
            if (p[0] == 0.0) throw DegenerateHit("digit observable at x = 0");
            r = p[0];
            f = std::floor(1.0 / p[0]);
        } else {
            r = sys_.metric(p, obs_.site);
            if (r == 0.0) throw DegenerateHit("orbit hit the singular site");
            f = obs_.value_at_distance(p, r);
        }
        total_.add(f);
        detail::StoredPoint sp{f, r, n_};
        top_values_.offer(sp);
        top_close_.offer(sp);
        ++n_;
        if (next_cp_ < checkpoints_.size() && n_ == checkpoints_[next_cp_]) emit();
    }

    const TrimmedSeries& series() const { return series_; }
    TrimmedSeries take_series() { return std::move(series_); }

private:
    static std::size_t capacity(const TrimSpec& trim, std::span<const std::uint64_t> cps) {
        return cps.empty() ? 0 : static_cast<std::size_t>(trim.k_of(cps.back()));
    }

    void emit() {
        const std::uint64_t N = n_;
        const std::uint64_t k = trim_.k_of(N);
        auto by_value = top_values_.sorted();
        auto by_dist = top_close_.sorted();
        NeumaierSum removed_v, removed_d;
        for (std::uint64_t i = 0; i < k; ++i) {
            removed_v.add(by_value[i].value);
            removed_d.add(by_dist[i].value);
        }
        TrimCheckpoint cp;
        cp.N = N;
        cp.k_used = k;
        cp.S = total_.value();
        cp.S_trim = cp.S - removed_v.value();
        cp.S_hat = cp.S - removed_d.value();
        cp.max_value_removed = k > 0 ? by_value[0].value : 0.0;
        cp.kth_distance = k > 0 ? by_dist[k - 1].distance : 0.0;
        series_.checkpoints.push_back(cp);
        ++next_cp_;
    }

    const SystemModel& sys_;
    const Observable& obs_;
    TrimSpec trim_;
    std::vector<std::uint64_t> checkpoints_;
    detail::TopK<bool (*)(const detail::StoredPoint&, const detail::StoredPoint&)> top_values_;
    detail::TopK<bool (*)(const detail::StoredPoint&, const detail::StoredPoint&)> top_close_;
    NeumaierSum total_;
    TrimmedSeries series_;
    std::uint64_t n_ = 0;
    std::size_t next_cp_ = 0;
    bool digit_;
};

inline TrimmedSeries run_trimmed_series(const SystemModel& sys, const Observable& obs,
                                        const TrimSpec& trim, OrbitState& state,
                                        std::span<const std::uint64_t> checkpoints) {
    TrimStreamer streamer(sys, obs, trim, checkpoints);
    iterate_orbit(sys, state, streamer.total_steps(),
                  [&](const Point& p) { streamer.accept(p); });
    return streamer.take_series();
}

// Hit counts of B_r(site) for each radius over one orbit pass, plus the K
// smallest distances seen (for the trimmed-count identity max(S-K, 0)).
struct BallHitCounts {
    std::vector<std::uint64_t> counts;      // aligned with radii
    std::vector<double> smallest_distances; // ascending, up to K entries
};

inline BallHitCounts count_ball_hits(const SystemModel& sys, const Point& site,
                                     OrbitState& state, std::uint64_t N,
                                     std::span<const double> radii, std::size_t K = 0) {
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] < radii[i - 1])
            throw InsufficientPoints("radii must be nondecreasing");
    BallHitCounts out;
    out.counts.assign(radii.size(), 0);
    std::vector<double> closest; // max-heap of the K smallest distances
    closest.reserve(K + 1);
    const double r_big = radii.empty() ? 0.0 : radii.back();
    iterate_orbit(sys, state, N, [&](const Point& p) {
        double r = sys.metric(p, site);
        if (r < r_big) {
            for (std::size_t j = radii.size(); j-- > 0 && r < radii[j];) ++out.counts[j];
        }
        if (K > 0) {
            if (closest.size() < K) {
                closest.push_back(r);
                std::push_heap(closest.begin(), closest.end());
            } else if (r < closest.front()) {
                std::pop_heap(closest.begin(), closest.end());
                closest.back() = r;
                std::push_heap(closest.begin(), closest.end());
            }
        }
    });
    std::sort(closest.begin(), closest.end());
    out.smallest_distances = std::move(closest);
    return out;
}

} // namespace trimlab
