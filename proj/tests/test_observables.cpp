#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "trimlab/dynsys.hpp"
#include "trimlab/errors.hpp"
#include "trimlab/observables.hpp"

using namespace trimlab;

namespace {

SystemModel model(SystemId id) { return SystemModel::make(id); }
constexpr double kGolden = 0.6180339887498949;

} // namespace

TEST_CASE("radial evaluation: hand values") {
    SystemModel iid = model(SystemId::IIDUniform);
    Observable one_sided = make_observable(ProfileKind::Radial, iid, {0.0, 0.0}, 1.0, 0.5);
    CHECK(one_sided.evaluate(iid, {0.5, 0.0}) == doctest::Approx(2.0).epsilon(1e-14));

    SystemModel dbl = model(SystemId::DoublingBitstream);
    Observable torus = make_observable(ProfileKind::Radial, dbl, {0.5, 0.0}, 2.0, 1.0);
    CHECK(torus.evaluate(dbl, {0.6, 0.0}) == doctest::Approx(100.0).epsilon(1e-10));
}

TEST_CASE("oscillatory evaluation matches the cosine by hand") {
    SystemModel iid = model(SystemId::IIDUniform);
    Observable obs = make_observable(ProfileKind::Oscillatory, iid, {0.25, 0.0}, 1.0, 1.0);
    double g = 1.0 + 0.5 * std::cos(2.0 * M_PI * 0.1);
    CHECK(obs.evaluate(iid, {0.35, 0.0}) == doctest::Approx(g / 0.1).epsilon(1e-13));
    CHECK(obs.residue == doctest::Approx(1.5).epsilon(1e-14)); // g at the site
}

TEST_CASE("digit observable hand values") {
    Observable d = digit_observable();
    SystemModel g = model(SystemId::GaussMap);
    CHECK(d.evaluate(g, {0.4, 0.0}) == 2.0);
    CHECK(d.evaluate(g, {0.99, 0.0}) == 1.0);
    CHECK(d.evaluate(g, {0.01, 0.0}) == 100.0);
    CHECK_THROWS_AS(d.evaluate(g, {0.0, 0.0}), DegenerateHit);
    CHECK(d.alpha == 1.0);
    CHECK(d.residue == 1.0);
}

TEST_CASE("evaluate throws at the singular site") {
    SystemModel iid = model(SystemId::IIDUniform);
    Observable obs = make_observable(ProfileKind::Radial, iid, {0.25, 0.0}, 1.0, 1.0);
    CHECK_THROWS_AS(obs.evaluate(iid, {0.25, 0.0}), DegenerateHit);
}

TEST_CASE("tail measure closed forms") {
    SystemModel iid = model(SystemId::IIDUniform);
    Observable sq = make_observable(ProfileKind::Radial, iid, {0.0, 0.0}, 2.0, 0.5);
    CHECK(tail_measure(sq, iid, 4.0) == doctest::Approx(0.5).epsilon(1e-12));

    SystemModel dbl = model(SystemId::DoublingBitstream);
    Observable two = make_observable(ProfileKind::Radial, dbl, {kGolden, 0.0}, 1.0, 1.0);
    CHECK(tail_measure(two, dbl, 10.0) == doctest::Approx(0.2).epsilon(1e-12));

    SystemModel gauss = model(SystemId::GaussMap);
    Observable dig = digit_observable();
    CHECK(tail_measure(dig, gauss, 2.0) == doctest::Approx(std::log2(1.5)).epsilon(1e-12));
    CHECK(std::log2(1.5) == doctest::Approx(0.58496).epsilon(1e-4));
}

TEST_CASE("empirical tail frequency matches tail_measure over two decades") {
    SystemModel iid = model(SystemId::IIDUniform);
    Observable obs = make_observable(ProfileKind::Radial, iid, {0.0, 0.0}, 1.0, 0.5);
    Rng r = Rng::from_seed(3);
    const int n = 1000000;
    std::vector<double> ts{10.0, 30.0, 100.0, 300.0, 1000.0};
    std::vector<int> hits(ts.size(), 0);
    for (int i = 0; i < n; ++i) {
        double f = obs.evaluate(iid, {r.uniform_pos(), 0.0});
        for (std::size_t j = 0; j < ts.size(); ++j)
            if (f > ts[j]) ++hits[j];
    }
    for (std::size_t j = 0; j < ts.size(); ++j) {
        double p = tail_measure(obs, iid, ts[j]);
        double sd = std::sqrt(p * (1.0 - p) * n);
        CHECK(std::fabs(double(hits[j]) - p * n) < 3.0 * sd + 3.0);
    }
}

TEST_CASE("aperture consistency: raising t by 2^alpha halves the radial tail") {
    SystemModel dbl = model(SystemId::DoublingBitstream);
    for (double beta : {0.75, 1.0, 2.0}) {
        Observable obs = make_observable(ProfileKind::Radial, dbl, {kGolden, 0.0}, beta, 1.0);
        double t = 40.0;
        double m1 = tail_measure(obs, dbl, t);
        double m2 = tail_measure(obs, dbl, t * std::pow(2.0, obs.alpha));
        CHECK(m2 == doctest::Approx(0.5 * m1).epsilon(1e-9));
    }
}

TEST_CASE("scale consistency: amplitude multiplies f exactly") {
    SystemModel iid = model(SystemId::IIDUniform);
    Observable base = make_observable(ProfileKind::Oscillatory, iid, {0.3, 0.0}, 1.0, 1.0, 1.0);
    Observable tripled = make_observable(ProfileKind::Oscillatory, iid, {0.3, 0.0}, 1.0, 1.0, 3.0);
    Rng r = Rng::from_seed(6);
    for (int i = 0; i < 1000; ++i) {
        Point p{r.uniform_pos(), 0.0};
        if (p[0] == 0.3) continue;
        CHECK(tripled.evaluate(iid, p) == doctest::Approx(3.0 * base.evaluate(iid, p)).epsilon(1e-15));
    }
}

TEST_CASE("the C0 bound dominates f on sampled points") {
    SystemModel iid = model(SystemId::IIDUniform);
    Observable obs = make_observable(ProfileKind::Oscillatory, iid, {0.4, 0.0}, 1.5, 1.0);
    Rng r = Rng::from_seed(8);
    for (int i = 0; i < 100000; ++i) {
        Point p{r.uniform_pos(), 0.0};
        double d = iid.metric(p, obs.site);
        if (d == 0.0) continue;
        CHECK(obs.evaluate(iid, p) <= obs.bound_C0 * std::pow(d, -obs.beta) * (1.0 + 1e-12));
    }
}

TEST_CASE("tail law constant assembles geometry, density and residue") {
    SystemModel gauss = model(SystemId::GaussMap);
    Observable dig = digit_observable();
    TailLaw law = tail_law(dig, gauss);
    // one-sided * B_1 * rho(0) * Res = 0.5 * 2 * (1/log 2) * 1
    CHECK(law.tail_constant == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));
    CHECK(law.alpha == 1.0);
}

TEST_CASE("site validator rejects periodic points for expanding maps") {
    SystemModel dbl = model(SystemId::DoublingBitstream);
    CHECK_THROWS_AS(validate_site(dbl, {0.0, 0.0}), ConfigError);       // fixed point
    CHECK_THROWS_AS(validate_site(dbl, {1.0 / 3.0, 0.0}), ConfigError); // period 2
    CHECK_NOTHROW(validate_site(dbl, {kGolden, 0.0}));

    SystemModel cat = model(SystemId::CatMapFixed128);
    CHECK_THROWS_AS(validate_site(cat, {0.5, 0.5}), ConfigError);
    CHECK_NOTHROW(validate_site(cat, {kGolden, kGolden}));

    // one-sided interval models have no periodicity constraint
    CHECK_NOTHROW(validate_site(model(SystemId::IIDUniform), {0.0, 0.0}));
    CHECK_NOTHROW(validate_site(model(SystemId::GaussMap), {0.0, 0.0}));
}

TEST_CASE("profile names round-trip") {
    for (ProfileKind p : {ProfileKind::Radial, ProfileKind::Oscillatory, ProfileKind::Digit})
        CHECK(profile_from_name(profile_name(p)) == p);
    CHECK_THROWS_AS(profile_from_name("cusp"), ConfigError);
}
