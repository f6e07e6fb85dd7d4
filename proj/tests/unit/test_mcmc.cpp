#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "checks.hpp"
#include "mfgp/error.hpp"
#include "mfgp/mcmc.hpp"
#include "mfgp/rng.hpp"

#include <cmath>
#include <numbers>

using namespace mfgp;

TEST_CASE("prior densities integrate to one") {
    CHECK(checks::prior_integral_error() < 1e-6);
}

TEST_CASE("prior log densities") {
    CHECK(half_cauchy_logpdf(2.0, 2.0) == doctest::Approx(std::log(2.0 / (std::numbers::pi * 2.0 * 2.0))));
    CHECK(half_normal_logpdf(0.0, 1.0) == -std::numeric_limits<double>::infinity());
    CHECK(half_cauchy_logpdf(-1.0, 1.0) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(half_normal_logpdf(1.0, 0.0), InvalidArgument);
}

TEST_CASE("random walk draws match the target distribution") {
    CHECK(checks::mh_ks_distance(100000, 8) < 0.01);
}

TEST_CASE("chains are reproducible and respect thinning") {
    ChainSettings s;
    s.iterations = 1200;
    s.burn_in = 200;
    s.thin = 4;
    s.seed = 99;
    const LogTarget target = [](const Vector& t) { return -0.5 * (t.array().log().square()).sum(); };
    const Chain a = random_walk_mh(target, Vector::Ones(2), s);
    const Chain b = random_walk_mh(target, Vector::Ones(2), s);
    CHECK(a.samples == b.samples);
    CHECK(a.size() == s.retained());
    CHECK(a.samples.minCoeff() > 0.0);
    CHECK(a.acceptance_rate >= 0.0);
    CHECK(a.acceptance_rate <= 1.0);
    CHECK(map_estimate(a) == a.samples.row(a.map_index).transpose());
    CHECK(a.log_densities.maxCoeff() == a.log_densities[a.map_index]);
}

TEST_CASE("adaptation steers acceptance toward 30 percent") {
    ChainSettings s;
    s.iterations = 20000;
    s.burn_in = 5000;
    s.proposal_scales = {5.0};
    const Chain c = random_walk_mh([](const Vector& t) { return -0.5 * std::pow(std::log(t[0]) / 0.05, 2); },
                                   Vector::Ones(1), s);
    CHECK(c.acceptance_rate > 0.15);
    CHECK(c.acceptance_rate < 0.5);
}

TEST_CASE("throwing targets are rejected moves, not errors") {
    ChainSettings s;
    s.iterations = 500;
    s.burn_in = 100;
    const Chain c = random_walk_mh(
        [](const Vector& t) {
            if (t[0] > 2.0) {
                throw NumericalError("outside");
            }
            return 0.0;
        },
        Vector::Ones(1), s);
    CHECK(c.samples.maxCoeff() <= 2.0);
    CHECK_THROWS_AS(random_walk_mh([](const Vector&) { return std::nan(""); }, Vector::Ones(1), s), NumericalError);
}

TEST_CASE("invalid settings") {
    ChainSettings s;
    s.burn_in = s.iterations;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
    ChainSettings t;
    CHECK_THROWS_AS(random_walk_mh([](const Vector&) { return 0.0; }, Vector::Constant(1, -1.0), t), InvalidArgument);
}

TEST_CASE("effective sample size") {
    Rng rng(5);
    std::normal_distribution<double> z;
    Vector iid(20000), ar(20000);
    double prev = 0.0;
    for (int i = 0; i < 20000; ++i) {
        iid[i] = z(rng);
        prev = 0.9 * prev + z(rng);
        ar[i] = prev;
    }
    CHECK(effective_sample_size(iid) == doctest::Approx(20000).epsilon(0.1));
    // AR(1) with rho = 0.9: n (1 - rho) / (1 + rho).
    CHECK(effective_sample_size(ar) == doctest::Approx(20000 * 0.1 / 1.9).epsilon(0.25));
}

TEST_CASE("presets") {
    CHECK(ChainSettings::desk().iterations == 3000);
    CHECK(ChainSettings::paper_sep().iterations == 30000);
    CHECK(ChainSettings::paper_nonsep().iterations == 60000);
}
