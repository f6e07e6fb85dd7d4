#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "checks.hpp"

using namespace mfgp;

TEST_CASE("Latin hypercube strata hold one point each") {
    CHECK(checks::lhs_violations(200, 201) == 0);
}

TEST_CASE("maximin ordering picks the farthest remaining location") {
    CHECK(checks::maximin_violations(50, 202) == 0);
}

TEST_CASE("SEP interpolates its training outputs") {
    for (std::uint64_t seed : {203, 204, 205}) {
        CHECK(checks::sep_interpolation_mean_error(seed) < 1e-6);
        CHECK(checks::sep_interpolation_scale(seed) < 1e-8);
    }
}

TEST_CASE("NONSEP weights interpolate at training inputs") {
    for (std::uint64_t seed : {206, 207}) {
        CHECK(checks::nonsep_interpolation_scale(seed) < 1e-8);
    }
}

TEST_CASE("SEP theta posterior ignores constant output shifts") {
    CHECK(checks::shift_invariance_error(30, 208) < 1e-10);
}

TEST_CASE("Metropolis-Hastings recovers a one-dimensional target") {
    CHECK(checks::mh_ks_distance(100000, 209) < 0.01);
}

TEST_CASE("prior densities integrate to one") {
    CHECK(checks::prior_integral_error() < 1e-6);
}
