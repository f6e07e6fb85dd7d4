#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "checks.hpp"

using namespace mfgp;

TEST_CASE("matrix-normal factorization over 100 random cases") {
    CHECK(checks::factorization_error(100, 101) < 1e-8);
}

TEST_CASE("precision reconstruction with full neighbor sets") {
    CHECK(checks::precision_identity_error(100, 102) < 1e-8);
}

TEST_CASE("SEP theta posterior against per-column conjugate regression") {
    CHECK(checks::conjugate_oracle_error(100, 103) < 1e-8);
}

TEST_CASE("sequential locations against dense conditional means") {
    CHECK(checks::conditional_mean_error(100, 104) < 1e-8);
}

TEST_CASE("NONSEP weight predictive against explicit inverses") {
    CHECK(checks::weight_predictive_error(100, 105) < 1e-10);
}

TEST_CASE("Matern 5/2 closed form against the Bessel form") {
    CHECK(checks::matern_bessel_error() < 1e-12);
}
