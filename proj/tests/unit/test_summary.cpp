#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mfgp/error.hpp"
#include "mfgp/summary.hpp"

using namespace mfgp;

TEST_CASE("type-7 quantiles") {
    std::vector<double> v = {5, 1, 4, 2, 3};
    CHECK(empirical_quantile(v, 0.0) == 1.0);
    CHECK(empirical_quantile(v, 1.0) == 5.0);
    CHECK(empirical_quantile(v, 0.5) == 3.0);
    CHECK(empirical_quantile(v, 0.1) == doctest::Approx(1.4));
    std::vector<double> w(1000);
    for (int i = 0; i < 1000; ++i) {
        w[i] = 999 - i;
    }
    // R: quantile(0:999, c(0.025, 0.975)) gives 24.975 and 974.025
    CHECK(empirical_quantile(w, 0.025) == doctest::Approx(24.975).epsilon(1e-14));
    CHECK(empirical_quantile(w, 0.975) == doctest::Approx(974.025).epsilon(1e-14));
    std::vector<double> none;
    CHECK_THROWS_AS(empirical_quantile(none, 0.5), InvalidArgument);
}

TEST_CASE("spatial average over a mask") {
    Matrix v(2, 4);
    v << 1, 2, 3, 4, 10, 20, 30, 40;
    CHECK(spatial_average(v, {}) == Vector::LinSpaced(2, 2.5, 25.0));
    const Vector m = spatial_average(v, {1, 3});
    CHECK(m[0] == 3.0);
    CHECK(m[1] == 30.0);
    CHECK_THROWS_AS(spatial_average(v, {4}), InvalidArgument);
}

TEST_CASE("aggregate interval comes from joint samples") {
    Matrix samples(400, 2);
    for (int s = 0; s < 400; ++s) {
        const double u = (s - 199.5) / 100.0;
        samples(s, 0) = u;
        samples(s, 1) = -u;
    }
    auto sum = make_summary(1, 2, 400, {});
    summarize_samples(samples, Vector::Zero(2), 0, sum);
    CHECK(sum.q975(0, 0) == doctest::Approx(1.89525).epsilon(1e-12));
    CHECK(sum.agg_q025[0] == 0.0);
    CHECK(sum.agg_q975[0] == 0.0);
    CHECK(sum.agg_mean[0] == 0.0);
}
