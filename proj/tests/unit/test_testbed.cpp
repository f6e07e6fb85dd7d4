#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mfgp/error.hpp"
#include "mfgp/rng.hpp"
#include "mfgp/testbed.hpp"

#include <cmath>
#include <numbers>

using namespace mfgp;
using namespace mfgp::testbed;

namespace {

long double reference(long double M, long double D, long double L, long double T, long double s1, long double s2) {
    const long double pi = 3.141592653589793238462643383279502884L;
    long double c = M / std::sqrt(4.0L * pi * D * s2) * std::exp(-s1 * s1 / (4.0L * D * s2));
    if (T < s2) {
        c += M / std::sqrt(4.0L * pi * D * (s2 - T)) * std::exp(-(s1 - L) * (s1 - L) / (4.0L * D * (s2 - T)));
    }
    return c;
}

}  // namespace

TEST_CASE("concentration matches an extended-precision evaluation") {
    Rng rng(1);
    std::uniform_real_distribution<double> uM(7, 13), uD(0.02, 0.12), uL(0.01, 3), u1(0.5, 5), u2(35, 60);
    for (int i = 0; i < 500; ++i) {
        const EnvInput in{uM(rng), uD(rng), uL(rng), 30.0};
        const double s1 = u1(rng), s2 = u2(rng);
        const long double ref = reference(in.M, in.D, in.L, in.T, s1, s2);
        CHECK(std::abs(concentration(in, s1, s2) - static_cast<double>(ref)) <= 1e-12 * std::max(1.0L, std::abs(ref)));
        CHECK(hi_fidelity(in, s1, s2) == doctest::Approx(std::sqrt(4.0 * std::numbers::pi) * concentration(in, s1, s2)).epsilon(1e-14));
    }
}

TEST_CASE("second spill switches on after its release time") {
    const EnvInput in{10.0, 0.07, 1.5, 30.0};
    const double first_only = in.M / std::sqrt(4 * std::numbers::pi * in.D * 20.0) * std::exp(-1.0 / (4 * in.D * 20.0));
    CHECK(concentration(in, 1.0, 20.0) == doctest::Approx(first_only).epsilon(1e-14));
    CHECK(concentration(in, 1.0, 30.5) > concentration({10.0, 0.07, 1.5, 31.0}, 1.0, 30.5));
    CHECK_THROWS_AS(concentration(in, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("low-fidelity forms") {
    const EnvInput in{9.0, 0.05, 2.0, 30.0};
    const double z = -0.25 / (4 * in.D * 40.0);
    const double z2 = -(0.5 - 2.0) * (0.5 - 2.0) / (4 * in.D * 10.0);
    const double a = in.M / std::sqrt(4 * std::numbers::pi * in.D * 40.0);
    const double b = in.M / std::sqrt(4 * std::numbers::pi * in.D * 10.0);
    const double k = std::sqrt(4 * std::numbers::pi);
    CHECK(lo_fidelity(in, 0.5, 40.0) == doctest::Approx(k * (a / (1 - z) + b / (1 - z2))).epsilon(1e-13));
    CHECK(lo_fidelity(in, 0.5, 40.0, LowFidelityForm::linear) == doctest::Approx(k * (a * (1 + z) + b * (1 + z2))).epsilon(1e-13));
    CHECK(lo_fidelity(in, 0.5, 40.0, LowFidelityForm::clipped_linear) ==
          doctest::Approx(k * (a * (1 + z) + b * std::max(0.0, 1 + z2))).epsilon(1e-13));
    const EnvInput at_zero{9.0, 0.05, 2.0, 30.0};
    CHECK(lo_fidelity(at_zero, 0.0, 25.0) == doctest::Approx(hi_fidelity(at_zero, 0.0, 25.0)).epsilon(1e-15));
    CHECK(low_fidelity_form_from_string("linear") == LowFidelityForm::linear);
    CHECK_THROWS_AS(low_fidelity_form_from_string("cubic"), ConfigError);
}

TEST_CASE("input ranges") {
    CHECK_NOTHROW(EnvInput{}.validate());
    CHECK_THROWS_AS((EnvInput{14.0, 0.07, 1.5, 30.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((EnvInput{10.0, 0.07, 1.5, 31.0}.validate()), InvalidArgument);
}

TEST_CASE("space-time grid") {
    const auto g = SpaceTimeGrid::standard();
    CHECK(g.size() == 1000);
    CHECK(g.s1[0] == 0.5);
    CHECK(g.s1[19] == 5.0);
    CHECK(g.s2[49] == 60.0);
    CHECK(g.locations(3 * 50 + 7, 0) == g.s1[3]);
    CHECK(g.locations(3 * 50 + 7, 1) == g.s2[7]);
}

TEST_CASE("experiment shapes, nesting and determinism") {
    const auto e = generate_experiment(5, ExperimentSizes::desk());
    REQUIRE(e.data.num_levels() == 2);
    CHECK(e.data.levels[0].X.rows() == 30);
    CHECK(e.data.levels[1].X.rows() == 15);
    CHECK(e.X_test.rows() == 15);
    CHECK(e.Y_test.cols() == 1000);
    for (int i = 0; i < 15; ++i) {
        CHECK(e.data.levels[1].X.row(i) == e.data.levels[0].X.row(e.data.levels[1].parent_rows[i]));
    }
    const auto again = generate_experiment(5, ExperimentSizes::desk());
    CHECK(again.data.levels[1].Y == e.data.levels[1].Y);
    CHECK(again.X_test == e.X_test);
    CHECK(generate_experiment(6, ExperimentSizes::desk()).X_test != e.X_test);
    const Vector x = e.data.levels[1].X.row(2).transpose();
    const EnvInput in{x[0], x[1], x[2], kSpillTime};
    CHECK(e.data.levels[1].Y(2, 123) == hi_fidelity(in, e.grid.locations(123, 0), e.grid.locations(123, 1)));
    CHECK(e.data.levels[0].Y(0, 5) == lo_fidelity({e.data.levels[0].X(0, 0), e.data.levels[0].X(0, 1),
                                                   e.data.levels[0].X(0, 2), kSpillTime},
                                                  e.grid.locations(5, 0), e.grid.locations(5, 1)));
}

TEST_CASE("reciprocal low fidelity tracks the high fidelity closely") {
    const auto e = generate_experiment(2, ExperimentSizes::desk());
    const Matrix lo = evaluate(e.data.levels[1].X, e.grid, Fidelity::low);
    const Matrix& hi = e.data.levels[1].Y;
    const double diff = (hi - lo).squaredNorm();
    const double spread = (hi.rowwise() - hi.colwise().mean()).squaredNorm();
    CHECK(diff / spread < 0.5);
}
