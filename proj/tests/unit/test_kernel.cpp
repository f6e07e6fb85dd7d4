#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "checks.hpp"
#include "mfgp/error.hpp"
#include "mfgp/kernel.hpp"

#include <cmath>

using namespace mfgp;

TEST_CASE("matern 5/2 closed form agrees with the Bessel form") {
    CHECK(checks::matern_bessel_error() < 1e-12);
}

TEST_CASE("matern correlation basics") {
    CHECK(matern_correlation(0.0, 0.7) == 1.0);
    CHECK(matern_correlation(0.3, 1.0) > matern_correlation(0.6, 1.0));
    CHECK(matern_correlation(0.4, 0.2, 0.5) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    // A non half-integer smoothness goes through the Bessel path and still decays monotonically.
    CHECK(matern_correlation(0.2, 1.0, 1.7) > matern_correlation(0.4, 1.0, 1.7));
    CHECK_THROWS_AS(matern_correlation(-0.1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(matern_correlation(0.1, 0.0), InvalidArgument);
}

TEST_CASE("product correlation multiplies over dimensions") {
    CorrelationParams p(std::vector<double>{0.5, 2.0});
    Vector a(2), b(2);
    a << 0.1, 0.9;
    b << 0.4, 0.2;
    CHECK(product_correlation(a, b, p) ==
          doctest::Approx(matern_correlation(0.3, 0.5) * matern_correlation(0.7, 2.0)).epsilon(1e-15));
}

TEST_CASE("correlation matrix factorization and whitening") {
    Matrix X(4, 2);
    X << 0.1, 0.2, 0.5, 0.9, 0.8, 0.4, 0.3, 0.6;
    const CorrelationParams p(std::vector<double>{0.4, 0.7});
    const auto R = correlation_matrix(X, p, 1e-8);
    const Matrix dense = R.entries() + 1e-8 * Matrix::Identity(4, 4);
    CHECK((R.entries() - R.entries().transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((R.lower() * R.lower().transpose() - dense).cwiseAbs().maxCoeff() < 1e-14);
    Matrix M(4, 2);
    M << 1, 2, -1, 0.5, 3, 0, 0.2, -2;
    const Matrix S = R.whiten(M);
    CHECK((S.transpose() * S - M.transpose() * dense.inverse() * M).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((R.solve(M) - dense.inverse() * M).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(R.log_det() == doctest::Approx(std::log(dense.determinant())).epsilon(1e-10));
    const Vector v = M.col(0);
    CHECK((R.whiten_vector(v) - S.col(0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("duplicate inputs without jitter fail to factor") {
    Matrix X(2, 1);
    X << 0.5, 0.5;
    CHECK_THROWS_AS(correlation_matrix(X, CorrelationParams(std::vector<double>{1.0}), 0.0), ConditioningError);
}

TEST_CASE("cross correlation vector") {
    Matrix X(3, 1);
    X << 0.0, 0.5, 1.0;
    Vector x0(1);
    x0 << 0.5;
    const auto r = cross_correlation_vector(x0, X, CorrelationParams(std::vector<double>{0.3}));
    CHECK(r[1] == 1.0);
    CHECK(r[0] == doctest::Approx(r[2]).epsilon(1e-15));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(CorrelationParams(std::vector<double>{1.0, -2.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(CorrelationParams(std::vector<double>{}).validate(), InvalidArgument);
}
