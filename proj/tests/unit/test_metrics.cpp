#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mfgp/error.hpp"
#include "mfgp/metrics.hpp"
#include "mfgp/rng.hpp"

#include <cmath>

using namespace mfgp;

namespace {

Matrix noise(int rows, int cols, Rng& rng, double sd) {
    std::normal_distribution<double> z(0.0, sd);
    Matrix A(rows, cols);
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        A.data()[i] = z(rng);
    }
    return A;
}

PredictiveSummary random_summary(const Matrix& truth, std::vector<int> mask, Rng& rng) {
    auto s = make_summary(static_cast<int>(truth.rows()), static_cast<int>(truth.cols()), 1, std::move(mask));
    s.mean = truth + noise(truth.rows(), truth.cols(), rng, 0.5);
    const Matrix half = noise(truth.rows(), truth.cols(), rng, 1.0).cwiseAbs();
    s.q025 = s.mean - half;
    s.q975 = s.mean + half;
    const Vector m = spatial_average(s.mean, s.mask);
    const Vector w = noise(truth.rows(), 1, rng, 0.3).cwiseAbs();
    s.agg_mean = m;
    s.agg_q025 = m - w;
    s.agg_q975 = m + w;
    return s;
}

}  // namespace

TEST_CASE("metrics agree with explicit loops") {
    Rng rng(3);
    for (int c = 0; c < 20; ++c) {
        const int n = 3 + c % 5;
        const int N = 4 + c % 7;
        const Matrix truth = noise(n, N, rng, 2.0);
        std::vector<int> mask;
        if (c % 2 == 1) {
            mask = {0, N - 1, 2};
        }
        const auto s = random_summary(truth, mask, rng);
        const auto r = compute_metrics(truth, s);

        double rmspe = 0.0, cvg = 0.0, alci = 0.0;
        for (int j = 0; j < N; ++j) {
            double sq = 0.0;
            for (int i = 0; i < n; ++i) {
                sq += (s.mean(i, j) - truth(i, j)) * (s.mean(i, j) - truth(i, j));
                cvg += s.q025(i, j) <= truth(i, j) && truth(i, j) <= s.q975(i, j);
                alci += s.q975(i, j) - s.q025(i, j);
            }
            rmspe += std::sqrt(sq / n);
        }
        CHECK(std::abs(r.rmspe_marginal - rmspe / N) < 1e-12);
        CHECK(std::abs(r.cvg95_marginal - 100.0 * cvg / (n * N)) < 1e-12);
        CHECK(std::abs(r.alci95_marginal - alci / (n * N)) < 1e-12);

        double asq = 0.0, acvg = 0.0, aw = 0.0;
        for (int i = 0; i < n; ++i) {
            double avg = 0.0;
            const int count = mask.empty() ? N : static_cast<int>(mask.size());
            for (int k = 0; k < count; ++k) {
                avg += truth(i, mask.empty() ? k : mask[k]);
            }
            avg /= count;
            asq += (s.agg_mean[i] - avg) * (s.agg_mean[i] - avg);
            acvg += s.agg_q025[i] <= avg && avg <= s.agg_q975[i];
            aw += s.agg_q975[i] - s.agg_q025[i];
        }
        CHECK(std::abs(r.rmspe_agg - std::sqrt(asq / n)) < 1e-12);
        CHECK(std::abs(r.cvg95_agg - 100.0 * acvg / n) < 1e-12);
        CHECK(std::abs(r.alci95_agg - aw / n) < 1e-12);
    }
}

TEST_CASE("hand-computed fixture") {
    Matrix truth(2, 2);
    truth << 1, 2, 3, 4;
    auto s = make_summary(2, 2, 1, {});
    s.mean << 1, 3, 3, 2;
    s.q025 << 0, 2.5, 2, 1;
    s.q975 << 2, 3.5, 4, 3;
    s.agg_mean << 2, 2.5;
    s.agg_q025 << 1, 3;
    s.agg_q975 << 2, 4;
    const auto r = compute_metrics(truth, s);
    CHECK(r.rmspe_marginal == doctest::Approx((0.0 + std::sqrt(2.5)) / 2));
    CHECK(r.cvg95_marginal == doctest::Approx(50.0));
    CHECK(r.alci95_marginal == doctest::Approx(1.75));
    CHECK(r.rmspe_agg == doctest::Approx(std::sqrt((0.25 + 1.0) / 2)));
    CHECK(r.cvg95_agg == doctest::Approx(100.0));
    CHECK(r.alci95_agg == doctest::Approx(1.0));
    CHECK(r.cvg95_location[0] == doctest::Approx(100.0));
}

TEST_CASE("perfect predictions") {
    Matrix truth(3, 4);
    truth.setRandom();
    auto s = make_summary(3, 4, 1, {});
    s.mean = s.q025 = s.q975 = truth;
    s.agg_mean = s.agg_q025 = s.agg_q975 = spatial_average(truth, {});
    const auto r = compute_metrics(truth, s);
    CHECK(r.rmspe_marginal == 0.0);
    CHECK(r.cvg95_marginal == 100.0);
    CHECK(r.alci95_agg == 0.0);
}

TEST_CASE("shape mismatch is rejected") {
    auto s = make_summary(2, 3, 1, {});
    CHECK_THROWS_AS(compute_metrics(Matrix::Zero(2, 4), s), InvalidArgument);
    CHECK_THROWS_AS(compute_metrics(Matrix::Zero(0, 0), make_summary(0, 0, 1, {})), InvalidArgument);
}
