#include "mfgp/summary.hpp"

#include "mfgp/error.hpp"

#include <algorithm>
#include <cmath>

namespace mfgp {

double empirical_quantile(std::vector<double>& values, double prob) {
    if (values.empty()) {
        throw InvalidArgument("empirical_quantile: no values");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Vector spatial_average(const Eigen::Ref<const Matrix>& values, const std::vector<int>& mask) {
    if (mask.empty()) {
        return values.rowwise().mean();
    }
    Vector out = Vector::Zero(values.rows());
    for (int j : mask) {
        if (j < 0 || j >= values.cols()) {
            throw InvalidArgument("spatial_average: mask index out of range");
        }
        out += values.col(j);
    }
    return out / static_cast<double>(mask.size());
}

PredictiveSummary make_summary(int inputs, int locations, int samples, std::vector<int> mask) {
    PredictiveSummary s;
    s.mean.resize(inputs, locations);
    s.q025.resize(inputs, locations);
    s.q975.resize(inputs, locations);
    s.agg_mean.resize(inputs);
    s.agg_q025.resize(inputs);
    s.agg_q975.resize(inputs);
    s.samples_per_input = samples;
    s.mask = std::move(mask);
    return s;
}

void summarize_samples(const Eigen::Ref<const Matrix>& samples, const Eigen::Ref<const Vector>& point, int row,
                       PredictiveSummary& summary) {
    const Eigen::Index count = samples.rows();
    const Eigen::Index N = samples.cols();
    std::vector<double> buf(count);
    for (Eigen::Index j = 0; j < N; ++j) {
        for (Eigen::Index s = 0; s < count; ++s) {
            buf[s] = samples(s, j);
        }
        summary.q025(row, j) = empirical_quantile(buf, 0.025);
        summary.q975(row, j) = empirical_quantile(buf, 0.975);
        summary.mean(row, j) = point[j];
    }
    const Vector agg = spatial_average(samples, summary.mask);
    std::vector<double> abuf(agg.data(), agg.data() + agg.size());
    summary.agg_q025[row] = empirical_quantile(abuf, 0.025);
    summary.agg_q975[row] = empirical_quantile(abuf, 0.975);
    Matrix point_row = point.transpose();
    summary.agg_mean[row] = spatial_average(point_row, summary.mask)[0];
}

}  // namespace mfgp
