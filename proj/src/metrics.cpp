#include "mfgp/metrics.hpp"

#include "mfgp/error.hpp"

#include <cmath>

namespace mfgp {

MetricsReport compute_metrics(const Matrix& truth, const PredictiveSummary& summary) {
    if (truth.rows() != summary.mean.rows() || truth.cols() != summary.mean.cols()) {
        throw InvalidArgument("compute_metrics: truth is " + std::to_string(truth.rows()) + " x " +
                              std::to_string(truth.cols()) + " but predictions are " +
                              std::to_string(summary.mean.rows()) + " x " + std::to_string(summary.mean.cols()));
    }
    if (truth.rows() == 0 || truth.cols() == 0) {
        throw InvalidArgument("compute_metrics: empty prediction set");
    }
    const auto n = static_cast<double>(truth.rows());
    MetricsReport r;
    const Matrix err = summary.mean - truth;
    r.rmspe_location = (err.array().square().colwise().sum() / n).sqrt().transpose();
    const Matrix inside =
        ((truth.array() >= summary.q025.array()) && (truth.array() <= summary.q975.array())).cast<double>();
    r.cvg95_location = 100.0 * inside.colwise().mean().transpose();
    r.alci95_location = (summary.q975 - summary.q025).colwise().mean().transpose();
    r.rmspe_marginal = r.rmspe_location.mean();
    r.cvg95_marginal = r.cvg95_location.mean();
    r.alci95_marginal = r.alci95_location.mean();

    const Vector agg_truth = spatial_average(truth, summary.mask);
    r.rmspe_agg = std::sqrt((summary.agg_mean - agg_truth).squaredNorm() / n);
    int covered = 0;
    for (Eigen::Index i = 0; i < agg_truth.size(); ++i) {
        covered += agg_truth[i] >= summary.agg_q025[i] && agg_truth[i] <= summary.agg_q975[i];
    }
    r.cvg95_agg = 100.0 * covered / n;
    r.alci95_agg = (summary.agg_q975 - summary.agg_q025).mean();
    return r;
}

}  // namespace mfgp
