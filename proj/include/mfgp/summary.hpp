#pragma once

#include "mfgp/kernel.hpp"

#include <vector>

namespace mfgp {

/// Per-input predictive summaries at the top fidelity level.
struct PredictiveSummary {
    Matrix mean;  // inputs x locations
    Matrix q025;
    Matrix q975;
    // Spatial average over the aggregation mask, summarized from joint samples.
    Vector agg_mean;
    Vector agg_q025;
    Vector agg_q975;
    int samples_per_input = 0;
    std::vector<int> mask;  // locations in the aggregate; empty means all

    [[nodiscard]] int num_inputs() const { return static_cast<int>(mean.rows()); }
    [[nodiscard]] int num_locations() const { return static_cast<int>(mean.cols()); }
};

/// Empirical quantile with linear interpolation between order statistics (R type 7).
/// `values` is sorted in place.
double empirical_quantile(std::vector<double>& values, double prob);

/// Mean of the selected columns of each row; all columns when `mask` is empty.
Vector spatial_average(const Eigen::Ref<const Matrix>& values, const std::vector<int>& mask);

/// Fills row `row` of `summary` from joint samples (count x N) and the point prediction.
/// The aggregate interval comes from the per-sample spatial average, never from the marginals.
void summarize_samples(const Eigen::Ref<const Matrix>& samples, const Eigen::Ref<const Vector>& point,
                       int row, PredictiveSummary& summary);

/// Allocates a summary for `inputs` rows and `locations` columns.
PredictiveSummary make_summary(int inputs, int locations, int samples, std::vector<int> mask);

}  // namespace mfgp
