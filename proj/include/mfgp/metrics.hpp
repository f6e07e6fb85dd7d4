#pragma once

#include "mfgp/kernel.hpp"
#include "mfgp/summary.hpp"

namespace mfgp {

struct MetricsReport {
    double rmspe_marginal = 0.0;
    double cvg95_marginal = 0.0;  // percent
    double alci95_marginal = 0.0;
    double rmspe_agg = 0.0;
    double cvg95_agg = 0.0;
    double alci95_agg = 0.0;
    // Per-location breakdown over test inputs.
    Vector rmspe_location;
    Vector cvg95_location;
    Vector alci95_location;
};

/// RMSPE is the root-mean-square error over inputs at each location, averaged over locations.
/// CVG counts (input, location) cells whose truth lies in [q025, q975]. The aggregated metrics
/// score the spatial average of the truth (over the summary's mask) against the joint-sample
/// aggregate summaries.
MetricsReport compute_metrics(const Matrix& truth, const PredictiveSummary& summary);

}  // namespace mfgp
