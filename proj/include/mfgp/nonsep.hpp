#pragma once

#include "mfgp/dataset.hpp"
#include "mfgp/kernel.hpp"
#include "mfgp/mcmc.hpp"
#include "mfgp/rng.hpp"
#include "mfgp/summary.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mfgp::nonsep {

inline constexpr double kScaleFloor = 1e-12;

enum class Scaling {
    global,        // one standard deviation for the whole centered matrix
    per_location,  // one standard deviation per column
};

std::string to_string(Scaling scaling);
Scaling scaling_from_string(const std::string& name);

struct StandardizationStats {
    Vector center;  // per location
    Vector scale;   // one entry (global) or one per location
    int level = 1;
    Scaling scaling = Scaling::global;

    // Scale applied to column j.
    [[nodiscard]] double scale_at(Eigen::Index j) const { return scale.size() == 1 ? scale[0] : scale[j]; }
};

/// Centers every column at its mean and divides by the chosen standard deviation (n - 1
/// denominator), floored at kScaleFloor.
std::pair<Matrix, StandardizationStats> standardize(const Matrix& Y, Scaling scaling = Scaling::global,
                                                    int level = 1);
Matrix unstandardize(const Matrix& Yc, const StandardizationStats& stats);

struct PcBasis {
    Matrix K;                    // N x p retained directions
    Matrix W;                    // n x p weights, Yc K
    Vector explained;            // variance fraction of every component (min(n, N) entries)
    Matrix discarded_K;          // N x (r - p) directions left out
    Vector discarded_variances;  // score variances of the discarded components

    [[nodiscard]] int p() const { return static_cast<int>(K.cols()); }
};

/// Principal components of a centered matrix from its thin SVD. Throws InvalidArgument unless
/// 1 <= p <= min(n, N).
PcBasis pca(const Matrix& Yc, int p);

/// Cumulative explained fraction of the first k components.
double explained_through(const PcBasis& basis, int k);

enum class PriorKind { half_cauchy, half_normal };

struct WeightGpSpec {
    int level = 0;      // zero-based
    int component = 0;  // zero-based
    std::vector<int> predictors;  // level-below components in the mean (empty at level 0)
    CorrelationParams theta;
    PriorKind prior = PriorKind::half_cauchy;
    std::vector<double> prior_scales;
};

/// Observed weights of one (level, component) and the level-below predictor weights at the
/// same inputs (n x k, zero columns at level 0).
struct WeightData {
    Matrix X;
    Vector w;
    Matrix P;

    [[nodiscard]] int n() const { return static_cast<int>(X.rows()); }
    [[nodiscard]] int k() const { return static_cast<int>(P.cols()); }
    [[nodiscard]] int dof() const { return n() - k(); }
};

/// Conditioned weight GP at a fixed theta.
struct WeightState {
    CorrelationParams theta;
    CorrelationMatrix R;
    Vector beta;        // GLS coefficients (k entries)
    Vector alpha;       // R^{-1}(w - P beta)
    Matrix P_white;     // L^{-1} P
    Eigen::LLT<Matrix> gram;  // P^T R^{-1} P
    double Q = 0.0;     // residual quadratic form
    double log_det_gram = 0.0;
    int dof = 0;
};

WeightState prepare_weight(const WeightData& data, const CorrelationParams& theta, double jitter = kDefaultJitter);

/// log|R|, GLS and quadratic-form terms of the weight marginal posterior plus the log prior.
/// Throws NumericalError when the residual quadratic form is not positive.
double weight_log_posterior(const WeightData& data, const CorrelationParams& theta, PriorKind prior,
                            const std::vector<double>& prior_scales, double jitter = kDefaultJitter);

struct WeightPredictive {
    double location = 0.0;
    double scale2 = 0.0;  // squared Student-t scale
    double dof = 0.0;
};

/// Student-t predictive of one weight at x0 given the level-below predictor values there.
WeightPredictive predict_weight(const WeightData& data, const WeightState& state, const Eigen::Ref<const Vector>& x0,
                                const Eigen::Ref<const Vector>& predictors);

struct NonsepConfig {
    int m = 2;
    std::vector<int> components;  // p_t per level
    Scaling scaling = Scaling::global;
    double jitter = kDefaultJitter;
    double smoothness = kDefaultSmoothness;
    // Include every level-below component whose weights correlate above the threshold in
    // absolute value; the matched component is used when none qualifies.
    bool auto_predictors = false;
    double predictor_threshold = 0.9;
    std::vector<std::vector<double>> prior_scales;  // per level, one per input dimension
    std::map<std::pair<int, int>, std::vector<double>> scale_overrides;  // (level, component), zero-based

    /// p components at every level and prior scales of half each input range.
    static NonsepConfig defaults(int m, const std::vector<Bound>& input_bounds, int p);

    void validate(const MultifidelityDataset& data) const;
    [[nodiscard]] std::vector<double> scales_for(int level, int component) const;
};

struct NonsepLevel {
    StandardizationStats stats;
    PcBasis basis;
    std::vector<WeightGpSpec> specs;
    std::vector<WeightData> data;
    std::vector<Chain> chains;  // empty when conditioned on fixed theta
    std::vector<WeightState> states;
    std::vector<std::uint64_t> seeds;
};

struct NonsepPosterior {
    NonsepConfig config;
    std::vector<NonsepLevel> levels;
    std::vector<std::string> warnings;

    [[nodiscard]] int num_levels() const { return static_cast<int>(levels.size()); }
    [[nodiscard]] int num_outputs() const { return levels.empty() ? 0 : static_cast<int>(levels[0].basis.K.rows()); }
};

/// Standardization, PCA and weight data at every level, without any theta.
NonsepPosterior prepare(const MultifidelityDataset& data, const NonsepConfig& config);

/// One Metropolis-Hastings chain per (level, component), seeded from (settings.seed, level,
/// component) and run on up to `threads` workers, then the MAP state of each weight GP.
NonsepPosterior fit(const MultifidelityDataset& data, const NonsepConfig& config, const ChainSettings& settings,
                    int threads = 1);

/// Posterior with theta fixed per (level, component).
NonsepPosterior condition(const MultifidelityDataset& data, const NonsepConfig& config,
                          const std::vector<std::vector<CorrelationParams>>& thetas);

/// Copy keeping the first p_t components at each level (same chains and states).
NonsepPosterior truncate(const NonsepPosterior& posterior, const std::vector<int>& components);

/// Weight locations propagated through the levels (one vector per level).
std::vector<Vector> predict_weight_means(const Eigen::Ref<const Vector>& x0, const NonsepPosterior& posterior);

/// Top-level outputs rebuilt from the mean weights without truncation noise.
Vector predict_mean(const Eigen::Ref<const Vector>& x0, const NonsepPosterior& posterior);

/// Joint draws of the top-level weights (count x p_m), sampling every level in turn.
Matrix sample_weights(const Eigen::Ref<const Vector>& x0, const NonsepPosterior& posterior, Rng& rng, int count);

/// y = center + scale (K w + sum over discarded l of k_l eps_l) with eps_l ~ Normal(0, discarded
/// variance l), one row per weight sample. Deterministic given seed.
Matrix reconstruct(const Matrix& weight_samples, const PcBasis& basis, const StandardizationStats& stats,
                   std::uint64_t seed);

struct SummaryOptions {
    int samples_per_input = 1000;
    std::uint64_t seed = 1;
    std::vector<int> mask;
    int threads = 1;
};

PredictiveSummary predictive_summary(const Eigen::Ref<const Matrix>& X0, const NonsepPosterior& posterior,
                                     const SummaryOptions& options, std::vector<std::string>* warnings = nullptr);

struct SweepRow {
    int p = 0;
    double rmspe_cokriging = 0.0;
    double rmspe_kriging = 0.0;
};

/// RMSPE of the mean prediction for each p in p_values, for cokriging on all levels and for
/// kriging on the top level alone. With fixed matched predictors a component's chain does not
/// depend on how many components are kept, so the chains are fitted once at the largest p and
/// shared; auto-selected predictors force a refit per p.
std::vector<SweepRow> sweep_components(const MultifidelityDataset& data, const NonsepConfig& config,
                                       const std::vector<int>& p_values, const ChainSettings& settings,
                                       const Matrix& X_test, const Matrix& Y_test, int threads = 1);

}  // namespace mfgp::nonsep
