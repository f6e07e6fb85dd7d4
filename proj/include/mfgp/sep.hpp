#pragma once

#include "mfgp/dataset.hpp"
#include "mfgp/design.hpp"
#include "mfgp/kernel.hpp"
#include "mfgp/mcmc.hpp"
#include "mfgp/rng.hpp"
#include "mfgp/summary.hpp"

#include <Eigen/Sparse>

#include <cstdint>
#include <string>
#include <vector>

namespace mfgp::sep {

enum class MeanBasis { constant, linear };

std::string to_string(MeanBasis basis);
MeanBasis mean_basis_from_string(const std::string& name);

/// Basis rows h(x): [1] for constant, [1, x] for linear.
Matrix basis_matrix(const Eigen::Ref<const Matrix>& X, MeanBasis basis);
Vector basis_vector(const Eigen::Ref<const Vector>& x0, MeanBasis basis);
int basis_size(MeanBasis basis, int input_dim);

struct SepConfig {
    int m = 2;
    std::vector<double> gamma;           // m - 1 fixed scale discrepancies
    std::vector<MeanBasis> basis;        // per level
    int neighbors_p = 1;
    std::vector<double> tau2;            // per level
    std::vector<double> eta;             // per level
    std::vector<double> lambda;          // per level
    std::vector<std::vector<double>> half_cauchy_scales;  // per level, one per input dimension
    double jitter = kDefaultJitter;
    double smoothness = kDefaultSmoothness;

    /// gamma = 1, constant basis, p = 1, tau2 = 1, eta = 4, lambda = 2, and half-Cauchy
    /// scales equal to half of each input range.
    static SepConfig defaults(int m, const std::vector<Bound>& input_bounds);

    /// Checks sizes and positivity, and that n_t + eta_t - q_t > 2 at every level.
    void validate(const MultifidelityDataset& data) const;
    [[nodiscard]] double dof(int level, int n, int input_dim) const;
    [[nodiscard]] int q(int level, int input_dim) const { return basis_size(basis.at(level), input_dim); }
};

/// Training quantities of one level. `level` is zero-based.
struct SepLevelData {
    int level = 0;
    Matrix X;       // n x d
    Matrix Y;       // n x N
    Matrix H;       // n x q basis
    Matrix U;       // n x N outputs of the level below at X (empty at level 0)
    Matrix target;  // Y - gamma U
    double gamma = 1.0;
    MeanBasis basis = MeanBasis::constant;
    std::vector<int> parent_rows;

    [[nodiscard]] int n() const { return static_cast<int>(X.rows()); }
    [[nodiscard]] int num_outputs() const { return static_cast<int>(Y.cols()); }
    /// Augmented regressors [H] at level 0, [H, U] above.
    [[nodiscard]] Matrix F() const;
};

SepLevelData make_level_data(const MultifidelityDataset& data, int level, const SepConfig& config);

/// Processing order and neighbor sets. sets[j] holds ordering positions < j; order[j] is the
/// output column handled at position j.
struct LocationNeighbors {
    std::vector<int> order;
    std::vector<std::vector<int>> sets;
    int p = 0;

    [[nodiscard]] int size() const { return static_cast<int>(order.size()); }
    [[nodiscard]] bool independent() const;
};

LocationNeighbors location_neighbors(const SpatialOrdering& ordering, int p);
/// Identity order where position j conditions on positions max(0, j - p) .. j - 1.
LocationNeighbors sequential_neighbors(int N, int p);
/// Maximin ordering of the locations rescaled to the unit box, with p nearest earlier neighbors.
/// An empty location table orders the outputs by index.
LocationNeighbors neighbors_for_locations(const Matrix& locations, int N, int p);

struct GlsEstimates {
    Matrix beta_hat;         // q x N
    Matrix S;                // whitened residual L^{-1}(Y - F B_hat), n x N
    Matrix H_white;          // L^{-1} H
    Eigen::LLT<Matrix> gram; // H^T R^{-1} H
    double log_det_gram = 0.0;
};

/// Generalized least squares for the mean coefficients. Throws InvalidArgument when the basis
/// is rank deficient at the design.
GlsEstimates gls_estimates(const SepLevelData& level, const CorrelationMatrix& R);

/// B_hat stacked as [beta_hat; gamma I] above level 0.
Matrix stacked_coefficients(const SepLevelData& level, const Matrix& beta_hat);

/// Conjugate posterior of the modified Cholesky factors, indexed by ordering position.
struct CholeskyFactors {
    std::vector<Vector> a_hat;
    std::vector<Matrix> V_hat;  // 0 x 0 when the neighbor set is empty
    Vector d_hat;
    std::vector<double> log_det_V;
    double dof = 0.0;
};

CholeskyFactors posterior_ad(const Eigen::Ref<const Matrix>& S, const LocationNeighbors& neighbors, double tau2,
                             double lambda, double dof);

/// Unnormalized log posterior of theta at one level.
double log_posterior_theta(const SepLevelData& level, const LocationNeighbors& neighbors,
                           const CorrelationParams& theta, const SepConfig& config);

/// Everything prediction needs at one level for a fixed theta.
struct SepLevelState {
    CorrelationParams theta;
    CorrelationMatrix R;
    GlsEstimates gls;
    CholeskyFactors factors;
    double log_likelihood = 0.0;  // theta-dependent terms without the prior
    double log_prior = 0.0;

    [[nodiscard]] double log_posterior() const { return log_likelihood + log_prior; }
};

SepLevelState prepare_level(const SepLevelData& level, const LocationNeighbors& neighbors,
                            const CorrelationParams& theta, const SepConfig& config);

// Dense helpers over positions (ordering sequence) for small problems.

/// Strictly lower-triangular A (sparse) and diagonal D of a modified Cholesky decomposition.
struct ModifiedCholesky {
    Eigen::SparseMatrix<double> A;
    Vector D;
};

/// Column regressions of a dense covariance: a_j = Sigma_CC^{-1} Sigma_Cj, d_j = Sigma_jj - Sigma_jC a_j.
ModifiedCholesky modified_cholesky(const Matrix& sigma, const LocationNeighbors& neighbors);
/// Posterior means A_hat and d_hat / (dof - 2).
ModifiedCholesky posterior_mean_factors(const CholeskyFactors& factors, const LocationNeighbors& neighbors);
/// Omega = (I - A)^T D^{-1} (I - A).
Matrix reconstruct_precision(const ModifiedCholesky& factors);
/// Sigma = (I - A)^{-1} D (I - A)^{-T}.
Matrix reconstruct_covariance(const ModifiedCholesky& factors);

/// Log density of vec(Y) ~ Normal(vec(M), Sigma kron R) by direct dense evaluation.
double matrix_normal_logpdf(const Matrix& Y, const Matrix& M, const Matrix& R, const Matrix& sigma);
/// The same density as a product of conditional column densities
/// Y_j | Y_C ~ Normal(M_j + (Y_C - M_C) a_j, d_j R). Columns of Y and M are in position order.
double factorized_matrix_normal_logpdf(const Matrix& Y, const Matrix& M, const Matrix& R,
                                       const ModifiedCholesky& factors, const LocationNeighbors& neighbors);

/// Location parameters mu_j = M_j + (y_C - M_C)^T a_hat_j given values y for the earlier positions.
Vector sequential_locations(const LocationNeighbors& neighbors, const CholeskyFactors& factors,
                            const Eigen::Ref<const Vector>& M, const Eigen::Ref<const Vector>& y);
/// Squared Student-t scales d_hat_j (R0 + e_C^T V_hat_j e_C) / dof with e = y - M.
Vector sequential_scales(const LocationNeighbors& neighbors, const CholeskyFactors& factors,
                         const Eigen::Ref<const Vector>& M, const Eigen::Ref<const Vector>& y, double R0);

struct SepLevelFit {
    SepLevelData data;
    Chain chain;
    CorrelationParams theta_map;
    SepLevelState state;  // at theta_map
    std::uint64_t seed = 0;
};

struct SepPosterior {
    SepConfig config;
    LocationNeighbors neighbors;
    std::vector<SepLevelFit> levels;
    std::vector<std::string> warnings;

    [[nodiscard]] int num_levels() const { return static_cast<int>(levels.size()); }
    [[nodiscard]] int num_outputs() const { return levels.empty() ? 0 : levels[0].data.num_outputs(); }
};

/// One Metropolis-Hastings chain per level (run concurrently on up to `threads` workers),
/// each seeded from (settings.seed, level), then the MAP state of every level.
SepPosterior fit(const MultifidelityDataset& data, const SepConfig& config, const ChainSettings& settings,
                 int threads = 1);

/// Posterior with theta fixed per level; chains are left empty.
SepPosterior condition(const MultifidelityDataset& data, const SepConfig& config,
                       const std::vector<CorrelationParams>& thetas);

/// Predictive mean and correlation at one level: M(x0) given the level-below value, R0(x0).
struct LevelMoments {
    Vector base;  // M(x0) minus the gamma * y_{t-1}(x0) term
    double R0 = 0.0;
};

LevelMoments level_moments(const SepLevelData& level, const SepLevelState& state, const Eigen::Ref<const Vector>& x0);

/// Sequential mean propagation at every level (plug-in state).
std::vector<Vector> predict_mean(const Eigen::Ref<const Vector>& x0, const SepPosterior& posterior);

/// Joint draws across levels: one count x N matrix per level.
std::vector<Matrix> predict_sample(const Eigen::Ref<const Vector>& x0, const SepPosterior& posterior,
                                   std::uint64_t seed, int count);

struct SummaryOptions {
    int samples_per_input = 1000;
    std::uint64_t seed = 1;
    std::vector<int> mask;  // aggregation region; empty means all locations
    int threads = 1;
    // 0 uses the MAP plug-in state. K > 0 uses K evenly spaced retained chain draws per level;
    // sample s uses draw s mod K.
    int chain_draws = 0;
};

/// Top-level per-location and aggregated summaries at each row of X0.
PredictiveSummary predictive_summary(const Eigen::Ref<const Matrix>& X0, const SepPosterior& posterior,
                                     const SummaryOptions& options, std::vector<std::string>* warnings = nullptr);

}  // namespace mfgp::sep
