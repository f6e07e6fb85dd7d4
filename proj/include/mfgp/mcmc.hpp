#pragma once

#include "mfgp/kernel.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace mfgp {

/// log density of the half-Cauchy(0, scale) distribution; -inf for theta <= 0.
double half_cauchy_logpdf(double theta, double scale);

/// log density of the half-normal(0, scale) distribution; -inf for theta <= 0.
double half_normal_logpdf(double theta, double scale);

struct ChainSettings {
    int iterations = 3000;
    int burn_in = 300;
    int thin = 1;
    // Per-parameter standard deviations of the Gaussian step on log(theta). Empty means 0.3 each.
    std::vector<double> proposal_scales;
    std::uint64_t seed = 1;
    // Scale the step size during burn-in toward 30% acceptance, then freeze it.
    bool adapt = true;

    void validate() const;
    [[nodiscard]] int retained() const { return (iterations - burn_in) / thin; }

    static ChainSettings desk();         // 3,000 iterations, 300 burn-in
    static ChainSettings paper_sep();    // 30,000 iterations, 3,000 burn-in
    static ChainSettings paper_nonsep(); // 60,000 iterations, 6,000 burn-in
};

struct Chain {
    Matrix samples;                // retained x parameters
    Vector log_densities;          // target value per retained sample
    std::vector<char> accepted;    // whether the move at each retained iteration was accepted
    std::vector<char> decisions;   // accept decision at every post-burn-in iteration
    double acceptance_rate = 0.0;  // mean of `decisions`
    double step_factor = 1.0;      // multiplier on proposal scales after adaptation
    int map_index = -1;

    [[nodiscard]] int size() const { return static_cast<int>(samples.rows()); }
};

using LogTarget = std::function<double(const Vector&)>;

/// Random-walk Metropolis-Hastings on the positive orthant. Proposals are Gaussian steps on
/// log(theta); the acceptance ratio carries the log-Jacobian so the chain targets log_target
/// as a density in theta. A log_target that throws or returns NaN counts as -inf.
Chain random_walk_mh(const LogTarget& log_target, const Vector& init, const ChainSettings& settings);

/// Retained sample with the largest recorded log density.
Vector map_estimate(const Chain& chain);

/// Effective sample size of one parameter trace (initial positive sequence estimator).
double effective_sample_size(const Eigen::Ref<const Vector>& trace);

}  // namespace mfgp
