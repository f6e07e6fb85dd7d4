#include "mfgp/mcmc.hpp"

#include "mfgp/error.hpp"
#include "mfgp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mfgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTargetAcceptance = 0.3;
constexpr double kAdaptGain = 1.5;
constexpr double kAdaptDecay = 0.6;

double safe_eval(const LogTarget& f, const Vector& theta) {
    try {
        const double v = f(theta);
        return std::isnan(v) ? kNegInf : v;
    } catch (const ConditioningError&) {
        return kNegInf;
    } catch (const NumericalError&) {
        return kNegInf;
    }
}

}  // namespace

double half_cauchy_logpdf(double theta, double scale) {
    if (!(scale > 0.0)) {
        throw InvalidArgument("half_cauchy_logpdf: scale must be positive");
    }
    if (!(theta > 0.0)) {
        return kNegInf;
    }
    const double z = theta / scale;
    return std::log(2.0 / (std::numbers::pi * scale)) - std::log1p(z * z);
}

double half_normal_logpdf(double theta, double scale) {
    if (!(scale > 0.0)) {
        throw InvalidArgument("half_normal_logpdf: scale must be positive");
    }
    if (!(theta > 0.0)) {
        return kNegInf;
    }
    const double z = theta / scale;
    return 0.5 * std::log(2.0 / std::numbers::pi) - std::log(scale) - 0.5 * z * z;
}

void ChainSettings::validate() const {
    if (iterations < 1) {
        throw InvalidArgument("chain settings: iterations must be positive");
    }
    if (burn_in < 0 || burn_in >= iterations) {
        throw InvalidArgument("chain settings: burn_in must satisfy 0 <= burn_in < iterations");
    }
    if (thin < 1) {
        throw InvalidArgument("chain settings: thin must be at least 1");
    }
    for (double s : proposal_scales) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw InvalidArgument("chain settings: proposal scales must be nonnegative");
        }
    }
}

ChainSettings ChainSettings::desk() {
    ChainSettings s;
    s.iterations = 3000;
    s.burn_in = 300;
    return s;
}

ChainSettings ChainSettings::paper_sep() {
    ChainSettings s;
    s.iterations = 30000;
    s.burn_in = 3000;
    return s;
}

ChainSettings ChainSettings::paper_nonsep() {
    ChainSettings s;
    s.iterations = 60000;
    s.burn_in = 6000;
    return s;
}

Chain random_walk_mh(const LogTarget& log_target, const Vector& init, const ChainSettings& settings) {
    settings.validate();
    const Eigen::Index dim = init.size();
    if (dim == 0) {
        throw InvalidArgument("random_walk_mh: empty initial state");
    }
    if ((init.array() <= 0.0).any()) {
        throw InvalidArgument("random_walk_mh: initial state must be positive");
    }
    Vector scales = Vector::Constant(dim, 0.3);
    if (!settings.proposal_scales.empty()) {
        if (static_cast<Eigen::Index>(settings.proposal_scales.size()) != dim) {
            throw InvalidArgument("random_walk_mh: proposal scale count does not match the state");
        }
        scales = Eigen::Map<const Vector>(settings.proposal_scales.data(), dim);
    }

    Vector current = init;
    double current_lp = safe_eval(log_target, current);
    if (!std::isfinite(current_lp)) {
        throw NumericalError("random_walk_mh: log target is not finite at the initial state");
    }

    Rng rng(settings.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Chain chain;
    const int kept = settings.retained();
    chain.samples.resize(kept, dim);
    chain.log_densities.resize(kept);
    chain.accepted.reserve(kept);
    chain.decisions.reserve(settings.iterations - settings.burn_in);

    double log_factor = 0.0;
    int row = 0;
    Vector step(dim);
    Vector proposal(dim);
    for (int it = 0; it < settings.iterations; ++it) {
        const double factor = std::exp(log_factor);
        for (Eigen::Index k = 0; k < dim; ++k) {
            step[k] = scales[k] * factor * normal(rng);
            proposal[k] = current[k] * std::exp(step[k]);
        }
        const double u = unif(rng);
        const double proposal_lp = safe_eval(log_target, proposal);
        // Jacobian of theta = exp(phi): log|dtheta/dphi| = sum(phi).
        const double log_ratio = proposal_lp - current_lp + step.sum();
        const bool accept = std::isfinite(proposal_lp) && std::log(u) < log_ratio;
        if (accept) {
            current = proposal;
            current_lp = proposal_lp;
        }

        if (it < settings.burn_in) {
            if (settings.adapt) {
                const double alpha = std::isfinite(proposal_lp) ? std::exp(std::min(0.0, log_ratio)) : 0.0;
                log_factor += kAdaptGain * (alpha - kTargetAcceptance) /
                              std::pow(static_cast<double>(it + 1), kAdaptDecay);
            }
            continue;
        }
        chain.decisions.push_back(accept ? 1 : 0);
        if ((it - settings.burn_in + 1) % settings.thin == 0 && row < kept) {
            chain.samples.row(row) = current.transpose();
            chain.log_densities[row] = current_lp;
            chain.accepted.push_back(accept ? 1 : 0);
            ++row;
        }
    }

    int accepts = 0;
    for (char c : chain.decisions) {
        accepts += c;
    }
    chain.acceptance_rate = chain.decisions.empty() ? 0.0 : static_cast<double>(accepts) / chain.decisions.size();
    chain.step_factor = std::exp(log_factor);
    if (kept > 0) {
        Eigen::Index best = 0;
        chain.log_densities.maxCoeff(&best);
        chain.map_index = static_cast<int>(best);
    }
    return chain;
}

Vector map_estimate(const Chain& chain) {
    if (chain.size() == 0) {
        throw InvalidArgument("map_estimate: empty chain");
    }
    Eigen::Index best = 0;
    chain.log_densities.maxCoeff(&best);
    return chain.samples.row(best).transpose();
}

double effective_sample_size(const Eigen::Ref<const Vector>& trace) {
    const Eigen::Index n = trace.size();
    if (n < 4) {
        return static_cast<double>(n);
    }
    const double mean = trace.mean();
    const Vector c = trace.array() - mean;
    const double var = c.squaredNorm() / n;
    if (var <= 0.0) {
        return static_cast<double>(n);
    }
    auto rho = [&](Eigen::Index lag) {
        return c.head(n - lag).dot(c.tail(n - lag)) / (n * var);
    };
    // Geyer: sum consecutive pairs while positive.
    double sum = 0.0;
    const Eigen::Index max_lag = std::min<Eigen::Index>(n, 4000);
    for (Eigen::Index k = 0; 2 * k + 1 < max_lag; ++k) {
        const double pair = rho(2 * k) + rho(2 * k + 1);
        if (pair <= 0.0) {
            break;
        }
        sum += pair;
    }
    const double tau = std::max(1.0, 2.0 * sum - 1.0);
    return n / tau;
}

}  // namespace mfgp
