#include "mfgp/nonsep.hpp"

#include "mfgp/error.hpp"
#include "mfgp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mfgp::nonsep {

std::string to_string(Scaling scaling) {
    return scaling == Scaling::global ? "global" : "per_location";
}

Scaling scaling_from_string(const std::string& name) {
    if (name == "global") {
        return Scaling::global;
    }
    if (name == "per_location") {
        return Scaling::per_location;
    }
    throw ConfigError("unknown scaling '" + name + "' (expected global or per_location)");
}

std::pair<Matrix, StandardizationStats> standardize(const Matrix& Y, Scaling scaling, int level) {
    if (Y.rows() < 2) {
        throw InvalidArgument("standardize: need at least two rows");
    }
    StandardizationStats st;
    st.level = level;
    st.scaling = scaling;
    st.center = Y.colwise().mean().transpose();
    Matrix Yc = Y.rowwise() - st.center.transpose();
    const double dof = static_cast<double>(Y.rows() - 1);
    if (scaling == Scaling::global) {
        st.scale.resize(1);
        st.scale[0] = std::max(kScaleFloor, std::sqrt(Yc.squaredNorm() / (dof * static_cast<double>(Y.cols()))));
        Yc /= st.scale[0];
    } else {
        st.scale = (Yc.colwise().squaredNorm().transpose() / dof).cwiseSqrt().cwiseMax(kScaleFloor);
        Yc = Yc * st.scale.cwiseInverse().asDiagonal();
    }
    return {std::move(Yc), std::move(st)};
}

Matrix unstandardize(const Matrix& Yc, const StandardizationStats& stats) {
    Matrix Y = stats.scale.size() == 1 ? Matrix(Yc * stats.scale[0]) : Matrix(Yc * stats.scale.asDiagonal());
    Y.rowwise() += stats.center.transpose();
    return Y;
}

PcBasis pca(const Matrix& Yc, int p) {
    const auto r = static_cast<int>(std::min(Yc.rows(), Yc.cols()));
    if (p < 1 || p > r) {
        throw InvalidArgument("pca: component count " + std::to_string(p) + " is outside [1, " + std::to_string(r) +
                              "]");
    }
    Eigen::BDCSVD<Matrix> svd(Yc, Eigen::ComputeThinV);
    const Vector s = svd.singularValues();
    const Matrix& V = svd.matrixV();
    PcBasis b;
    const double total = s.squaredNorm();
    b.explained = total > 0.0 ? Vector(s.array().square() / total) : Vector(Vector::Zero(r));
    b.K = V.leftCols(p);
    b.W = Yc * b.K;
    b.discarded_K = V.middleCols(p, r - p);
    const double dof = static_cast<double>(std::max<Eigen::Index>(1, Yc.rows() - 1));
    b.discarded_variances = s.segment(p, r - p).array().square() / dof;
    return b;
}

double explained_through(const PcBasis& basis, int k) {
    k = std::clamp(k, 0, static_cast<int>(basis.explained.size()));
    return basis.explained.head(k).sum();
}

namespace {

double log_prior(const CorrelationParams& theta, PriorKind prior, const std::vector<double>& scales) {
    if (static_cast<int>(scales.size()) != theta.dim()) {
        throw InvalidArgument("weight prior: scale count does not match theta");
    }
    double lp = 0.0;
    for (int i = 0; i < theta.dim(); ++i) {
        lp += prior == PriorKind::half_cauchy ? half_cauchy_logpdf(theta.ranges[i], scales[i])
                                              : half_normal_logpdf(theta.ranges[i], scales[i]);
    }
    return lp;
}

std::string describe(const CorrelationParams& theta) {
    std::ostringstream os;
    os.precision(6);
    os << "theta = (";
    for (int i = 0; i < theta.dim(); ++i) {
        os << (i ? ", " : "") << theta.ranges[i];
    }
    os << ")";
    return os.str();
}

}  // namespace

WeightState prepare_weight(const WeightData& data, const CorrelationParams& theta, double jitter) {
    theta.validate();
    if (data.w.size() != data.n() || data.P.rows() != data.n()) {
        throw InvalidArgument("prepare_weight: inconsistent weight data shapes");
    }
    if (data.dof() < 1) {
        throw InvalidArgument("prepare_weight: more predictors than inputs");
    }
    WeightState s;
    s.theta = theta;
    s.R = correlation_matrix(data.X, theta, jitter);
    s.dof = data.dof();
    const Vector w_white = s.R.whiten_vector(data.w);
    Vector resid_white = w_white;
    if (data.k() > 0) {
        s.P_white = s.R.whiten(data.P);
        const Matrix gram = s.P_white.transpose() * s.P_white;
        s.gram.compute(gram);
        bool ok = s.gram.info() == Eigen::Success;
        if (ok) {
            const Vector diag = Matrix(s.gram.matrixL()).diagonal();
            ok = diag.allFinite() && diag.minCoeff() > 1e-10 * std::sqrt(gram.diagonal().maxCoeff());
        }
        if (!ok) {
            throw InvalidArgument("weight predictors are rank deficient");
        }
        s.log_det_gram = 2.0 * Matrix(s.gram.matrixL()).diagonal().array().log().sum();
        s.beta = s.gram.solve(s.P_white.transpose() * w_white);
        resid_white -= s.P_white * s.beta;
    } else {
        s.beta.resize(0);
        s.P_white.resize(data.n(), 0);
    }
    s.Q = resid_white.squaredNorm();
    s.alpha = s.R.lower().transpose().triangularView<Eigen::Upper>().solve(resid_white);
    return s;
}

double weight_log_posterior(const WeightData& data, const CorrelationParams& theta, PriorKind prior,
                            const std::vector<double>& prior_scales, double jitter) {
    const WeightState s = prepare_weight(data, theta, jitter);
    if (!(s.Q > 0.0) || !std::isfinite(s.Q)) {
        throw NumericalError("weight residual quadratic form is not positive at " + describe(theta));
    }
    const double value = -0.5 * s.R.log_det() - 0.5 * s.log_det_gram - 0.5 * s.dof * std::log(s.Q) +
                         log_prior(theta, prior, prior_scales);
    if (std::isnan(value)) {
        throw NumericalError("weight log posterior is NaN at " + describe(theta));
    }
    return value;
}

WeightPredictive predict_weight(const WeightData& data, const WeightState& state, const Eigen::Ref<const Vector>& x0,
                                const Eigen::Ref<const Vector>& predictors) {
    if (predictors.size() != data.k()) {
        throw InvalidArgument("predict_weight: predictor count does not match the weight model");
    }
    if (state.dof <= 1) {
        throw InvalidArgument("predict_weight: degrees of freedom must exceed 1");
    }
    WeightPredictive out;
    out.dof = state.dof;
    const double sigma2 = state.Q / static_cast<double>(state.dof);
    for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
        if (data.X.row(i).transpose() == x0) {
            out.location = data.w[i] + (data.k() > 0 ? (predictors - data.P.row(i).transpose()).dot(state.beta) : 0.0);
            // A different predictor value at a training input still leaves GLS uncertainty.
            double rstar = 0.0;
            if (data.k() > 0) {
                const Vector g = predictors - data.P.row(i).transpose();
                rstar = g.dot(state.gram.solve(g));
            }
            out.scale2 = sigma2 * rstar;
            return out;
        }
    }
    const Vector r = cross_correlation_vector(x0, data.X, state.theta);
    const Vector v = state.R.whiten_vector(r);
    double rstar = 1.0 - v.squaredNorm();
    out.location = r.dot(state.alpha);
    if (data.k() > 0) {
        out.location += predictors.dot(state.beta);
        const Vector g = predictors - state.P_white.transpose() * v;
        rstar += g.dot(state.gram.solve(g));
    }
    out.scale2 = sigma2 * std::max(0.0, rstar);
    return out;
}

NonsepConfig NonsepConfig::defaults(int m, const std::vector<Bound>& input_bounds, int p) {
    NonsepConfig c;
    c.m = m;
    c.components.assign(m, p);
    std::vector<double> scales;
    for (const auto& b : input_bounds) {
        scales.push_back(0.5 * (b.upper - b.lower));
    }
    c.prior_scales.assign(m, scales);
    return c;
}

std::vector<double> NonsepConfig::scales_for(int level, int component) const {
    auto it = scale_overrides.find({level, component});
    return it != scale_overrides.end() ? it->second : prior_scales.at(level);
}

void NonsepConfig::validate(const MultifidelityDataset& data) const {
    auto fail = [](const std::string& msg) { throw ConfigError("nonsep config: " + msg); };
    if (m < 1 || data.num_levels() != m) {
        fail("m must match the dataset level count (" + std::to_string(data.num_levels()) + ")");
    }
    if (static_cast<int>(components.size()) != m || static_cast<int>(prior_scales.size()) != m) {
        fail("components and prior_scales need one entry per level");
    }
    if (!(jitter >= 0.0) || !(smoothness > 0.0)) {
        fail("jitter must be nonnegative and smoothness positive");
    }
    if (!(predictor_threshold > 0.0 && predictor_threshold < 1.0)) {
        fail("predictor_threshold must lie in (0, 1)");
    }
    const int d = data.input_dim();
    const int N = data.num_outputs();
    for (int t = 0; t < m; ++t) {
        const int n = static_cast<int>(data.levels[t].X.rows());
        const std::string lv = " at level " + std::to_string(t + 1);
        if (components[t] < 1 || components[t] > std::min(n, N)) {
            fail("component count " + std::to_string(components[t]) + lv + " is outside [1, " +
                 std::to_string(std::min(n, N)) + "]");
        }
        if (static_cast<int>(prior_scales[t].size()) != d) {
            fail("prior_scales" + lv + " needs one entry per input dimension");
        }
        for (double q : prior_scales[t]) {
            if (!(q > 0.0)) {
                fail("prior scales must be positive" + lv);
            }
        }
        // The largest predictor set is every level-below component.
        const int kmax = t == 0 ? 0 : (auto_predictors ? components[t - 1] : 1);
        if (n - kmax <= 2) {
            fail("n - predictor count must exceed 2" + lv);
        }
    }
    for (const auto& [key, scales] : scale_overrides) {
        if (key.first < 0 || key.first >= m || key.second < 0 || key.second >= components[key.first] ||
            static_cast<int>(scales.size()) != d) {
            fail("scale override for level " + std::to_string(key.first + 1) + ", component " +
                 std::to_string(key.second + 1) + " is invalid");
        }
    }
}

namespace {

double correlation(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
    const Vector ac = a.array() - a.mean();
    const Vector bc = b.array() - b.mean();
    const double den = std::sqrt(ac.squaredNorm() * bc.squaredNorm());
    return den > 0.0 ? ac.dot(bc) / den : 0.0;
}

}  // namespace

NonsepPosterior prepare(const MultifidelityDataset& data, const NonsepConfig& config) {
    config.validate(data);
    NonsepPosterior post;
    post.config = config;
    post.levels.resize(config.m);
    for (int t = 0; t < config.m; ++t) {
        auto& lv = post.levels[t];
        const auto& X = data.levels[t].X;
        auto [Yc, stats] = standardize(data.levels[t].Y, config.scaling, t + 1);
        lv.stats = std::move(stats);
        lv.basis = pca(Yc, config.components[t]);
        const int p = config.components[t];
        lv.specs.resize(p);
        lv.data.resize(p);
        Matrix below;
        if (t > 0) {
            const Matrix& Wb = post.levels[t - 1].basis.W;
            below.resize(X.rows(), Wb.cols());
            for (Eigen::Index i = 0; i < X.rows(); ++i) {
                below.row(i) = Wb.row(data.levels[t].parent_rows.at(i));
            }
        }
        for (int l = 0; l < p; ++l) {
            auto& spec = lv.specs[l];
            spec.level = t;
            spec.component = l;
            spec.prior = t == 0 ? PriorKind::half_cauchy : PriorKind::half_normal;
            spec.prior_scales = config.scales_for(t, l);
            spec.theta = CorrelationParams(spec.prior_scales, config.smoothness);
            if (t > 0) {
                if (config.auto_predictors) {
                    for (int c = 0; c < below.cols(); ++c) {
                        if (std::abs(correlation(lv.basis.W.col(l), below.col(c))) > config.predictor_threshold) {
                            spec.predictors.push_back(c);
                        }
                    }
                }
                if (spec.predictors.empty() && l < below.cols()) {
                    spec.predictors.push_back(l);
                }
            }
            auto& wd = lv.data[l];
            wd.X = X;
            wd.w = lv.basis.W.col(l);
            wd.P.resize(X.rows(), static_cast<Eigen::Index>(spec.predictors.size()));
            for (std::size_t c = 0; c < spec.predictors.size(); ++c) {
                wd.P.col(static_cast<Eigen::Index>(c)) = below.col(spec.predictors[c]);
            }
        }
    }
    return post;
}

NonsepPosterior fit(const MultifidelityDataset& data, const NonsepConfig& config, const ChainSettings& settings,
                    int threads) {
    settings.validate();
    NonsepPosterior post = prepare(data, config);
    std::vector<std::pair<int, int>> tasks;
    for (int t = 0; t < post.num_levels(); ++t) {
        auto& lv = post.levels[t];
        const int p = lv.basis.p();
        lv.chains.resize(p);
        lv.states.resize(p);
        lv.seeds.resize(p);
        for (int l = 0; l < p; ++l) {
            lv.seeds[l] = derive_seed(settings.seed, {0x7e5ULL, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(l)});
            tasks.emplace_back(t, l);
        }
    }
    parallel_for(static_cast<int>(tasks.size()), threads, [&](int i) {
        const auto [t, l] = tasks[i];
        auto& lv = post.levels[t];
        auto& spec = lv.specs[l];
        const auto& wd = lv.data[l];
        const double nu = config.smoothness;
        LogTarget target = [&](const Vector& theta) {
            return weight_log_posterior(wd, CorrelationParams(theta, nu), spec.prior, spec.prior_scales, config.jitter);
        };
        ChainSettings cs = settings;
        cs.seed = lv.seeds[l];
        lv.chains[l] = random_walk_mh(target, spec.theta.as_vector(), cs);
        spec.theta = CorrelationParams(map_estimate(lv.chains[l]), nu);
        lv.states[l] = prepare_weight(wd, spec.theta, config.jitter);
    });
    for (const auto& lv : post.levels) {
        for (const auto& ch : lv.chains) {
            if (ch.acceptance_rate < 0.05 || ch.acceptance_rate > 0.95) {
                std::ostringstream os;
                os << "weight chain acceptance rate " << ch.acceptance_rate << " is outside [0.05, 0.95]";
                post.warnings.push_back(os.str());
            }
        }
    }
    return post;
}

NonsepPosterior condition(const MultifidelityDataset& data, const NonsepConfig& config,
                          const std::vector<std::vector<CorrelationParams>>& thetas) {
    NonsepPosterior post = prepare(data, config);
    if (static_cast<int>(thetas.size()) != post.num_levels()) {
        throw InvalidArgument("condition: need theta lists for every level");
    }
    for (int t = 0; t < post.num_levels(); ++t) {
        auto& lv = post.levels[t];
        if (static_cast<int>(thetas[t].size()) != lv.basis.p()) {
            throw InvalidArgument("condition: need one theta per component");
        }
        lv.states.resize(lv.basis.p());
        for (int l = 0; l < lv.basis.p(); ++l) {
            lv.specs[l].theta = thetas[t][l];
            lv.states[l] = prepare_weight(lv.data[l], thetas[t][l], config.jitter);
        }
    }
    return post;
}

NonsepPosterior truncate(const NonsepPosterior& posterior, const std::vector<int>& components) {
    if (static_cast<int>(components.size()) != posterior.num_levels()) {
        throw InvalidArgument("truncate: need one component count per level");
    }
    NonsepPosterior out = posterior;
    for (int t = 0; t < out.num_levels(); ++t) {
        auto& lv = out.levels[t];
        const int p_old = lv.basis.p();
        const int p = components[t];
        if (p < 1 || p > p_old) {
            throw InvalidArgument("truncate: component count must lie in [1, " + std::to_string(p_old) + "]");
        }
        const int r = p_old + static_cast<int>(lv.basis.discarded_K.cols());
        Matrix dK(lv.basis.K.rows(), r - p);
        dK << lv.basis.K.rightCols(p_old - p), lv.basis.discarded_K;
        Vector dv(r - p);
        const Vector kept_var = lv.basis.W.rightCols(p_old - p).colwise().squaredNorm().transpose() /
                                static_cast<double>(std::max<Eigen::Index>(1, lv.basis.W.rows() - 1));
        dv << kept_var, lv.basis.discarded_variances;
        lv.basis.K = lv.basis.K.leftCols(p).eval();
        lv.basis.W = lv.basis.W.leftCols(p).eval();
        lv.basis.discarded_K = std::move(dK);
        lv.basis.discarded_variances = std::move(dv);
        lv.specs.resize(p);
        lv.data.resize(p);
        if (!lv.chains.empty()) {
            lv.chains.resize(p);
        }
        if (!lv.states.empty()) {
            lv.states.resize(p);
        }
        if (!lv.seeds.empty()) {
            lv.seeds.resize(p);
        }
        if (t > 0) {
            for (const auto& spec : lv.specs) {
                for (int c : spec.predictors) {
                    if (c >= components[t - 1]) {
                        throw InvalidArgument("truncate: a kept component uses a dropped level-below predictor");
                    }
                }
            }
        }
    }
    out.config.components = components;
    return out;
}

namespace {

Vector gather(const Vector& w, const std::vector<int>& idx) {
    Vector out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = w[idx[i]];
    }
    return out;
}

void require_states(const NonsepPosterior& post) {
    for (const auto& lv : post.levels) {
        if (static_cast<int>(lv.states.size()) != lv.basis.p()) {
            throw InvalidArgument("nonsep posterior has no conditioned weight models");
        }
    }
}

}  // namespace

std::vector<Vector> predict_weight_means(const Eigen::Ref<const Vector>& x0, const NonsepPosterior& posterior) {
    require_states(posterior);
    std::vector<Vector> out;
    Vector below;
    for (const auto& lv : posterior.levels) {
        Vector w(lv.basis.p());
        for (int l = 0; l < lv.basis.p(); ++l) {
            w[l] = predict_weight(lv.data[l], lv.states[l], x0, gather(below, lv.specs[l].predictors)).location;
        }
        out.push_back(w);
        below = std::move(w);
    }
    return out;
}

Vector predict_mean(const Eigen::Ref<const Vector>& x0, const NonsepPosterior& posterior) {
    const Vector w = predict_weight_means(x0, posterior).back();
    const auto& top = posterior.levels.back();
    const Matrix yc = (top.basis.K * w).transpose();
    return unstandardize(yc, top.stats).row(0).transpose();
}

Matrix sample_weights(const Eigen::Ref<const Vector>& x0, const NonsepPosterior& posterior, Rng& rng, int count) {
    if (count <= 0) {
        throw InvalidArgument("sample_weights: count must be positive");
    }
    require_states(posterior);
    const int m = posterior.num_levels();
    Matrix out(count, posterior.levels.back().basis.p());
    Vector below, cur;
    for (int s = 0; s < count; ++s) {
        for (int t = 0; t < m; ++t) {
            const auto& lv = posterior.levels[t];
            cur.resize(lv.basis.p());
            for (int l = 0; l < lv.basis.p(); ++l) {
                const WeightPredictive wp =
                    predict_weight(lv.data[l], lv.states[l], x0, gather(below, lv.specs[l].predictors));
                cur[l] = wp.location + std::sqrt(wp.scale2) * student_t_draw(rng, wp.dof);
            }
            std::swap(below, cur);
        }
        out.row(s) = below.transpose();
    }
    return out;
}

Matrix reconstruct(const Matrix& weight_samples, const PcBasis& basis, const StandardizationStats& stats,
                   std::uint64_t seed) {
    if (weight_samples.cols() != basis.p()) {
        throw InvalidArgument("reconstruct: weight samples need one column per retained component");
    }
    Matrix yc = weight_samples * basis.K.transpose();
    const Eigen::Index nd = basis.discarded_K.cols();
    if (nd > 0) {
        Rng rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        Matrix eps(weight_samples.rows(), nd);
        const Vector sd = basis.discarded_variances.cwiseSqrt();
        for (Eigen::Index s = 0; s < eps.rows(); ++s) {
            for (Eigen::Index l = 0; l < nd; ++l) {
                eps(s, l) = sd[l] * normal(rng);
            }
        }
        yc.noalias() += eps * basis.discarded_K.transpose();
    }
    return unstandardize(yc, stats);
}

PredictiveSummary predictive_summary(const Eigen::Ref<const Matrix>& X0, const NonsepPosterior& posterior,
                                     const SummaryOptions& options, std::vector<std::string>* warnings) {
    if (options.samples_per_input <= 0) {
        throw InvalidArgument("predictive_summary: samples_per_input must be positive");
    }
    if (options.samples_per_input < 100 && warnings) {
        warnings->push_back("fewer than 100 samples per input; interval quantiles are unstable");
    }
    require_states(posterior);
    const int inputs = static_cast<int>(X0.rows());
    const int N = posterior.num_outputs();
    const auto& top = posterior.levels.back();
    PredictiveSummary summary = make_summary(inputs, N, options.samples_per_input, options.mask);
    parallel_for(inputs, options.threads, [&](int i) {
        const Vector x0 = X0.row(i).transpose();
        Rng rng(derive_seed(options.seed, {static_cast<std::uint64_t>(i), 1}));
        const Matrix w = sample_weights(x0, posterior, rng, options.samples_per_input);
        const Matrix y = reconstruct(w, top.basis, top.stats, derive_seed(options.seed, {static_cast<std::uint64_t>(i), 2}));
        summarize_samples(y, predict_mean(x0, posterior), i, summary);
    });
    return summary;
}

namespace {

double rmspe(const Matrix& pred, const Matrix& truth) {
    const Matrix err = pred - truth;
    return (err.array().square().colwise().mean()).sqrt().mean();
}

Matrix mean_predictions(const NonsepPosterior& post, const Matrix& X, int threads) {
    Matrix out(X.rows(), post.num_outputs());
    parallel_for(static_cast<int>(X.rows()), threads,
                 [&](int i) { out.row(i) = predict_mean(X.row(i).transpose(), post).transpose(); });
    return out;
}

}  // namespace

std::vector<SweepRow> sweep_components(const MultifidelityDataset& data, const NonsepConfig& config,
                                       const std::vector<int>& p_values, const ChainSettings& settings,
                                       const Matrix& X_test, const Matrix& Y_test, int threads) {
    if (p_values.empty()) {
        throw InvalidArgument("sweep_components: empty component range");
    }
    const int p_max = *std::max_element(p_values.begin(), p_values.end());
    MultifidelityDataset top = data.top_levels(1);
    top.validate();
    NonsepConfig kcfg = config;
    kcfg.m = 1;
    kcfg.prior_scales = {config.prior_scales.back()};
    kcfg.scale_overrides.clear();
    for (const auto& [key, scales] : config.scale_overrides) {
        if (key.first == config.m - 1) {
            kcfg.scale_overrides[{0, key.second}] = scales;
        }
    }
    auto with_p = [](NonsepConfig c, int p) {
        c.components.assign(c.m, p);
        for (auto it = c.scale_overrides.begin(); it != c.scale_overrides.end();) {
            it = it->second.empty() || it->first.second >= p ? c.scale_overrides.erase(it) : std::next(it);
        }
        return c;
    };

    std::vector<SweepRow> rows;
    if (!config.auto_predictors) {
        const NonsepPosterior co = fit(data, with_p(config, p_max), settings, threads);
        const NonsepPosterior kr = fit(top, with_p(kcfg, p_max), settings, threads);
        for (int p : p_values) {
            SweepRow row;
            row.p = p;
            row.rmspe_cokriging = rmspe(mean_predictions(truncate(co, std::vector<int>(co.num_levels(), p)), X_test, threads), Y_test);
            row.rmspe_kriging = rmspe(mean_predictions(truncate(kr, {p}), X_test, threads), Y_test);
            rows.push_back(row);
        }
        return rows;
    }
    for (int p : p_values) {
        SweepRow row;
        row.p = p;
        row.rmspe_cokriging = rmspe(mean_predictions(fit(data, with_p(config, p), settings, threads), X_test, threads), Y_test);
        row.rmspe_kriging = rmspe(mean_predictions(fit(top, with_p(kcfg, p), settings, threads), X_test, threads), Y_test);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mfgp::nonsep
