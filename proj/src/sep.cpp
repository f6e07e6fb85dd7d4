#include "mfgp/sep.hpp"

#include "mfgp/error.hpp"
#include "mfgp/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mfgp::sep {

std::string to_string(MeanBasis basis) {
    return basis == MeanBasis::constant ? "constant" : "linear";
}

MeanBasis mean_basis_from_string(const std::string& name) {
    if (name == "constant") {
        return MeanBasis::constant;
    }
    if (name == "linear") {
        return MeanBasis::linear;
    }
    throw ConfigError("unknown mean basis '" + name + "' (expected constant or linear)");
}

int basis_size(MeanBasis basis, int input_dim) {
    return basis == MeanBasis::constant ? 1 : 1 + input_dim;
}

Matrix basis_matrix(const Eigen::Ref<const Matrix>& X, MeanBasis basis) {
    Matrix H(X.rows(), basis_size(basis, static_cast<int>(X.cols())));
    H.col(0).setOnes();
    if (basis == MeanBasis::linear) {
        H.rightCols(X.cols()) = X;
    }
    return H;
}

Vector basis_vector(const Eigen::Ref<const Vector>& x0, MeanBasis basis) {
    Vector h(basis_size(basis, static_cast<int>(x0.size())));
    h[0] = 1.0;
    if (basis == MeanBasis::linear) {
        h.tail(x0.size()) = x0;
    }
    return h;
}

SepConfig SepConfig::defaults(int m, const std::vector<Bound>& input_bounds) {
    SepConfig c;
    c.m = m;
    c.gamma.assign(std::max(0, m - 1), 1.0);
    c.basis.assign(m, MeanBasis::constant);
    c.tau2.assign(m, 1.0);
    c.eta.assign(m, 4.0);
    c.lambda.assign(m, 2.0);
    std::vector<double> scales;
    for (const auto& b : input_bounds) {
        scales.push_back(0.5 * (b.upper - b.lower));
    }
    c.half_cauchy_scales.assign(m, scales);
    return c;
}

double SepConfig::dof(int level, int n, int input_dim) const {
    return static_cast<double>(n) + eta.at(level) - static_cast<double>(basis_size(basis.at(level), input_dim));
}

void SepConfig::validate(const MultifidelityDataset& data) const {
    auto fail = [](const std::string& msg) { throw ConfigError("sep config: " + msg); };
    if (m < 1) {
        fail("m must be at least 1");
    }
    if (data.num_levels() != m) {
        fail("m = " + std::to_string(m) + " but the dataset has " + std::to_string(data.num_levels()) + " levels");
    }
    auto check_size = [&](std::size_t got, std::size_t want, const std::string& name) {
        if (got != want) {
            fail(name + " has " + std::to_string(got) + " entries, expected " + std::to_string(want));
        }
    };
    check_size(gamma.size(), static_cast<std::size_t>(m - 1), "gamma");
    check_size(basis.size(), m, "basis");
    check_size(tau2.size(), m, "tau2");
    check_size(eta.size(), m, "eta");
    check_size(lambda.size(), m, "lambda");
    check_size(half_cauchy_scales.size(), m, "half_cauchy_scales");
    if (neighbors_p < 0) {
        fail("neighbors_p must be nonnegative");
    }
    if (!(jitter >= 0.0) || !std::isfinite(jitter)) {
        fail("jitter must be a nonnegative finite number");
    }
    if (!(smoothness > 0.0)) {
        fail("smoothness must be positive");
    }
    for (double g : gamma) {
        if (!std::isfinite(g)) {
            fail("gamma entries must be finite");
        }
    }
    const int d = data.input_dim();
    for (int t = 0; t < m; ++t) {
        const std::string lv = " at level " + std::to_string(t + 1);
        if (!(tau2[t] > 0.0) || !(eta[t] > 0.0) || !(lambda[t] > 0.0)) {
            fail("tau2, eta and lambda must be positive" + lv);
        }
        check_size(half_cauchy_scales[t].size(), d, "half_cauchy_scales" + lv);
        for (double q : half_cauchy_scales[t]) {
            if (!(q > 0.0) || !std::isfinite(q)) {
                fail("half-Cauchy scales must be positive" + lv);
            }
        }
        const int n = static_cast<int>(data.levels[t].X.rows());
        const double nu = dof(t, n, d);
        if (!(nu > 2.0)) {
            std::ostringstream os;
            os << "n + eta - q = " << nu << lv << " must exceed 2 for a finite predictive variance";
            fail(os.str());
        }
    }
}

Matrix SepLevelData::F() const {
    if (U.size() == 0) {
        return H;
    }
    Matrix out(H.rows(), H.cols() + U.cols());
    out << H, U;
    return out;
}

SepLevelData make_level_data(const MultifidelityDataset& data, int level, const SepConfig& config) {
    const auto& lv = data.levels.at(level);
    SepLevelData out;
    out.level = level;
    out.X = lv.X;
    out.Y = lv.Y;
    out.basis = config.basis.at(level);
    out.H = basis_matrix(lv.X, out.basis);
    out.parent_rows = lv.parent_rows;
    if (level > 0) {
        out.gamma = config.gamma.at(level - 1);
        const Matrix& below = data.levels[level - 1].Y;
        if (lv.parent_rows.size() != static_cast<std::size_t>(lv.X.rows())) {
            throw InvalidArgument("make_level_data: dataset is not validated (missing parent rows)");
        }
        out.U.resize(lv.X.rows(), below.cols());
        for (Eigen::Index i = 0; i < lv.X.rows(); ++i) {
            out.U.row(i) = below.row(lv.parent_rows[i]);
        }
        out.target = out.Y - out.gamma * out.U;
    } else {
        out.target = out.Y;
    }
    return out;
}

bool LocationNeighbors::independent() const {
    for (const auto& s : sets) {
        if (!s.empty()) {
            return false;
        }
    }
    return true;
}

LocationNeighbors location_neighbors(const SpatialOrdering& ordering, int p) {
    LocationNeighbors out;
    out.order = ordering.permutation;
    out.sets = build_neighbor_sets(ordering, p).sets;
    out.p = p;
    return out;
}

LocationNeighbors sequential_neighbors(int N, int p) {
    if (N < 1 || p < 0) {
        throw InvalidArgument("sequential_neighbors: N must be positive and p nonnegative");
    }
    LocationNeighbors out;
    out.p = p;
    out.order.resize(N);
    out.sets.resize(N);
    for (int j = 0; j < N; ++j) {
        out.order[j] = j;
        for (int k = j - 1; k >= std::max(0, j - p); --k) {
            out.sets[j].push_back(k);
        }
    }
    return out;
}

LocationNeighbors neighbors_for_locations(const Matrix& locations, int N, int p) {
    if (locations.rows() == 0) {
        Matrix index(N, 1);
        for (int j = 0; j < N; ++j) {
            index(j, 0) = j;
        }
        return location_neighbors(maximin_order(rescale_unit_box(index)), p);
    }
    if (locations.rows() != N) {
        throw InvalidArgument("neighbors_for_locations: location count does not match outputs");
    }
    return location_neighbors(maximin_order(rescale_unit_box(locations)), p);
}

GlsEstimates gls_estimates(const SepLevelData& level, const CorrelationMatrix& R) {
    GlsEstimates g;
    g.H_white = R.whiten(level.H);
    const Matrix target_white = R.whiten(level.target);
    const Matrix gram = g.H_white.transpose() * g.H_white;
    g.gram.compute(gram);
    bool ok = g.gram.info() == Eigen::Success;
    if (ok) {
        const Vector diag = Matrix(g.gram.matrixL()).diagonal();
        ok = diag.allFinite() && diag.minCoeff() > 1e-10 * std::sqrt(gram.diagonal().maxCoeff());
    }
    if (!ok) {
        throw InvalidArgument("mean basis '" + to_string(level.basis) + "' is rank deficient on the level " +
                              std::to_string(level.level + 1) + " design");
    }
    g.log_det_gram = 2.0 * Matrix(g.gram.matrixL()).diagonal().array().log().sum();
    g.beta_hat = g.gram.solve(g.H_white.transpose() * target_white);
    g.S = target_white - g.H_white * g.beta_hat;
    return g;
}

Matrix stacked_coefficients(const SepLevelData& level, const Matrix& beta_hat) {
    if (level.U.size() == 0) {
        return beta_hat;
    }
    const Eigen::Index N = level.U.cols();
    Matrix B(beta_hat.rows() + N, beta_hat.cols());
    B.topRows(beta_hat.rows()) = beta_hat;
    B.bottomRows(N) = level.gamma * Matrix::Identity(N, N);
    return B;
}

CholeskyFactors posterior_ad(const Eigen::Ref<const Matrix>& S, const LocationNeighbors& neighbors, double tau2,
                             double lambda, double dof) {
    const int N = neighbors.size();
    if (S.cols() != N) {
        throw InvalidArgument("posterior_ad: residual columns do not match neighbor structure");
    }
    if (!(tau2 > 0.0) || !(lambda > 0.0)) {
        throw InvalidArgument("posterior_ad: tau2 and lambda must be positive");
    }
    CholeskyFactors f;
    f.dof = dof;
    f.a_hat.resize(N);
    f.V_hat.resize(N);
    f.log_det_V.assign(N, 0.0);
    f.d_hat.resize(N);
    for (int j = 0; j < N; ++j) {
        const auto col = S.col(neighbors.order[j]);
        const double ss = col.squaredNorm();
        const auto& C = neighbors.sets[j];
        const auto k = static_cast<Eigen::Index>(C.size());
        if (k == 0) {
            f.a_hat[j].resize(0);
            f.V_hat[j].resize(0, 0);
            f.d_hat[j] = ss + lambda;
            continue;
        }
        Matrix G(k, k);
        Vector b(k);
        for (Eigen::Index u = 0; u < k; ++u) {
            const auto cu = S.col(neighbors.order[C[u]]);
            b[u] = cu.dot(col);
            for (Eigen::Index v = 0; v <= u; ++v) {
                G(u, v) = cu.dot(S.col(neighbors.order[C[v]]));
                G(v, u) = G(u, v);
            }
            G(u, u) += 1.0 / tau2;
        }
        Eigen::LLT<Matrix> llt(G);
        if (llt.info() != Eigen::Success) {
            throw ConditioningError("posterior_ad: neighbor Gram matrix is not positive definite at position " +
                                    std::to_string(j));
        }
        f.V_hat[j] = llt.solve(Matrix::Identity(k, k));
        f.a_hat[j] = llt.solve(b);
        f.d_hat[j] = ss + lambda - b.dot(f.a_hat[j]);
        f.log_det_V[j] = -2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
    }
    if (!(f.d_hat.minCoeff() > 0.0)) {
        throw NumericalError("posterior_ad: nonpositive conditional variance estimate");
    }
    return f;
}

namespace {

double log_prior(const CorrelationParams& theta, const std::vector<double>& scales) {
    double lp = 0.0;
    for (int i = 0; i < theta.dim(); ++i) {
        lp += half_cauchy_logpdf(theta.ranges[i], scales.at(i));
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

SepLevelState prepare_level(const SepLevelData& level, const LocationNeighbors& neighbors,
                            const CorrelationParams& theta, const SepConfig& config) {
    theta.validate();
    if (theta.dim() != level.X.cols()) {
        throw InvalidArgument("prepare_level: theta dimension does not match inputs");
    }
    const int t = level.level;
    SepLevelState s;
    s.theta = theta;
    s.R = correlation_matrix(level.X, theta, config.jitter);
    s.gls = gls_estimates(level, s.R);
    const double nu = config.dof(t, level.n(), static_cast<int>(level.X.cols()));
    s.factors = posterior_ad(s.gls.S, neighbors, config.tau2.at(t), config.lambda.at(t), nu);
    const double N = level.num_outputs();
    double ll = -0.5 * N * s.R.log_det() - 0.5 * N * s.gls.log_det_gram;
    ll -= 0.5 * nu * s.factors.d_hat.array().log().sum();
    for (double v : s.factors.log_det_V) {
        ll += 0.5 * v;
    }
    s.log_likelihood = ll;
    s.log_prior = log_prior(theta, config.half_cauchy_scales.at(t));
    if (!std::isfinite(ll)) {
        throw NumericalError("non-finite log posterior at level " + std::to_string(t + 1) + ", " + describe(theta));
    }
    return s;
}

double log_posterior_theta(const SepLevelData& level, const LocationNeighbors& neighbors,
                           const CorrelationParams& theta, const SepConfig& config) {
    return prepare_level(level, neighbors, theta, config).log_posterior();
}

ModifiedCholesky modified_cholesky(const Matrix& sigma, const LocationNeighbors& neighbors) {
    const int N = neighbors.size();
    if (sigma.rows() != N || sigma.cols() != N) {
        throw InvalidArgument("modified_cholesky: covariance size does not match neighbor structure");
    }
    ModifiedCholesky out;
    out.A.resize(N, N);
    out.D.resize(N);
    std::vector<Eigen::Triplet<double>> entries;
    for (int j = 0; j < N; ++j) {
        const auto& C = neighbors.sets[j];
        const auto k = static_cast<Eigen::Index>(C.size());
        if (k == 0) {
            out.D[j] = sigma(j, j);
            continue;
        }
        Matrix scc(k, k);
        Vector scj(k);
        for (Eigen::Index u = 0; u < k; ++u) {
            scj[u] = sigma(C[u], j);
            for (Eigen::Index v = 0; v < k; ++v) {
                scc(u, v) = sigma(C[u], C[v]);
            }
        }
        const Vector a = scc.llt().solve(scj);
        out.D[j] = sigma(j, j) - scj.dot(a);
        for (Eigen::Index u = 0; u < k; ++u) {
            entries.emplace_back(j, C[u], a[u]);
        }
    }
    out.A.setFromTriplets(entries.begin(), entries.end());
    return out;
}

ModifiedCholesky posterior_mean_factors(const CholeskyFactors& factors, const LocationNeighbors& neighbors) {
    if (!(factors.dof > 2.0)) {
        throw InvalidArgument("posterior_mean_factors: dof must exceed 2");
    }
    const int N = neighbors.size();
    ModifiedCholesky out;
    out.A.resize(N, N);
    std::vector<Eigen::Triplet<double>> entries;
    for (int j = 0; j < N; ++j) {
        for (std::size_t u = 0; u < neighbors.sets[j].size(); ++u) {
            entries.emplace_back(j, neighbors.sets[j][u], factors.a_hat[j][static_cast<Eigen::Index>(u)]);
        }
    }
    out.A.setFromTriplets(entries.begin(), entries.end());
    out.D = factors.d_hat / (factors.dof - 2.0);
    return out;
}

namespace {

Matrix unit_lower(const ModifiedCholesky& f) {
    const Eigen::Index N = f.D.size();
    if (f.A.rows() != N || f.A.cols() != N) {
        throw InvalidArgument("modified Cholesky factors have inconsistent sizes");
    }
    if (!(f.D.minCoeff() > 0.0)) {
        throw InvalidArgument("modified Cholesky factors need a positive diagonal D");
    }
    Matrix IA = Matrix::Identity(N, N) - Matrix(f.A);
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = i; j < N; ++j) {
            if (j > i && f.A.coeff(i, j) != 0.0) {
                throw InvalidArgument("A must be strictly lower triangular");
            }
        }
    }
    return IA;
}

}  // namespace

Matrix reconstruct_precision(const ModifiedCholesky& factors) {
    const Matrix IA = unit_lower(factors);
    return IA.transpose() * factors.D.cwiseInverse().asDiagonal() * IA;
}

Matrix reconstruct_covariance(const ModifiedCholesky& factors) {
    const Matrix IA = unit_lower(factors);
    const Eigen::Index N = IA.rows();
    const Matrix inv = IA.triangularView<Eigen::UnitLower>().solve(Matrix::Identity(N, N));
    return inv * factors.D.asDiagonal() * inv.transpose();
}

double matrix_normal_logpdf(const Matrix& Y, const Matrix& M, const Matrix& R, const Matrix& sigma) {
    const Eigen::Index n = Y.rows();
    const Eigen::Index N = Y.cols();
    Matrix K(n * N, n * N);
    for (Eigen::Index a = 0; a < N; ++a) {
        for (Eigen::Index b = 0; b < N; ++b) {
            K.block(a * n, b * n, n, n) = sigma(a, b) * R;
        }
    }
    const Matrix diff = Y - M;
    const Vector r = Eigen::Map<const Vector>(diff.data(), n * N);
    Eigen::LLT<Matrix> llt(K);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("matrix_normal_logpdf: covariance is not positive definite");
    }
    const Vector z = llt.matrixL().solve(r);
    const double log_det = 2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
    return -0.5 * static_cast<double>(n * N) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det - 0.5 * z.squaredNorm();
}

double factorized_matrix_normal_logpdf(const Matrix& Y, const Matrix& M, const Matrix& R,
                                       const ModifiedCholesky& factors, const LocationNeighbors& neighbors) {
    const Eigen::Index n = Y.rows();
    const int N = neighbors.size();
    if (Y.cols() != N || factors.D.size() != N) {
        throw InvalidArgument("factorized_matrix_normal_logpdf: sizes do not match");
    }
    Eigen::LLT<Matrix> llt(R);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("factorized_matrix_normal_logpdf: R is not positive definite");
    }
    const double log_det_R = 2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
    const Matrix E = Y - M;
    double total = 0.0;
    for (int j = 0; j < N; ++j) {
        Vector r = E.col(j);
        for (int c : neighbors.sets[j]) {
            r -= factors.A.coeff(j, c) * E.col(c);
        }
        const Vector z = llt.matrixL().solve(r);
        const double d = factors.D[j];
        total += -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi * d) - 0.5 * log_det_R -
                 0.5 * z.squaredNorm() / d;
    }
    return total;
}

Vector sequential_locations(const LocationNeighbors& neighbors, const CholeskyFactors& factors,
                            const Eigen::Ref<const Vector>& M, const Eigen::Ref<const Vector>& y) {
    const int N = neighbors.size();
    Vector mu(N);
    for (int j = 0; j < N; ++j) {
        const int col = neighbors.order[j];
        double m = M[col];
        const auto& C = neighbors.sets[j];
        for (std::size_t u = 0; u < C.size(); ++u) {
            const int c = neighbors.order[C[u]];
            m += (y[c] - M[c]) * factors.a_hat[j][static_cast<Eigen::Index>(u)];
        }
        mu[col] = m;
    }
    return mu;
}

Vector sequential_scales(const LocationNeighbors& neighbors, const CholeskyFactors& factors,
                         const Eigen::Ref<const Vector>& M, const Eigen::Ref<const Vector>& y, double R0) {
    const int N = neighbors.size();
    Vector s2(N);
    for (int j = 0; j < N; ++j) {
        const auto& C = neighbors.sets[j];
        const auto k = static_cast<Eigen::Index>(C.size());
        double quad = 0.0;
        if (k > 0) {
            Vector e(k);
            for (Eigen::Index u = 0; u < k; ++u) {
                const int c = neighbors.order[C[u]];
                e[u] = y[c] - M[c];
            }
            quad = e.dot(factors.V_hat[j] * e);
        }
        s2[neighbors.order[j]] = factors.d_hat[j] * (R0 + quad) / factors.dof;
    }
    return s2;
}

namespace {

std::vector<std::string> acceptance_warnings(const std::vector<SepLevelFit>& levels) {
    std::vector<std::string> out;
    for (const auto& lv : levels) {
        if (lv.chain.size() == 0) {
            continue;
        }
        const double a = lv.chain.acceptance_rate;
        if (a < 0.05 || a > 0.95) {
            std::ostringstream os;
            os << "level " << lv.data.level + 1 << " acceptance rate " << a << " is outside [0.05, 0.95]";
            out.push_back(os.str());
        }
    }
    return out;
}

}  // namespace

SepPosterior fit(const MultifidelityDataset& data, const SepConfig& config, const ChainSettings& settings,
                 int threads) {
    config.validate(data);
    settings.validate();
    SepPosterior post;
    post.config = config;
    post.neighbors = neighbors_for_locations(data.locations, data.num_outputs(), config.neighbors_p);
    post.levels.resize(config.m);
    for (int t = 0; t < config.m; ++t) {
        post.levels[t].data = make_level_data(data, t, config);
        post.levels[t].seed = derive_seed(settings.seed, {0x5e9ULL, static_cast<std::uint64_t>(t)});
    }
    parallel_for(config.m, threads, [&](int t) {
        auto& lv = post.levels[t];
        const double nu = config.smoothness;
        LogTarget target = [&](const Vector& theta) {
            return log_posterior_theta(lv.data, post.neighbors, CorrelationParams(theta, nu), config);
        };
        ChainSettings cs = settings;
        cs.seed = lv.seed;
        const std::vector<double>& init = config.half_cauchy_scales[t];
        lv.chain = random_walk_mh(target, Eigen::Map<const Vector>(init.data(), static_cast<Eigen::Index>(init.size())),
                                  cs);
        lv.theta_map = CorrelationParams(map_estimate(lv.chain), nu);
        lv.state = prepare_level(lv.data, post.neighbors, lv.theta_map, config);
    });
    post.warnings = acceptance_warnings(post.levels);
    return post;
}

SepPosterior condition(const MultifidelityDataset& data, const SepConfig& config,
                       const std::vector<CorrelationParams>& thetas) {
    config.validate(data);
    if (static_cast<int>(thetas.size()) != config.m) {
        throw InvalidArgument("condition: need one theta per level");
    }
    SepPosterior post;
    post.config = config;
    post.neighbors = neighbors_for_locations(data.locations, data.num_outputs(), config.neighbors_p);
    post.levels.resize(config.m);
    for (int t = 0; t < config.m; ++t) {
        auto& lv = post.levels[t];
        lv.data = make_level_data(data, t, config);
        lv.theta_map = thetas[t];
        lv.state = prepare_level(lv.data, post.neighbors, thetas[t], config);
    }
    return post;
}

LevelMoments level_moments(const SepLevelData& level, const SepLevelState& state, const Eigen::Ref<const Vector>& x0) {
    if (x0.size() != level.X.cols()) {
        throw InvalidArgument("prediction input has the wrong dimension");
    }
    LevelMoments out;
    for (Eigen::Index i = 0; i < level.X.rows(); ++i) {
        if (level.X.row(i).transpose() == x0) {
            out.base = level.target.row(i).transpose();
            out.R0 = 0.0;
            return out;
        }
    }
    const Vector r = cross_correlation_vector(x0, level.X, state.theta);
    const Vector v = state.R.whiten_vector(r);
    const Vector u = basis_vector(x0, level.basis) - state.gls.H_white.transpose() * v;
    out.R0 = std::max(0.0, 1.0 - v.squaredNorm() + u.dot(state.gls.gram.solve(u)));
    out.base = state.gls.beta_hat.transpose() * basis_vector(x0, level.basis) + state.gls.S.transpose() * v;
    return out;
}

namespace {

using StateSet = std::vector<const SepLevelState*>;  // one per level

std::vector<LevelMoments> moments_for(const SepPosterior& post, const StateSet& states,
                                      const Eigen::Ref<const Vector>& x0) {
    std::vector<LevelMoments> out(post.num_levels());
    for (int t = 0; t < post.num_levels(); ++t) {
        out[t] = level_moments(post.levels[t].data, *states[t], x0);
    }
    return out;
}

Vector propagate_mean(const SepPosterior& post, const std::vector<LevelMoments>& moments,
                      std::vector<Vector>* per_level) {
    Vector prev;
    for (int t = 0; t < post.num_levels(); ++t) {
        Vector M = moments[t].base;
        if (t > 0) {
            M += post.levels[t].data.gamma * prev;
        }
        if (per_level) {
            per_level->push_back(M);
        }
        prev = std::move(M);
    }
    return prev;
}

// Draws one joint sample across levels; `rows` receives level t in row `row` of out[t]
// (only the top level when out has a single matrix).
void draw_one(const SepPosterior& post, const StateSet& states, const std::vector<LevelMoments>& moments, Rng& rng,
              std::vector<Matrix>& out, Eigen::Index row, Vector& prev, Vector& cur, Vector& M) {
    const auto& nb = post.neighbors;
    const int N = nb.size();
    const int m = post.num_levels();
    for (int t = 0; t < m; ++t) {
        const auto& f = states[t]->factors;
        M = moments[t].base;
        if (t > 0) {
            M += post.levels[t].data.gamma * prev;
        }
        const double R0 = moments[t].R0;
        cur.resize(N);
        for (int j = 0; j < N; ++j) {
            const int col = nb.order[j];
            const auto& C = nb.sets[j];
            double mu = M[col];
            double quad = 0.0;
            if (!C.empty()) {
                const auto k = static_cast<Eigen::Index>(C.size());
                const Matrix& V = f.V_hat[j];
                const Vector& a = f.a_hat[j];
                for (Eigen::Index u = 0; u < k; ++u) {
                    const int cu = nb.order[C[u]];
                    const double eu = cur[cu] - M[cu];
                    mu += eu * a[u];
                    double acc = 0.0;
                    for (Eigen::Index v = 0; v < k; ++v) {
                        const int cv = nb.order[C[v]];
                        acc += V(u, v) * (cur[cv] - M[cv]);
                    }
                    quad += eu * acc;
                }
            }
            const double s2 = std::max(0.0, f.d_hat[j] * (R0 + quad) / f.dof);
            cur[col] = mu + std::sqrt(s2) * student_t_draw(rng, f.dof);
        }
        if (static_cast<int>(out.size()) == m) {
            out[t].row(row) = cur.transpose();
        } else if (t == m - 1) {
            out[0].row(row) = cur.transpose();
        }
        std::swap(prev, cur);
    }
}

StateSet plugin_states(const SepPosterior& post) {
    StateSet s;
    for (const auto& lv : post.levels) {
        s.push_back(&lv.state);
    }
    return s;
}

}  // namespace

std::vector<Vector> predict_mean(const Eigen::Ref<const Vector>& x0, const SepPosterior& posterior) {
    const StateSet states = plugin_states(posterior);
    std::vector<Vector> out;
    propagate_mean(posterior, moments_for(posterior, states, x0), &out);
    return out;
}

std::vector<Matrix> predict_sample(const Eigen::Ref<const Vector>& x0, const SepPosterior& posterior,
                                   std::uint64_t seed, int count) {
    if (count <= 0) {
        throw InvalidArgument("predict_sample: count must be positive");
    }
    const StateSet states = plugin_states(posterior);
    const auto moments = moments_for(posterior, states, x0);
    std::vector<Matrix> out(posterior.num_levels(), Matrix(count, posterior.num_outputs()));
    Rng rng(seed);
    Vector prev, cur, M;
    for (int s = 0; s < count; ++s) {
        draw_one(posterior, states, moments, rng, out, s, prev, cur, M);
    }
    return out;
}

PredictiveSummary predictive_summary(const Eigen::Ref<const Matrix>& X0, const SepPosterior& posterior,
                                     const SummaryOptions& options, std::vector<std::string>* warnings) {
    if (options.samples_per_input <= 0) {
        throw InvalidArgument("predictive_summary: samples_per_input must be positive");
    }
    if (options.samples_per_input < 100 && warnings) {
        warnings->push_back("fewer than 100 samples per input; interval quantiles are unstable");
    }
    if (options.chain_draws < 0) {
        throw InvalidArgument("predictive_summary: chain_draws must be nonnegative");
    }
    const int m = posterior.num_levels();
    // Chain-draw states, indexed [draw][level].
    std::vector<std::vector<SepLevelState>> draw_states;
    std::vector<StateSet> state_sets;
    bool use_chain = options.chain_draws > 0;
    for (const auto& lv : posterior.levels) {
        use_chain = use_chain && lv.chain.size() > 0;
    }
    if (use_chain) {
        const int K = options.chain_draws;
        draw_states.assign(K, std::vector<SepLevelState>(m));
        parallel_for(K * m, options.threads, [&](int idx) {
            const int k = idx / m;
            const int t = idx % m;
            const auto& lv = posterior.levels[t];
            const int size = lv.chain.size();
            const int pick = static_cast<int>((static_cast<long long>(k) * size) / K);
            const CorrelationParams theta(Vector(lv.chain.samples.row(pick).transpose()), posterior.config.smoothness);
            draw_states[k][t] = prepare_level(lv.data, posterior.neighbors, theta, posterior.config);
        });
        for (const auto& ds : draw_states) {
            StateSet s;
            for (const auto& st : ds) {
                s.push_back(&st);
            }
            state_sets.push_back(std::move(s));
        }
    } else {
        state_sets.push_back(plugin_states(posterior));
    }

    const int inputs = static_cast<int>(X0.rows());
    const int N = posterior.num_outputs();
    PredictiveSummary summary = make_summary(inputs, N, options.samples_per_input, options.mask);
    parallel_for(inputs, options.threads, [&](int i) {
        const Vector x0 = X0.row(i).transpose();
        std::vector<std::vector<LevelMoments>> moments;
        Vector point = Vector::Zero(N);
        for (const auto& ss : state_sets) {
            moments.push_back(moments_for(posterior, ss, x0));
            point += propagate_mean(posterior, moments.back(), nullptr);
        }
        point /= static_cast<double>(state_sets.size());
        std::vector<Matrix> top(1, Matrix(options.samples_per_input, N));
        Rng rng(derive_seed(options.seed, {static_cast<std::uint64_t>(i)}));
        Vector prev, cur, M;
        for (int s = 0; s < options.samples_per_input; ++s) {
            const std::size_t k = static_cast<std::size_t>(s) % state_sets.size();
            draw_one(posterior, state_sets[k], moments[k], rng, top, s, prev, cur, M);
        }
        summarize_samples(top[0], point, i, summary);
    });
    return summary;
}

}  // namespace mfgp::sep
