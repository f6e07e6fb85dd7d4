#include "mfgp/kernel.hpp"

#include "mfgp/error.hpp"

#include <cmath>
#include <sstream>

namespace mfgp {

namespace {

std::string describe(const CorrelationParams& params) {
    std::ostringstream os;
    os << "theta=(";
    for (std::size_t i = 0; i < params.ranges.size(); ++i) {
        os << (i ? ", " : "") << params.ranges[i];
    }
    os << "), nu=" << params.smoothness;
    return os.str();
}

}  // namespace

void CorrelationParams::validate() const {
    if (ranges.empty()) {
        throw InvalidArgument("correlation parameters: no ranges given");
    }
    for (double r : ranges) {
        if (!(r > 0.0) || !std::isfinite(r)) {
            throw InvalidArgument("correlation parameters: ranges must be positive and finite, got " +
                                  describe(*this));
        }
    }
    if (!(smoothness > 0.0) || !std::isfinite(smoothness)) {
        throw InvalidArgument("correlation parameters: smoothness must be positive");
    }
}

double matern_correlation(double u, double range, double smoothness) {
    if (!(range > 0.0) || !(smoothness > 0.0)) {
        throw InvalidArgument("matern_correlation: range and smoothness must be positive");
    }
    if (u < 0.0) {
        throw InvalidArgument("matern_correlation: negative distance");
    }
    if (u == 0.0) {
        return 1.0;
    }
    if (smoothness == 2.5) {
        const double a = std::sqrt(5.0) * u / range;
        return (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
    if (smoothness == 1.5) {
        const double a = std::sqrt(3.0) * u / range;
        return (1.0 + a) * std::exp(-a);
    }
    if (smoothness == 0.5) {
        return std::exp(-u / range);
    }
    const double a = std::sqrt(2.0 * smoothness) * u / range;
    const double log_value = (1.0 - smoothness) * std::log(2.0) - std::lgamma(smoothness) +
                             smoothness * std::log(a) + std::log(std::cyl_bessel_k(smoothness, a));
    return std::exp(log_value);
}

double product_correlation(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& x2,
                           const CorrelationParams& params) {
    if (x.size() != x2.size() || x.size() != params.dim()) {
        throw InvalidArgument("product_correlation: dimension mismatch");
    }
    double value = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        value *= matern_correlation(std::abs(x[i] - x2[i]), params.ranges[i], params.smoothness);
    }
    return value;
}

CorrelationMatrix::CorrelationMatrix(Matrix entries, double jitter)
    : entries_(std::move(entries)), jitter_(jitter) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw InvalidArgument("correlation matrix must be square and nonempty");
    }
    if (jitter_ < 0.0) {
        throw InvalidArgument("correlation matrix jitter must be nonnegative");
    }
    Matrix jittered = entries_;
    jittered.diagonal().array() += jitter_;
    Eigen::LLT<Matrix> llt(jittered);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("Cholesky factorization of the correlation matrix failed");
    }
    lower_ = llt.matrixL();
    if (!lower_.diagonal().allFinite() || (lower_.diagonal().array() <= 0.0).any()) {
        throw ConditioningError("correlation matrix is not numerically positive definite");
    }
}

double CorrelationMatrix::log_det() const {
    return 2.0 * lower_.diagonal().array().log().sum();
}

Matrix CorrelationMatrix::whiten(const Eigen::Ref<const Matrix>& m) const {
    return lower_.triangularView<Eigen::Lower>().solve(m);
}

Vector CorrelationMatrix::whiten_vector(const Eigen::Ref<const Vector>& v) const {
    return lower_.triangularView<Eigen::Lower>().solve(v);
}

Matrix CorrelationMatrix::solve(const Eigen::Ref<const Matrix>& m) const {
    Matrix z = lower_.triangularView<Eigen::Lower>().solve(m);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(z);
}

CorrelationMatrix correlation_matrix(const Eigen::Ref<const Matrix>& X, const CorrelationParams& params,
                                     double jitter) {
    params.validate();
    if (X.rows() < 1) {
        throw InvalidArgument("correlation_matrix: empty design");
    }
    if (X.cols() != params.dim()) {
        throw InvalidArgument("correlation_matrix: design has " + std::to_string(X.cols()) +
                              " columns but " + std::to_string(params.dim()) + " ranges were given");
    }
    const Eigen::Index n = X.rows();
    Matrix R(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        R(j, j) = 1.0;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double value = 1.0;
            for (Eigen::Index k = 0; k < X.cols(); ++k) {
                value *= matern_correlation(std::abs(X(i, k) - X(j, k)), params.ranges[k], params.smoothness);
            }
            R(i, j) = value;
            R(j, i) = value;
        }
    }
    try {
        return CorrelationMatrix(std::move(R), jitter);
    } catch (const ConditioningError& e) {
        throw ConditioningError(std::string(e.what()) + " (" + describe(params) + ", jitter=" +
                                std::to_string(jitter) + ")");
    }
}

Vector cross_correlation_vector(const Eigen::Ref<const Vector>& x0, const Eigen::Ref<const Matrix>& X,
                                const CorrelationParams& params) {
    if (x0.size() != X.cols() || x0.size() != params.dim()) {
        throw InvalidArgument("cross_correlation_vector: dimension mismatch");
    }
    Vector r(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        r[i] = product_correlation(x0, X.row(i).transpose(), params);
    }
    return r;
}

Matrix whiten(const CorrelationMatrix& R, const Eigen::Ref<const Matrix>& M) {
    if (M.rows() != R.size()) {
        throw InvalidArgument("whiten: row count does not match the correlation matrix");
    }
    return R.whiten(M);
}

}  // namespace mfgp
