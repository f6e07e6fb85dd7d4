#pragma once

#include <Eigen/Dense>

#include <vector>

namespace mfgp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultSmoothness = 2.5;
inline constexpr double kDefaultJitter = 1e-8;

/// Per-dimension Matern range parameters with a shared smoothness.
struct CorrelationParams {
    std::vector<double> ranges;
    double smoothness = kDefaultSmoothness;

    CorrelationParams() = default;
    explicit CorrelationParams(std::vector<double> r, double nu = kDefaultSmoothness)
        : ranges(std::move(r)), smoothness(nu) {}
    explicit CorrelationParams(const Vector& r, double nu = kDefaultSmoothness)
        : ranges(r.data(), r.data() + r.size()), smoothness(nu) {}

    [[nodiscard]] int dim() const { return static_cast<int>(ranges.size()); }
    [[nodiscard]] Vector as_vector() const {
        return Eigen::Map<const Vector>(ranges.data(), static_cast<Eigen::Index>(ranges.size()));
    }

    // Throws InvalidArgument unless every range is positive and finite and smoothness > 0.
    void validate() const;
};

/// Matern correlation at distance u. Half-integer smoothness 0.5, 1.5 and 2.5
/// use closed forms; any other value goes through the modified Bessel function.
double matern_correlation(double u, double range, double smoothness = kDefaultSmoothness);

/// Product of one-dimensional Matern correlations over the input dimensions.
double product_correlation(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& x2,
                           const CorrelationParams& params);

/// Input correlation matrix with its Cholesky factor (entries + jitter * I = L L^T).
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;
    // Factorizes `entries + jitter * I`; throws ConditioningError when that fails.
    CorrelationMatrix(Matrix entries, double jitter);

    [[nodiscard]] const Matrix& entries() const { return entries_; }
    [[nodiscard]] double jitter() const { return jitter_; }
    [[nodiscard]] Eigen::Index size() const { return entries_.rows(); }

    // Lower-triangular Cholesky factor of the jittered matrix.
    [[nodiscard]] const Matrix& lower() const { return lower_; }

    [[nodiscard]] double log_det() const;

    // L^{-1} M.
    [[nodiscard]] Matrix whiten(const Eigen::Ref<const Matrix>& m) const;
    [[nodiscard]] Vector whiten_vector(const Eigen::Ref<const Vector>& v) const;

    // (entries + jitter I)^{-1} M.
    [[nodiscard]] Matrix solve(const Eigen::Ref<const Matrix>& m) const;

private:
    Matrix entries_;
    Matrix lower_;
    double jitter_ = 0.0;
};

/// Correlation matrix of the rows of X (n x d).
CorrelationMatrix correlation_matrix(const Eigen::Ref<const Matrix>& X, const CorrelationParams& params,
                                     double jitter = kDefaultJitter);

/// Correlations between x0 and each row of X.
Vector cross_correlation_vector(const Eigen::Ref<const Vector>& x0, const Eigen::Ref<const Matrix>& X,
                                const CorrelationParams& params);

/// S = L^{-1} M, so that S^T S = M^T R^{-1} M.
Matrix whiten(const CorrelationMatrix& R, const Eigen::Ref<const Matrix>& M);

}  // namespace mfgp
