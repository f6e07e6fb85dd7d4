#include "mfgp/design.hpp"

#include "mfgp/error.hpp"
#include "mfgp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mfgp {

namespace {

void check_bounds(const std::vector<Bound>& bounds) {
    if (bounds.empty()) {
        throw InvalidArgument("design bounds are empty");
    }
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        if (!(bounds[i].lower < bounds[i].upper) || !std::isfinite(bounds[i].lower) ||
            !std::isfinite(bounds[i].upper)) {
            throw InvalidArgument("design bound " + std::to_string(i) + " has lower >= upper");
        }
    }
}

int stratum_of(double x, const Bound& b, int strata) {
    const double u = (x - b.lower) / (b.upper - b.lower);
    int s = static_cast<int>(std::floor(u * strata));
    return std::clamp(s, 0, strata - 1);
}

double sq_dist(const Matrix& pts, Eigen::Index a, Eigen::Index b) {
    return (pts.row(a) - pts.row(b)).squaredNorm();
}

}  // namespace

DesignSet latin_hypercube(int n, const std::vector<Bound>& bounds, std::uint64_t seed) {
    if (n < 1) {
        throw InvalidArgument("latin_hypercube: n must be at least 1");
    }
    check_bounds(bounds);
    const int d = static_cast<int>(bounds.size());
    Rng rng(derive_seed(seed, {0x1a5ULL}));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    DesignSet design;
    design.points.resize(n, d);
    design.bounds = bounds;
    std::vector<int> perm(n);
    for (int k = 0; k < d; ++k) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const double width = bounds[k].upper - bounds[k].lower;
        for (int i = 0; i < n; ++i) {
            const double cell_lo = bounds[k].lower + width * perm[i] / n;
            const double cell_hi = bounds[k].lower + width * (perm[i] + 1) / n;
            double x = bounds[k].lower + width * (perm[i] + unif(rng)) / n;
            // rounding can land on the next cell's edge
            if (x >= cell_hi && perm[i] + 1 < n) {
                x = std::nextafter(cell_hi, cell_lo);
            }
            design.points(i, k) = std::clamp(x, cell_lo, bounds[k].upper);
        }
    }
    return design;
}

double stratum_deviation(const Matrix& points, const std::vector<Bound>& bounds, int dim, int strata,
                         double target) {
    std::vector<int> counts(strata, 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        ++counts[stratum_of(points(i, dim), bounds[dim], strata)];
    }
    double dev = 0.0;
    for (int c : counts) {
        dev += std::abs(c - target);
    }
    return dev;
}

DesignSet nested_subsample(const DesignSet& parent, int n_child, std::uint64_t seed) {
    const int n = parent.size();
    if (n_child < 1 || n_child > n) {
        throw InvalidArgument("nested_subsample: requested " + std::to_string(n_child) +
                              " points from a parent of size " + std::to_string(n));
    }
    check_bounds(parent.bounds);
    const int d = parent.dim();

    DesignSet child;
    child.bounds = parent.bounds;
    child.level = parent.level + 1;
    if (n_child == n) {
        child.points = parent.points;
        child.parent_rows.resize(n);
        std::iota(child.parent_rows.begin(), child.parent_rows.end(), 0);
        return child;
    }

    // strata[i][k]: stratum of parent row i in dimension k on the child grid
    std::vector<std::vector<int>> strata(n, std::vector<int>(d));
    std::vector<std::vector<int>> counts(d, std::vector<int>(n_child, 0));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            strata[i][k] = stratum_of(parent.points(i, k), parent.bounds[k], n_child);
            ++counts[k][strata[i][k]];
        }
    }

    Rng rng(derive_seed(seed, {0xc15ULL}));
    std::vector<double> priority(n);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double& p : priority) {
        p = unif(rng);
    }

    std::vector<char> alive(n, 1);
    int remaining = n;
    while (remaining > n_child) {
        const double target = static_cast<double>(remaining - 1) / n_child;
        int best = -1;
        double best_max = std::numeric_limits<double>::infinity();
        double best_sum = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) {
                continue;
            }
            double worst = 0.0;
            double total = 0.0;
            for (int k = 0; k < d; ++k) {
                double dev = 0.0;
                for (int s = 0; s < n_child; ++s) {
                    const int c = counts[k][s] - (strata[i][k] == s ? 1 : 0);
                    dev += std::abs(c - target);
                }
                worst = std::max(worst, dev);
                total += dev;
            }
            const bool better = worst < best_max - 1e-12 ||
                                (std::abs(worst - best_max) <= 1e-12 &&
                                 (total < best_sum - 1e-12 ||
                                  (std::abs(total - best_sum) <= 1e-12 && priority[i] < priority[best])));
            if (better) {
                best = i;
                best_max = worst;
                best_sum = total;
            }
        }
        alive[best] = 0;
        for (int k = 0; k < d; ++k) {
            --counts[k][strata[best][k]];
        }
        --remaining;
    }

    child.points.resize(n_child, d);
    int row = 0;
    for (int i = 0; i < n; ++i) {
        if (alive[i]) {
            child.points.row(row++) = parent.points.row(i);
            child.parent_rows.push_back(i);
        }
    }
    return child;
}

Matrix SpatialOrdering::ordered_locations() const {
    Matrix out(locations.rows(), locations.cols());
    for (int k = 0; k < size(); ++k) {
        out.row(k) = locations.row(permutation[k]);
    }
    return out;
}

std::vector<int> SpatialOrdering::positions() const {
    std::vector<int> pos(permutation.size());
    for (int k = 0; k < size(); ++k) {
        pos[permutation[k]] = k;
    }
    return pos;
}

SpatialOrdering maximin_order(const Matrix& locations) {
    const Eigen::Index N = locations.rows();
    if (N < 1) {
        throw InvalidArgument("maximin_order: no locations");
    }
    SpatialOrdering ordering;
    ordering.locations = locations;
    ordering.permutation.reserve(N);

    const Eigen::RowVectorXd centroid = locations.colwise().mean();
    Eigen::Index first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < N; ++i) {
        const double dist = (locations.row(i) - centroid).squaredNorm();
        if (dist < best) {
            best = dist;
            first = i;
        }
    }

    std::vector<char> placed(N, 0);
    std::vector<double> min_dist(N, std::numeric_limits<double>::infinity());
    Eigen::Index current = first;
    for (Eigen::Index step = 0; step < N; ++step) {
        ordering.permutation.push_back(static_cast<int>(current));
        placed[current] = 1;
        Eigen::Index next = -1;
        double far = -1.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            if (placed[i]) {
                continue;
            }
            min_dist[i] = std::min(min_dist[i], sq_dist(locations, i, current));
            if (min_dist[i] > far) {
                far = min_dist[i];
                next = i;
            }
        }
        current = next;
    }
    return ordering;
}

NeighborSets build_neighbor_sets(const SpatialOrdering& ordering, int p) {
    if (p < 0) {
        throw InvalidArgument("build_neighbor_sets: p must be nonnegative");
    }
    const int N = ordering.size();
    const Matrix ordered = ordering.ordered_locations();
    NeighborSets out;
    out.max_size = p;
    out.sets.resize(N);
    if (p == 0) {
        return out;
    }
    std::vector<std::pair<double, int>> cand;
    for (int j = 1; j < N; ++j) {
        cand.clear();
        for (int i = 0; i < j; ++i) {
            cand.emplace_back(sq_dist(ordered, i, j), i);
        }
        const int k = std::min(p, j);
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (int m = 0; m < k; ++m) {
            out.sets[j].push_back(cand[m].second);
        }
    }
    return out;
}

Matrix rescale_unit_box(const Matrix& locations) {
    Matrix out = locations;
    for (Eigen::Index k = 0; k < locations.cols(); ++k) {
        const double lo = locations.col(k).minCoeff();
        const double hi = locations.col(k).maxCoeff();
        if (hi > lo) {
            out.col(k) = (locations.col(k).array() - lo) / (hi - lo);
        } else {
            out.col(k).setZero();
        }
    }
    return out;
}

}  // namespace mfgp
