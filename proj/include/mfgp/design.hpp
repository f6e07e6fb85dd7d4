#pragma once

#include "mfgp/kernel.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mfgp {

struct Bound {
    double lower = 0.0;
    double upper = 1.0;
};

/// Input design for one fidelity level.
struct DesignSet {
    Matrix points;              // n x d
    std::vector<Bound> bounds;  // one per column
    int level = 1;
    // For a design produced by nested_subsample: the parent row of each point.
    std::vector<int> parent_rows;

    [[nodiscard]] int size() const { return static_cast<int>(points.rows()); }
    [[nodiscard]] int dim() const { return static_cast<int>(points.cols()); }
};

/// Latin hypercube sample: in every dimension each of the n equal-width strata holds one point.
DesignSet latin_hypercube(int n, const std::vector<Bound>& bounds, std::uint64_t seed);

/// Subset of `parent` with n_child rows that keeps per-dimension strata occupancy as even as
/// possible. Rows are removed one at a time; each step drops the row whose removal gives the
/// smallest worst-dimension deviation from uniform occupancy of n_child strata. Remaining ties
/// are broken by a seeded random priority. Output rows keep parent order.
DesignSet nested_subsample(const DesignSet& parent, int n_child, std::uint64_t seed);

/// Sum over strata of |count - target| in dimension `dim` when the bounds are cut into `strata`
/// equal cells and each cell should hold `target` points.
double stratum_deviation(const Matrix& points, const std::vector<Bound>& bounds, int dim, int strata,
                         double target);

/// Maximum-minimum-distance ordering of output locations.
struct SpatialOrdering {
    std::vector<int> permutation;  // permutation[k] = original index placed at position k
    Matrix locations;              // N x k coordinates in original order

    [[nodiscard]] int size() const { return static_cast<int>(permutation.size()); }
    // Locations in ordering sequence (row k = locations.row(permutation[k])).
    [[nodiscard]] Matrix ordered_locations() const;
    // Inverse permutation: position of each original index.
    [[nodiscard]] std::vector<int> positions() const;
};

/// Starts from the location nearest the centroid, then repeatedly takes the location farthest
/// from those already placed. Ties go to the lowest original index.
SpatialOrdering maximin_order(const Matrix& locations);

/// Neighbor sets over ordering positions: sets[j] holds up to p positions < j.
struct NeighborSets {
    std::vector<std::vector<int>> sets;
    int max_size = 0;

    [[nodiscard]] int size() const { return static_cast<int>(sets.size()); }
};

/// For each position j, the p Euclidean-nearest locations among positions 0..j-1
/// (nearest first, ties to the earlier position). p = 0 gives empty sets.
NeighborSets build_neighbor_sets(const SpatialOrdering& ordering, int p);

/// Affine map of every column onto [0, 1]; constant columns map to 0.
Matrix rescale_unit_box(const Matrix& locations);

}  // namespace mfgp
