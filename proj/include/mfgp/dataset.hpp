#pragma once

#include "mfgp/design.hpp"
#include "mfgp/kernel.hpp"

#include <string>
#include <vector>

namespace mfgp {

struct FidelityLevel {
    Matrix X;  // n_t x d inputs
    Matrix Y;  // n_t x N outputs
    // Row of the level below holding each input of this level (empty at level 1).
    std::vector<int> parent_rows;
};

/// Nested multifidelity training data: levels[0] is the lowest fidelity.
struct MultifidelityDataset {
    std::vector<FidelityLevel> levels;
    Matrix locations;                      // N x k output coordinates
    std::vector<std::string> input_names;  // optional, d entries
    std::vector<Bound> input_bounds;       // optional, d entries; empty means the level-1 box

    [[nodiscard]] int num_levels() const { return static_cast<int>(levels.size()); }
    [[nodiscard]] int num_outputs() const { return levels.empty() ? 0 : static_cast<int>(levels[0].Y.cols()); }
    [[nodiscard]] int input_dim() const { return levels.empty() ? 0 : static_cast<int>(levels[0].X.cols()); }

    /// Checks shapes and nesting and fills parent_rows. A level-t input that does not appear
    /// verbatim among the level-(t-1) inputs raises ConfigError naming the row.
    void validate();

    /// Bounds used for prior scales: input_bounds if given, else the level-1 coordinate box.
    [[nodiscard]] std::vector<Bound> effective_bounds() const;

    /// Dataset keeping only the top `count` levels (top level becomes the only level when count=1).
    [[nodiscard]] MultifidelityDataset top_levels(int count) const;
};

}  // namespace mfgp
