#include "mfgp/dataset.hpp"

#include "mfgp/error.hpp"

#include <map>

namespace mfgp {

void MultifidelityDataset::validate() {
    if (levels.empty()) {
        throw ConfigError("dataset has no fidelity levels");
    }
    const Eigen::Index d = levels[0].X.cols();
    const Eigen::Index N = levels[0].Y.cols();
    if (d < 1 || N < 1) {
        throw ConfigError("dataset level 1 has empty inputs or outputs");
    }
    if (locations.rows() != 0 && locations.rows() != N) {
        throw ConfigError("location table has " + std::to_string(locations.rows()) + " rows but outputs have " +
                          std::to_string(N) + " columns");
    }
    for (int t = 0; t < num_levels(); ++t) {
        const auto& lv = levels[t];
        const std::string name = "level " + std::to_string(t + 1);
        if (lv.X.rows() < 1) {
            throw ConfigError(name + " has no inputs");
        }
        if (lv.X.cols() != d) {
            throw ConfigError(name + " inputs have " + std::to_string(lv.X.cols()) + " columns, expected " +
                              std::to_string(d));
        }
        if (lv.Y.rows() != lv.X.rows()) {
            throw ConfigError(name + " has " + std::to_string(lv.X.rows()) + " inputs but " +
                              std::to_string(lv.Y.rows()) + " output rows");
        }
        if (lv.Y.cols() != N) {
            throw ConfigError(name + " outputs have " + std::to_string(lv.Y.cols()) + " columns, expected " +
                              std::to_string(N));
        }
        if (!lv.X.allFinite() || !lv.Y.allFinite()) {
            throw ConfigError(name + " contains non-finite values");
        }
    }
    levels[0].parent_rows.clear();
    for (int t = 1; t < num_levels(); ++t) {
        const Matrix& lower = levels[t - 1].X;
        std::map<std::vector<double>, int> index;
        for (Eigen::Index i = 0; i < lower.rows(); ++i) {
            std::vector<double> key(d);
            for (Eigen::Index k = 0; k < d; ++k) {
                key[k] = lower(i, k);
            }
            index.emplace(std::move(key), static_cast<int>(i));
        }
        auto& lv = levels[t];
        lv.parent_rows.assign(lv.X.rows(), -1);
        for (Eigen::Index i = 0; i < lv.X.rows(); ++i) {
            std::vector<double> key(d);
            for (Eigen::Index k = 0; k < d; ++k) {
                key[k] = lv.X(i, k);
            }
            auto it = index.find(key);
            if (it == index.end()) {
                throw ConfigError("designs are not nested: level " + std::to_string(t + 1) + " input row " +
                                  std::to_string(i + 1) + " does not appear in level " + std::to_string(t) +
                                  " inputs");
            }
            lv.parent_rows[i] = it->second;
        }
    }
    if (!input_names.empty() && static_cast<Eigen::Index>(input_names.size()) != d) {
        throw ConfigError("input name count does not match input dimension");
    }
    if (!input_bounds.empty() && static_cast<Eigen::Index>(input_bounds.size()) != d) {
        throw ConfigError("input bound count does not match input dimension");
    }
}

std::vector<Bound> MultifidelityDataset::effective_bounds() const {
    if (!input_bounds.empty()) {
        return input_bounds;
    }
    std::vector<Bound> out;
    const Matrix& X = levels.at(0).X;
    for (Eigen::Index k = 0; k < X.cols(); ++k) {
        Bound b{X.col(k).minCoeff(), X.col(k).maxCoeff()};
        if (!(b.upper > b.lower)) {
            b.upper = b.lower + 1.0;
        }
        out.push_back(b);
    }
    return out;
}

MultifidelityDataset MultifidelityDataset::top_levels(int count) const {
    if (count < 1 || count > num_levels()) {
        throw InvalidArgument("top_levels: bad level count");
    }
    MultifidelityDataset out;
    out.levels.assign(levels.end() - count, levels.end());
    out.levels[0].parent_rows.clear();
    out.locations = locations;
    out.input_names = input_names;
    out.input_bounds = input_bounds.empty() ? effective_bounds() : input_bounds;
    return out;
}

}  // namespace mfgp
