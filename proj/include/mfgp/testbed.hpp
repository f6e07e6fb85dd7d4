#pragma once

#include "mfgp/dataset.hpp"
#include "mfgp/design.hpp"
#include "mfgp/kernel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mfgp::testbed {

/// Contaminant-spill input: spilled mass, diffusion rate, second-spill location and time.
struct EnvInput {
    double M = 10.0;
    double D = 0.07;
    double L = 1.5;
    double T = 30.0;

    // Throws InvalidArgument when any field leaves its range.
    void validate() const;
};

inline constexpr double kSpillTime = 30.0;

/// Ranges of (M, D, L), the three varied inputs.
std::vector<Bound> input_bounds();

/// How the low-fidelity simulator approximates each exponential factor exp(z), z <= 0.
enum class LowFidelityForm {
    reciprocal,      // 1 / (1 - z)
    linear,          // 1 + z
    clipped_linear,  // max(0, 1 + z)
};

std::string to_string(LowFidelityForm form);
LowFidelityForm low_fidelity_form_from_string(const std::string& name);

/// Concentration at space-time point (s1, s2). The second spill contributes only when T < s2.
/// Throws InvalidArgument when s2 <= 0.
double concentration(const EnvInput& input, double s1, double s2);

/// sqrt(4 pi) times the concentration.
double hi_fidelity(const EnvInput& input, double s1, double s2);

/// The high-fidelity response with every exponential factor replaced per `form`.
double lo_fidelity(const EnvInput& input, double s1, double s2, LowFidelityForm form = LowFidelityForm::reciprocal);

/// 20 evenly spaced s1 over [0.5, 5] and 50 evenly spaced s2 over [35, 60]. Location
/// s1_i, s2_k sits at row i * 50 + k.
struct SpaceTimeGrid {
    Vector s1;
    Vector s2;
    Matrix locations;  // 1000 x 2

    static SpaceTimeGrid standard();
    [[nodiscard]] int size() const { return static_cast<int>(locations.rows()); }
};

enum class Fidelity { low, high };

/// Outputs at each row of X (columns M, D, L with T fixed) over every grid location.
Matrix evaluate(const Eigen::Ref<const Matrix>& X, const SpaceTimeGrid& grid, Fidelity fidelity,
                LowFidelityForm form = LowFidelityForm::reciprocal);

struct ExperimentSizes {
    int n_low = 60;
    int n_high = 30;
    int n_test = 30;

    static ExperimentSizes paper() { return {}; }
    static ExperimentSizes desk() { return {30, 15, 15}; }
};

struct Experiment {
    MultifidelityDataset data;  // two levels over the grid
    Matrix X_test;              // n_test x 3
    Matrix Y_test;              // high-fidelity truth at X_test
    SpaceTimeGrid grid;
    std::uint64_t seed = 0;
    ExperimentSizes sizes;
    LowFidelityForm form = LowFidelityForm::reciprocal;
};

/// Level-1 Latin hypercube, nested level-2 subsample, uniform test inputs and all outputs,
/// deterministic given seed.
Experiment generate_experiment(std::uint64_t seed, ExperimentSizes sizes = ExperimentSizes::paper(),
                               LowFidelityForm form = LowFidelityForm::reciprocal);

}  // namespace mfgp::testbed
