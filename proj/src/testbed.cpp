#include "mfgp/testbed.hpp"

#include "mfgp/error.hpp"
#include "mfgp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mfgp::testbed {

namespace {

constexpr double kTwoSqrtPi = 3.5449077018110320546;  // sqrt(4 pi)

double approx_exp(double z, LowFidelityForm form) {
    switch (form) {
        case LowFidelityForm::reciprocal:
            return 1.0 / (1.0 - z);
        case LowFidelityForm::linear:
            return 1.0 + z;
        case LowFidelityForm::clipped_linear:
            return std::max(0.0, 1.0 + z);
    }
    return 1.0 + z;
}

template <class F>
double spill(const EnvInput& in, double s1, double s2, F&& f) {
    if (!(s2 > 0.0)) {
        throw InvalidArgument("concentration: time coordinate must be positive");
    }
    if (!(in.D > 0.0)) {
        throw InvalidArgument("concentration: diffusion rate must be positive");
    }
    const double pi = std::numbers::pi;
    double c = in.M / std::sqrt(4.0 * pi * in.D * s2) * f(-s1 * s1 / (4.0 * in.D * s2));
    if (in.T < s2) {
        const double dt = s2 - in.T;
        const double u = s1 - in.L;
        c += in.M / std::sqrt(4.0 * pi * in.D * dt) * f(-u * u / (4.0 * in.D * dt));
    }
    return c;
}

}  // namespace

void EnvInput::validate() const {
    const auto b = input_bounds();
    auto check = [](double v, double lo, double hi, const char* name) {
        if (!(v >= lo && v <= hi)) {
            throw InvalidArgument(std::string("EnvInput: ") + name + " is out of range");
        }
    };
    check(M, b[0].lower, b[0].upper, "M");
    check(D, b[1].lower, b[1].upper, "D");
    check(L, b[2].lower, b[2].upper, "L");
    check(T, 30.0, 30.295, "T");
}

std::vector<Bound> input_bounds() {
    return {{7.0, 13.0}, {0.02, 0.12}, {0.01, 3.0}};
}

std::string to_string(LowFidelityForm form) {
    switch (form) {
        case LowFidelityForm::reciprocal:
            return "reciprocal";
        case LowFidelityForm::linear:
            return "linear";
        case LowFidelityForm::clipped_linear:
            return "clipped_linear";
    }
    return "reciprocal";
}

LowFidelityForm low_fidelity_form_from_string(const std::string& name) {
    if (name == "reciprocal") {
        return LowFidelityForm::reciprocal;
    }
    if (name == "linear") {
        return LowFidelityForm::linear;
    }
    if (name == "clipped_linear") {
        return LowFidelityForm::clipped_linear;
    }
    throw ConfigError("unknown low-fidelity form '" + name + "' (expected reciprocal, linear or clipped_linear)");
}

double concentration(const EnvInput& input, double s1, double s2) {
    return spill(input, s1, s2, [](double z) { return std::exp(z); });
}

double hi_fidelity(const EnvInput& input, double s1, double s2) {
    return kTwoSqrtPi * concentration(input, s1, s2);
}

double lo_fidelity(const EnvInput& input, double s1, double s2, LowFidelityForm form) {
    return kTwoSqrtPi * spill(input, s1, s2, [form](double z) { return approx_exp(z, form); });
}

SpaceTimeGrid SpaceTimeGrid::standard() {
    SpaceTimeGrid g;
    g.s1 = Vector::LinSpaced(20, 0.5, 5.0);
    g.s2 = Vector::LinSpaced(50, 35.0, 60.0);
    g.locations.resize(20 * 50, 2);
    for (int i = 0; i < 20; ++i) {
        for (int k = 0; k < 50; ++k) {
            g.locations(i * 50 + k, 0) = g.s1[i];
            g.locations(i * 50 + k, 1) = g.s2[k];
        }
    }
    return g;
}

Matrix evaluate(const Eigen::Ref<const Matrix>& X, const SpaceTimeGrid& grid, Fidelity fidelity, LowFidelityForm form) {
    if (X.cols() != 3) {
        throw InvalidArgument("evaluate: inputs need three columns (M, D, L)");
    }
    Matrix Y(X.rows(), grid.size());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const EnvInput in{X(i, 0), X(i, 1), X(i, 2), kSpillTime};
        for (int j = 0; j < grid.size(); ++j) {
            const double s1 = grid.locations(j, 0);
            const double s2 = grid.locations(j, 1);
            Y(i, j) = fidelity == Fidelity::high ? hi_fidelity(in, s1, s2) : lo_fidelity(in, s1, s2, form);
        }
    }
    return Y;
}

Experiment generate_experiment(std::uint64_t seed, ExperimentSizes sizes, LowFidelityForm form) {
    if (sizes.n_low < 2 || sizes.n_high < 2 || sizes.n_high > sizes.n_low || sizes.n_test < 1) {
        throw InvalidArgument("generate_experiment: need 2 <= n_high <= n_low and n_test >= 1");
    }
    Experiment ex;
    ex.seed = seed;
    ex.sizes = sizes;
    ex.form = form;
    ex.grid = SpaceTimeGrid::standard();
    const auto bounds = input_bounds();
    const DesignSet low = latin_hypercube(sizes.n_low, bounds, derive_seed(seed, {1}));
    const DesignSet high = nested_subsample(low, sizes.n_high, derive_seed(seed, {2}));

    Rng rng(derive_seed(seed, {3}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ex.X_test.resize(sizes.n_test, 3);
    for (int i = 0; i < sizes.n_test; ++i) {
        for (int k = 0; k < 3; ++k) {
            ex.X_test(i, k) = bounds[k].lower + (bounds[k].upper - bounds[k].lower) * unit(rng);
        }
    }

    ex.data.levels.resize(2);
    ex.data.levels[0].X = low.points;
    ex.data.levels[0].Y = evaluate(low.points, ex.grid, Fidelity::low, form);
    ex.data.levels[1].X = high.points;
    ex.data.levels[1].Y = evaluate(high.points, ex.grid, Fidelity::high, form);
    ex.data.locations = ex.grid.locations;
    ex.data.input_names = {"M", "D", "L"};
    ex.data.input_bounds = bounds;
    ex.data.validate();
    ex.Y_test = evaluate(ex.X_test, ex.grid, Fidelity::high, form);
    return ex;
}

}  // namespace mfgp::testbed
