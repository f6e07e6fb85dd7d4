#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mfgp {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Independent stream seed for a task identified by `keys` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t k : keys) {
        h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
    }
    return h;
}

/// Standard Student-t draw with `dof` degrees of freedom (normal / sqrt(chi2 / dof)).
inline double student_t_draw(Rng& rng, double dof) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::gamma_distribution<double> gamma(0.5 * dof, 2.0);
    const double z = normal(rng);
    const double chi2 = gamma(rng);
    return z / std::sqrt(chi2 / dof);
}

}  // namespace mfgp
