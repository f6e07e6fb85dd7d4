#pragma once

#include "run_config.hpp"

#include "mfgp/nonsep.hpp"
#include "mfgp/sep.hpp"

#include <string>

namespace mfgp::cli {

inline constexpr int kArtifactVersion = 1;

/// FNV-1a hash of every design, output and location value, as 16 hex digits.
std::string dataset_fingerprint(const MultifidelityDataset& data);

/// Writes one chain CSV per level under out/chains and returns the fit document.
Json write_sep_fit(const RunConfig& config, const MultifidelityDataset& data, const sep::SepPosterior& post);
Json write_nonsep_fit(const RunConfig& config, const MultifidelityDataset& data, const nonsep::NonsepPosterior& post);

Json read_fit(const fs::path& path);

/// Rebuilds the plug-in posterior from the MAP thetas. Chain samples are reloaded from the
/// chain files when `with_chains` is set.
sep::SepPosterior restore_sep(const Json& fit, const fs::path& fit_dir, const RunConfig& config,
                              const MultifidelityDataset& data, bool with_chains);
nonsep::NonsepPosterior restore_nonsep(const Json& fit, const RunConfig& config, const MultifidelityDataset& data);

}  // namespace mfgp::cli
