#pragma once

#include "mfgp/dataset.hpp"
#include "mfgp/mcmc.hpp"
#include "mfgp/nonsep.hpp"
#include "mfgp/sep.hpp"
#include "mfgp/testbed.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mfgp::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

enum class Model { sep, nonsep, pp_baseline };
enum class Preset { desk, paper };

std::string to_string(Model model);
std::string to_string(Preset preset);

/// Line number of every value in a JSON document, keyed by JSON pointer.
class SourceMap {
public:
    SourceMap() = default;
    explicit SourceMap(const std::string& text);
    /// Line of the value at `pointer`, or of its nearest recorded ancestor.
    [[nodiscard]] int line(const std::string& pointer) const;

private:
    std::map<std::string, int> lines_;
};

struct TestbedSource {
    std::uint64_t seed = 1;
    testbed::ExperimentSizes sizes;
    testbed::LowFidelityForm form = testbed::LowFidelityForm::reciprocal;
};

struct FileSource {
    std::vector<fs::path> designs;
    std::vector<fs::path> outputs;
    fs::path locations;
    fs::path test_inputs;
    fs::path test_outputs;
};

struct PredictionSettings {
    int samples_per_input = 1000;
    std::uint64_t seed = 1;
    int chain_draws = 0;
    std::vector<int> mask;  // zero-based locations
};

struct SweepSettings {
    int p_min = 1;
    int p_max = 10;
};

struct RunConfig {
    Model model = Model::sep;
    Preset preset = Preset::desk;
    std::uint64_t seed = 1;
    int threads = 1;
    fs::path out = "mfgp_out";
    std::optional<TestbedSource> testbed;
    FileSource files;
    sep::SepConfig sep;
    nonsep::NonsepConfig nonsep;
    ChainSettings mcmc;
    PredictionSettings prediction;
    SweepSettings sweep;
    // Model sections are resolved against the dataset (level count, input box) in resolve_models.
    Json sep_section;
    Json nonsep_section;
    std::string source;
    SourceMap lines;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> out;
    std::optional<Preset> preset;
    std::optional<int> threads;
};

Preset preset_from_string(const std::string& name);

/// Parses and validates a run configuration. Command-line overrides take precedence over the
/// document, which takes precedence over preset defaults. Schema errors are ConfigError with
/// "file:line:" prefixes. `path` may be empty for a configuration built from overrides alone.
RunConfig load_run_config(const fs::path& path, const Overrides& overrides);
RunConfig parse_run_config(const std::string& text, const std::string& source, const Overrides& overrides);

struct LoadedData {
    MultifidelityDataset data;
    Matrix X_test;  // empty when no test inputs are configured
    Matrix Y_test;
};

/// Generates the testbed or reads the configured CSV files.
LoadedData load_data(const RunConfig& config);

/// Fills sep and nonsep from their sections with defaults sized to the dataset, then validates
/// them against it.
void resolve_models(RunConfig& config, const MultifidelityDataset& data);

/// Every resolved setting (defaults included) with one-based level and location ids, in the same
/// schema the loader accepts.
Json effective_config(const RunConfig& config);

}  // namespace mfgp::cli
