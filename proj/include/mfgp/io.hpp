#pragma once

#include "mfgp/dataset.hpp"
#include "mfgp/kernel.hpp"
#include "mfgp/mcmc.hpp"
#include "mfgp/summary.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mfgp::io {

namespace fs = std::filesystem;

/// Shortest-safe round-trip text: 17 significant digits.
std::string format_number(double value);

struct CsvTable {
    std::vector<std::string> header;
    Matrix values;
};

/// Reads a numeric CSV with one header line. Errors name the file and line.
CsvTable read_csv(const fs::path& path);

void write_csv(const fs::path& path, const std::vector<std::string>& header, const Eigen::Ref<const Matrix>& values);

/// Creates `dir` (and parents) and checks that a file can be written into it.
void ensure_directory(const fs::path& dir);

/// One row per (input, location): input_id, location_id, mean, q025, q975, with one-based ids.
void write_predictions(const fs::path& path, const PredictiveSummary& summary);
/// One row per input: input_id, mean, q025, q975 of the spatial average.
void write_aggregated(const fs::path& path, const PredictiveSummary& summary);

/// Inverse of write_predictions and write_aggregated. The aggregated file is optional.
PredictiveSummary read_predictions(const fs::path& per_location, const fs::path& aggregated);

/// iteration, one column per parameter, log_density, accepted.
void write_chain(const fs::path& path, const Chain& chain, const std::vector<std::string>& parameter_names,
                 int burn_in, int thin);

struct DatasetFiles {
    std::vector<fs::path> designs;  // one per level, lowest fidelity first
    std::vector<fs::path> outputs;
    fs::path locations;
};

/// Loads per-level design and output CSVs and the location table, then validates shapes and
/// nesting.
MultifidelityDataset load_dataset(const DatasetFiles& files);

/// Writes level<t>_design.csv, level<t>_outputs.csv and locations.csv into dir.
DatasetFiles write_dataset(const fs::path& dir, const MultifidelityDataset& data);

}  // namespace mfgp::io
