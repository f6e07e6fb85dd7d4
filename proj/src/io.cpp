#include "mfgp/io.hpp"

#include "mfgp/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mfgp::io {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        const auto a = cell.find_first_not_of(" \t");
        const auto b = cell.find_last_not_of(" \t");
        out.push_back(a == std::string::npos ? std::string() : cell.substr(a, b - a + 1));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot write " + path.string());
    }
    return os;
}

void finish(std::ofstream& os, const fs::path& path) {
    os.flush();
    if (!os) {
        throw IoError("write failed for " + path.string());
    }
}

std::vector<std::string> numbered(const std::string& prefix, Eigen::Index count) {
    std::vector<std::string> names;
    for (Eigen::Index i = 0; i < count; ++i) {
        names.push_back(prefix + std::to_string(i + 1));
    }
    return names;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value == 0.0 ? 0.0 : value);
    return buf;
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot read " + path.string());
    }
    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const auto cells = split(line);
        if (table.header.empty()) {
            table.header = cells;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(table.header.size()) + " fields, found " + std::to_string(cells.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string& cell = cells[c];
            const char* end = cell.data() + cell.size();
            auto [ptr, ec] = std::from_chars(cell.data() + (!cell.empty() && cell[0] == '+'), end, row[c]);
            if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(row[c])) {
                throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": field " + std::to_string(c + 1) +
                                  " ('" + cell + "') is not a finite number");
            }
        }
        rows.push_back(std::move(row));
    }
    if (table.header.empty()) {
        throw ConfigError(path.string() + ": file is empty");
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
        }
    }
    return table;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header, const Eigen::Ref<const Matrix>& values) {
    if (static_cast<Eigen::Index>(header.size()) != values.cols()) {
        throw InvalidArgument("write_csv: header has " + std::to_string(header.size()) + " names for " +
                              std::to_string(values.cols()) + " columns");
    }
    auto os = open_out(path);
    for (std::size_t c = 0; c < header.size(); ++c) {
        os << (c ? "," : "") << header[c];
    }
    os << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            os << (c ? "," : "") << format_number(values(i, c));
        }
        os << '\n';
    }
    finish(os, path);
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create directory " + dir.string());
    }
    const fs::path probe = dir / ".mfgp_write_probe";
    {
        std::ofstream os(probe);
        if (!os) {
            throw IoError("directory " + dir.string() + " is not writable");
        }
    }
    fs::remove(probe, ec);
}

void write_predictions(const fs::path& path, const PredictiveSummary& summary) {
    auto os = open_out(path);
    os << "input_id,location_id,mean,q025,q975\n";
    for (int i = 0; i < summary.num_inputs(); ++i) {
        for (int j = 0; j < summary.num_locations(); ++j) {
            os << i + 1 << ',' << j + 1 << ',' << format_number(summary.mean(i, j)) << ','
               << format_number(summary.q025(i, j)) << ',' << format_number(summary.q975(i, j)) << '\n';
        }
    }
    finish(os, path);
}

void write_aggregated(const fs::path& path, const PredictiveSummary& summary) {
    auto os = open_out(path);
    os << "input_id,mean,q025,q975\n";
    for (int i = 0; i < summary.num_inputs(); ++i) {
        os << i + 1 << ',' << format_number(summary.agg_mean[i]) << ',' << format_number(summary.agg_q025[i]) << ','
           << format_number(summary.agg_q975[i]) << '\n';
    }
    finish(os, path);
}

PredictiveSummary read_predictions(const fs::path& per_location, const fs::path& aggregated) {
    const CsvTable t = read_csv(per_location);
    const std::vector<std::string> expected = {"input_id", "location_id", "mean", "q025", "q975"};
    if (t.header != expected) {
        throw ConfigError(per_location.string() + ":1: expected header input_id,location_id,mean,q025,q975");
    }
    const int inputs = t.values.rows() ? static_cast<int>(t.values.col(0).maxCoeff()) : 0;
    const int locations = t.values.rows() ? static_cast<int>(t.values.col(1).maxCoeff()) : 0;
    if (static_cast<Eigen::Index>(inputs) * locations != t.values.rows()) {
        throw ConfigError(per_location.string() + ": rows do not form a complete input x location table");
    }
    PredictiveSummary s = make_summary(inputs, locations, 0, {});
    for (Eigen::Index r = 0; r < t.values.rows(); ++r) {
        const auto i = static_cast<Eigen::Index>(t.values(r, 0)) - 1;
        const auto j = static_cast<Eigen::Index>(t.values(r, 1)) - 1;
        if (i < 0 || j < 0 || t.values(r, 0) != std::floor(t.values(r, 0)) || t.values(r, 1) != std::floor(t.values(r, 1))) {
            throw ConfigError(per_location.string() + ":" + std::to_string(r + 2) + ": ids must be positive integers");
        }
        s.mean(i, j) = t.values(r, 2);
        s.q025(i, j) = t.values(r, 3);
        s.q975(i, j) = t.values(r, 4);
    }
    if (!aggregated.empty()) {
        const CsvTable a = read_csv(aggregated);
        if (a.header != std::vector<std::string>{"input_id", "mean", "q025", "q975"} || a.values.rows() != inputs) {
            throw ConfigError(aggregated.string() + ": expected input_id,mean,q025,q975 with one row per input");
        }
        s.agg_mean = a.values.col(1);
        s.agg_q025 = a.values.col(2);
        s.agg_q975 = a.values.col(3);
    }
    return s;
}

void write_chain(const fs::path& path, const Chain& chain, const std::vector<std::string>& parameter_names,
                 int burn_in, int thin) {
    if (static_cast<Eigen::Index>(parameter_names.size()) != chain.samples.cols()) {
        throw InvalidArgument("write_chain: parameter names do not match the chain");
    }
    auto os = open_out(path);
    os << "iteration";
    for (const auto& n : parameter_names) {
        os << ',' << n;
    }
    os << ",log_density,accepted\n";
    for (Eigen::Index r = 0; r < chain.samples.rows(); ++r) {
        os << burn_in + (r + 1) * thin;
        for (Eigen::Index c = 0; c < chain.samples.cols(); ++c) {
            os << ',' << format_number(chain.samples(r, c));
        }
        os << ',' << format_number(chain.log_densities[r]) << ',' << int(chain.accepted[static_cast<std::size_t>(r)])
           << '\n';
    }
    finish(os, path);
}

MultifidelityDataset load_dataset(const DatasetFiles& files) {
    if (files.designs.empty() || files.designs.size() != files.outputs.size()) {
        throw ConfigError("dataset: need one design file and one output file per level (got " +
                          std::to_string(files.designs.size()) + " and " + std::to_string(files.outputs.size()) + ")");
    }
    MultifidelityDataset data;
    for (std::size_t t = 0; t < files.designs.size(); ++t) {
        CsvTable X = read_csv(files.designs[t]);
        CsvTable Y = read_csv(files.outputs[t]);
        if (X.values.rows() != Y.values.rows()) {
            throw ConfigError("dataset level " + std::to_string(t + 1) + ": " + files.designs[t].string() + " has " +
                              std::to_string(X.values.rows()) + " rows but " + files.outputs[t].string() + " has " +
                              std::to_string(Y.values.rows()));
        }
        if (t == 0) {
            data.input_names = X.header;
        } else if (X.header != data.input_names) {
            throw ConfigError(files.designs[t].string() + ":1: input columns differ from level 1");
        }
        data.levels.push_back({std::move(X.values), std::move(Y.values), {}});
    }
    if (!files.locations.empty()) {
        CsvTable L = read_csv(files.locations);
        if (L.values.rows() != data.num_outputs()) {
            throw ConfigError(files.locations.string() + ": " + std::to_string(L.values.rows()) +
                              " locations for " + std::to_string(data.num_outputs()) + " output columns");
        }
        data.locations = std::move(L.values);
    }
    data.validate();
    return data;
}

DatasetFiles write_dataset(const fs::path& dir, const MultifidelityDataset& data) {
    ensure_directory(dir);
    DatasetFiles files;
    const auto input_names = data.input_names.empty() ? numbered("x", data.input_dim()) : data.input_names;
    const auto output_names = numbered("y", data.num_outputs());
    for (int t = 0; t < data.num_levels(); ++t) {
        const std::string stem = "level" + std::to_string(t + 1);
        files.designs.push_back(dir / (stem + "_design.csv"));
        files.outputs.push_back(dir / (stem + "_outputs.csv"));
        write_csv(files.designs.back(), input_names, data.levels[t].X);
        write_csv(files.outputs.back(), output_names, data.levels[t].Y);
    }
    if (data.locations.size() > 0) {
        files.locations = dir / "locations.csv";
        write_csv(files.locations, numbered("s", data.locations.cols()), data.locations);
    }
    return files;
}

}  // namespace mfgp::io
