#include "commands.hpp"

#include "artifact.hpp"
#include "run_config.hpp"

#include "mfgp/error.hpp"
#include "mfgp/io.hpp"
#include "mfgp/metrics.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace mfgp::cli {

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string preset;
    std::optional<int> threads;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "Run configuration (JSON)");
        cmd->add_option("--seed", seed, "Master seed");
        cmd->add_option("--out", out, "Output directory");
        cmd->add_option("--preset", preset, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
        cmd->add_option("--threads", threads, "Worker cap (0 = all cores)")->check(CLI::NonNegativeNumber);
    }

    RunConfig load() const {
        Overrides o;
        o.seed = seed;
        if (!out.empty()) {
            o.out = out;
        }
        if (!preset.empty()) {
            o.preset = preset_from_string(preset);
        }
        o.threads = threads;
        RunConfig c = load_run_config(config, o);
        if (seed) {
            c.prediction.seed = *seed;
            c.mcmc.seed = *seed;
        }
        return c;
    }
};

void write_json(const fs::path& path, const Json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot write " + path.string());
    }
    os << j.dump(2) << '\n';
    if (!os) {
        throw IoError("write failed for " + path.string());
    }
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) {
        err << "warning: " << w << '\n';
    }
}

void gen_testbed(const RunConfig& config, std::ostream& out) {
    if (!config.testbed) {
        throw ConfigError(config.source + ": gen-testbed needs a testbed dataset, not CSV files");
    }
    const auto& tb = *config.testbed;
    const auto ex = testbed::generate_experiment(tb.seed, tb.sizes, tb.form);
    const io::DatasetFiles files = io::write_dataset(config.out, ex.data);
    const std::vector<std::string> names = {"M", "D", "L"};
    io::write_csv(config.out / "test_inputs.csv", names, ex.X_test);
    std::vector<std::string> outputs;
    for (int j = 0; j < ex.grid.size(); ++j) {
        outputs.push_back("y" + std::to_string(j + 1));
    }
    io::write_csv(config.out / "test_outputs.csv", outputs, ex.Y_test);

    Json m;
    m["seed"] = tb.seed;
    m["counts"] = {{"level1", tb.sizes.n_low}, {"level2", tb.sizes.n_high}, {"test", tb.sizes.n_test},
                   {"locations", ex.grid.size()}};
    Json bounds;
    const auto b = testbed::input_bounds();
    for (std::size_t k = 0; k < names.size(); ++k) {
        bounds[names[k]] = {b[k].lower, b[k].upper};
    }
    m["bounds"] = bounds;
    m["T"] = testbed::kSpillTime;
    m["grid"] = {{"s1", {{"from", 0.5}, {"to", 5.0}, {"count", 20}}},
                 {"s2", {{"from", 35.0}, {"to", 60.0}, {"count", 50}}},
                 {"location_id", "s1 index * 50 + s2 index + 1"}};
    m["low_fidelity"] = testbed::to_string(tb.form);
    Json f;
    for (std::size_t t = 0; t < files.designs.size(); ++t) {
        f["designs"].push_back(files.designs[t].filename().string());
        f["outputs"].push_back(files.outputs[t].filename().string());
    }
    f["locations"] = "locations.csv";
    f["test_inputs"] = "test_inputs.csv";
    f["test_outputs"] = "test_outputs.csv";
    m["files"] = f;
    write_json(config.out / "manifest.json", m);
    out << "wrote testbed (seed " << tb.seed << ", " << tb.sizes.n_low << "/" << tb.sizes.n_high << "/"
        << tb.sizes.n_test << " inputs, " << ex.grid.size() << " locations) to " << config.out.string() << '\n';
}

void fit(RunConfig config, std::ostream& out, std::ostream& err) {
    const LoadedData loaded = load_data(config);
    resolve_models(config, loaded.data);
    io::ensure_directory(config.out);
    write_json(config.out / "effective_config.json", effective_config(config));
    Json artifact;
    if (config.model == Model::nonsep) {
        const auto post = nonsep::fit(loaded.data, config.nonsep, config.mcmc, config.threads);
        report_warnings(post.warnings, err);
        artifact = write_nonsep_fit(config, loaded.data, post);
    } else {
        const auto post = sep::fit(loaded.data, config.sep, config.mcmc, config.threads);
        report_warnings(post.warnings, err);
        artifact = write_sep_fit(config, loaded.data, post);
    }
    write_json(config.out / "fit.json", artifact);
    for (const auto& L : artifact["levels"]) {
        if (L.contains("components")) {
            out << "level " << L["level"] << ": " << L["components"].size() << " weight chains\n";
        } else {
            out << "level " << L["level"] << ": theta_map " << L["theta_map"].dump() << ", acceptance "
                << L["acceptance_rate"].get<double>() << '\n';
        }
    }
    out << "wrote " << (config.out / "fit.json").string() << '\n';
}

void predict(const Common& common, const std::string& fit_path, std::optional<int> samples, std::ostream& out,
             std::ostream& err) {
    fs::path path = fit_path;
    RunConfig config;
    if (common.config.empty()) {
        if (path.empty()) {
            path = (common.out.empty() ? fs::path("mfgp_out") : fs::path(common.out)) / "fit.json";
        }
        const Json fit = read_fit(path);
        if (!fit.contains("config")) {
            throw ConfigError(path.string() + ": fit artifact has no configuration");
        }
        Overrides o;
        o.seed = common.seed;
        o.threads = common.threads;
        if (!common.out.empty()) {
            o.out = common.out;
        }
        config = parse_run_config(fit["config"].dump(2), path.string() + "#config", o);
        if (common.seed) {
            config.prediction.seed = *common.seed;
        }
    } else {
        config = common.load();
        if (path.empty()) {
            path = config.out / "fit.json";
        }
    }
    if (samples) {
        config.prediction.samples_per_input = *samples;
    }
    const Json fit = read_fit(path);
    const LoadedData loaded = load_data(config);
    resolve_models(config, loaded.data);
    if (loaded.X_test.rows() == 0) {
        throw ConfigError("predict: the dataset has no test inputs (set dataset.test_inputs)");
    }
    std::vector<std::string> warnings;
    PredictiveSummary summary;
    if (config.model == Model::nonsep) {
        const auto post = restore_nonsep(fit, config, loaded.data);
        nonsep::SummaryOptions so;
        so.samples_per_input = config.prediction.samples_per_input;
        so.seed = config.prediction.seed;
        so.mask = config.prediction.mask;
        so.threads = config.threads;
        summary = nonsep::predictive_summary(loaded.X_test, post, so, &warnings);
    } else {
        const auto post =
            restore_sep(fit, fs::absolute(path).parent_path(), config, loaded.data, config.prediction.chain_draws > 0);
        sep::SummaryOptions so;
        so.samples_per_input = config.prediction.samples_per_input;
        so.seed = config.prediction.seed;
        so.mask = config.prediction.mask;
        so.threads = config.threads;
        so.chain_draws = config.prediction.chain_draws;
        summary = sep::predictive_summary(loaded.X_test, post, so, &warnings);
    }
    report_warnings(warnings, err);
    io::ensure_directory(config.out);
    io::write_predictions(config.out / "predictions.csv", summary);
    io::write_aggregated(config.out / "aggregated.csv", summary);
    out << "wrote predictions for " << summary.num_inputs() << " inputs x " << summary.num_locations()
        << " locations to " << config.out.string() << '\n';
}

void evaluate(const Common& common, std::string predictions, std::string aggregated, const std::string& truth_path,
              std::ostream& out) {
    RunConfig config = common.load();
    if (predictions.empty()) {
        predictions = (config.out / "predictions.csv").string();
    }
    if (aggregated.empty()) {
        aggregated = (config.out / "aggregated.csv").string();
    }
    PredictiveSummary summary = io::read_predictions(predictions, aggregated);
    summary.mask = config.prediction.mask;
    Matrix truth;
    if (!truth_path.empty()) {
        truth = io::read_csv(truth_path).values;
    } else {
        const LoadedData loaded = load_data(config);
        if (loaded.Y_test.rows() == 0) {
            throw ConfigError("evaluate: no truth available (pass --truth or set dataset.test_outputs)");
        }
        truth = loaded.Y_test;
    }
    for (int j : summary.mask) {
        if (j >= truth.cols()) {
            throw ConfigError("evaluate: prediction.mask exceeds the location count");
        }
    }
    MetricsReport r;
    try {
        r = compute_metrics(truth, summary);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("evaluate: ") + e.what());
    }
    io::ensure_directory(config.out);
    Json j;
    j["marginal"] = {{"rmspe", r.rmspe_marginal}, {"cvg95", r.cvg95_marginal}, {"alci95", r.alci95_marginal}};
    j["aggregated"] = {{"rmspe", r.rmspe_agg}, {"cvg95", r.cvg95_agg}, {"alci95", r.alci95_agg}};
    j["inputs"] = truth.rows();
    j["locations"] = truth.cols();
    write_json(config.out / "metrics.json", j);
    Matrix table(truth.cols(), 4);
    for (Eigen::Index l = 0; l < truth.cols(); ++l) {
        table.row(l) << double(l + 1), r.rmspe_location[l], r.cvg95_location[l], r.alci95_location[l];
    }
    io::write_csv(config.out / "metrics_per_location.csv", {"location_id", "rmspe", "cvg95", "alci95"}, table);
    out << "marginal    RMSPE " << r.rmspe_marginal << "  CVG(95%) " << r.cvg95_marginal << "  ALCI(95%) "
        << r.alci95_marginal << '\n';
    out << "aggregated  RMSPE " << r.rmspe_agg << "  CVG(95%) " << r.cvg95_agg << "  ALCI(95%) " << r.alci95_agg
        << '\n';
}

void sweep(RunConfig config, std::optional<int> p_min, std::optional<int> p_max, std::ostream& out) {
    if (p_min) {
        config.sweep.p_min = *p_min;
    }
    if (p_max) {
        config.sweep.p_max = *p_max;
    }
    if (config.sweep.p_min < 1 || config.sweep.p_max < config.sweep.p_min) {
        throw ConfigError("sweep-pcs: need 1 <= p-min <= p-max");
    }
    config.model = Model::nonsep;
    const LoadedData loaded = load_data(config);
    if (loaded.Y_test.rows() == 0) {
        throw ConfigError("sweep-pcs: the dataset has no test inputs and outputs");
    }
    resolve_models(config, loaded.data);
    config.nonsep.components.assign(config.nonsep.m, config.sweep.p_max);
    config.nonsep.validate(loaded.data);
    std::vector<int> ps;
    for (int p = config.sweep.p_min; p <= config.sweep.p_max; ++p) {
        ps.push_back(p);
    }
    const auto rows =
        nonsep::sweep_components(loaded.data, config.nonsep, ps, config.mcmc, loaded.X_test, loaded.Y_test, config.threads);
    Matrix table(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table.row(static_cast<Eigen::Index>(i)) << rows[i].p, rows[i].rmspe_cokriging, rows[i].rmspe_kriging;
        out << "p=" << rows[i].p << "  cokriging " << rows[i].rmspe_cokriging << "  kriging " << rows[i].rmspe_kriging
            << '\n';
    }
    io::ensure_directory(config.out);
    io::write_csv(config.out / "sweep.csv", {"p", "rmspe_cokriging", "rmspe_kriging"}, table);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multifidelity emulators for spatial simulator output", "mfgp"};
    app.require_subcommand(1);
    Common common;

    auto* gen = app.add_subcommand("gen-testbed", "Generate the chemical-spill testbed dataset");
    common.attach(gen);

    auto* fit_cmd = app.add_subcommand("fit", "Fit SEP, NONSEP or the independent-location baseline");
    common.attach(fit_cmd);

    std::string fit_path;
    std::optional<int> samples;
    auto* pred = app.add_subcommand("predict", "Predictive summaries at the test inputs");
    common.attach(pred);
    pred->add_option("--fit", fit_path, "Fit artifact (default <out>/fit.json)");
    pred->add_option("--samples", samples, "Samples per input")->check(CLI::PositiveNumber);

    std::string predictions, aggregated, truth;
    auto* eval = app.add_subcommand("evaluate", "Marginal and aggregated RMSPE, CVG and ALCI");
    common.attach(eval);
    eval->add_option("--predictions", predictions, "Per-location predictions CSV");
    eval->add_option("--aggregated", aggregated, "Aggregated predictions CSV");
    eval->add_option("--truth", truth, "Truth CSV (inputs x locations)");

    std::optional<int> p_min, p_max;
    auto* sw = app.add_subcommand("sweep-pcs", "RMSPE against the number of principal components");
    common.attach(sw);
    sw->add_option("--p-min", p_min, "Smallest component count")->check(CLI::PositiveNumber);
    sw->add_option("--p-max", p_max, "Largest component count")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        if (gen->parsed()) {
            gen_testbed(common.load(), out);
        } else if (fit_cmd->parsed()) {
            fit(common.load(), out, err);
        } else if (pred->parsed()) {
            predict(common, fit_path, samples, out, err);
        } else if (eval->parsed()) {
            evaluate(common, predictions, aggregated, truth, out);
        } else if (sw->parsed()) {
            sweep(common.load(), p_min, p_max, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const ConditioningError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kSuccess;
}

}  // namespace mfgp::cli
