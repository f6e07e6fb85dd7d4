#include "run_config.hpp"

#include "mfgp/error.hpp"
#include "mfgp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

namespace mfgp::cli {

std::string to_string(Model model) {
    switch (model) {
        case Model::sep:
            return "sep";
        case Model::nonsep:
            return "nonsep";
        case Model::pp_baseline:
            return "pp-baseline";
    }
    return "sep";
}

std::string to_string(Preset preset) {
    return preset == Preset::desk ? "desk" : "paper";
}

Preset preset_from_string(const std::string& name) {
    if (name == "desk") {
        return Preset::desk;
    }
    if (name == "paper") {
        return Preset::paper;
    }
    throw ConfigError("unknown preset '" + name + "' (expected desk or paper)");
}

namespace {

std::string escape_token(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') {
            out += "~0";
        } else if (c == '/') {
            out += "~1";
        } else {
            out += c;
        }
    }
    return out;
}

// Minimal recursive scan of well-formed JSON that records the line where each value starts.
class Scanner {
public:
    Scanner(const std::string& text, std::map<std::string, int>& lines) : text_(text), lines_(lines) {}

    void run() {
        skip_ws();
        if (pos_ < text_.size()) {
            value("");
        }
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            line_ += text_[pos_] == '\n';
            ++pos_;
        }
    }

    std::string string() {
        std::string out;
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                ++pos_;
            }
            out += text_[pos_++];
        }
        ++pos_;
        return out;
    }

    void value(const std::string& ptr) {
        lines_.emplace(ptr, line_);
        if (pos_ >= text_.size()) {
            return;
        }
        const char c = text_[pos_];
        if (c == '{') {
            ++pos_;
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] != '}') {
                const std::string key = string();
                skip_ws();
                ++pos_;  // ':'
                skip_ws();
                value(ptr + "/" + escape_token(key));
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    skip_ws();
                }
            }
            ++pos_;
        } else if (c == '[') {
            ++pos_;
            skip_ws();
            int index = 0;
            while (pos_ < text_.size() && text_[pos_] != ']') {
                value(ptr + "/" + std::to_string(index++));
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    skip_ws();
                }
            }
            ++pos_;
        } else if (c == '"') {
            string();
        } else {
            while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
                   text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']') {
                ++pos_;
            }
        }
    }

    const std::string& text_;
    std::map<std::string, int>& lines_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace

SourceMap::SourceMap(const std::string& text) {
    Scanner(text, lines_).run();
}

int SourceMap::line(const std::string& pointer) const {
    std::string p = pointer;
    while (true) {
        auto it = lines_.find(p);
        if (it != lines_.end()) {
            return it->second;
        }
        if (p.empty()) {
            return 1;
        }
        p = p.substr(0, p.rfind('/'));
    }
}

namespace {

struct Ctx {
    std::string source;
    const SourceMap* lines;

    [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
        throw ConfigError(source + ":" + std::to_string(lines->line(ptr)) + ": " + msg);
    }

    static std::string name(const std::string& ptr) {
        std::string out = ptr.empty() ? "<root>" : ptr.substr(1);
        for (auto& c : out) {
            if (c == '/') {
                c = '.';
            }
        }
        return out;
    }

    void keys(const Json& obj, const std::string& ptr, const std::set<std::string>& allowed) const {
        if (!obj.is_object()) {
            fail(ptr, name(ptr) + " must be an object");
        }
        for (const auto& [key, value] : obj.items()) {
            if (!allowed.count(key)) {
                std::string list;
                for (const auto& a : allowed) {
                    list += (list.empty() ? "" : ", ") + a;
                }
                fail(ptr + "/" + escape_token(key),
                     "unknown key '" + key + "' in " + name(ptr) + " (allowed: " + list + ")");
            }
        }
    }

    double number(const Json& v, const std::string& ptr, bool positive, bool nonnegative = false) const {
        if (!v.is_number()) {
            fail(ptr, name(ptr) + " must be a number");
        }
        const double x = v.get<double>();
        if (positive && !(x > 0.0)) {
            fail(ptr, name(ptr) + " must be positive");
        }
        if (nonnegative && !(x >= 0.0)) {
            fail(ptr, name(ptr) + " must be nonnegative");
        }
        return x;
    }

    long long integer(const Json& v, const std::string& ptr, long long min) const {
        if (!v.is_number_integer()) {
            fail(ptr, name(ptr) + " must be an integer");
        }
        const auto x = v.get<long long>();
        if (x < min) {
            fail(ptr, name(ptr) + " must be at least " + std::to_string(min));
        }
        return x;
    }

    std::uint64_t seed(const Json& v, const std::string& ptr) const {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            fail(ptr, name(ptr) + " must be a nonnegative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::string string(const Json& v, const std::string& ptr) const {
        if (!v.is_string()) {
            fail(ptr, name(ptr) + " must be a string");
        }
        return v.get<std::string>();
    }

    bool boolean(const Json& v, const std::string& ptr) const {
        if (!v.is_boolean()) {
            fail(ptr, name(ptr) + " must be true or false");
        }
        return v.get<bool>();
    }

    // A scalar applied to every level, or one entry per level.
    std::vector<double> per_level(const Json& v, const std::string& ptr, int count, bool positive,
                                  bool nonnegative = false) const {
        if (v.is_array()) {
            if (static_cast<int>(v.size()) != count) {
                fail(ptr, name(ptr) + " needs " + std::to_string(count) + " entries, found " + std::to_string(v.size()));
            }
            std::vector<double> out;
            for (std::size_t i = 0; i < v.size(); ++i) {
                out.push_back(number(v[i], ptr + "/" + std::to_string(i), positive, nonnegative));
            }
            return out;
        }
        return std::vector<double>(count, number(v, ptr, positive, nonnegative));
    }

    std::vector<double> vector(const Json& v, const std::string& ptr, int count) const {
        if (!v.is_array() || static_cast<int>(v.size()) != count) {
            fail(ptr, name(ptr) + " must be a list of " + std::to_string(count) + " numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(number(v[i], ptr + "/" + std::to_string(i), true));
        }
        return out;
    }

    // One list for all levels, or a list of lists with one per level.
    std::vector<std::vector<double>> scales(const Json& v, const std::string& ptr, int levels, int dim) const {
        if (v.is_array() && !v.empty() && v[0].is_array()) {
            if (static_cast<int>(v.size()) != levels) {
                fail(ptr, name(ptr) + " needs one list per level (" + std::to_string(levels) + ")");
            }
            std::vector<std::vector<double>> out;
            for (std::size_t t = 0; t < v.size(); ++t) {
                out.push_back(vector(v[t], ptr + "/" + std::to_string(t), dim));
            }
            return out;
        }
        return std::vector<std::vector<double>>(levels, vector(v, ptr, dim));
    }

    fs::path path(const Json& v, const std::string& ptr, const fs::path& base) const {
        fs::path p = string(v, ptr);
        return p.is_relative() ? base / p : p;
    }
};

Ctx context(const RunConfig& c) {
    return {c.source, &c.lines};
}

void parse_dataset(const Json& d, const std::string& ptr, const Ctx& ctx, const fs::path& base, RunConfig& c) {
    ctx.keys(d, ptr, {"testbed", "designs", "outputs", "locations", "test_inputs", "test_outputs"});
    if (d.contains("testbed")) {
        if (d.contains("designs") || d.contains("outputs")) {
            ctx.fail(ptr, "dataset takes either testbed or designs/outputs, not both");
        }
        const Json& tb = d["testbed"];
        const std::string tp = ptr + "/testbed";
        ctx.keys(tb, tp, {"seed", "sizes", "low_fidelity"});
        TestbedSource src;
        src.seed = c.seed;
        src.sizes = c.preset == Preset::paper ? testbed::ExperimentSizes::paper() : testbed::ExperimentSizes::desk();
        if (tb.contains("seed")) {
            src.seed = ctx.seed(tb["seed"], tp + "/seed");
        }
        if (tb.contains("sizes")) {
            const Json& s = tb["sizes"];
            const std::string sp = tp + "/sizes";
            if (s.is_string()) {
                const auto name = s.get<std::string>();
                if (name == "paper") {
                    src.sizes = testbed::ExperimentSizes::paper();
                } else if (name == "desk") {
                    src.sizes = testbed::ExperimentSizes::desk();
                } else {
                    ctx.fail(sp, "sizes must be \"paper\", \"desk\" or an object with n_low, n_high, n_test");
                }
            } else {
                ctx.keys(s, sp, {"n_low", "n_high", "n_test"});
                for (const char* k : {"n_low", "n_high", "n_test"}) {
                    if (!s.contains(k)) {
                        ctx.fail(sp, std::string("sizes is missing ") + k);
                    }
                }
                src.sizes.n_low = static_cast<int>(ctx.integer(s["n_low"], sp + "/n_low", 2));
                src.sizes.n_high = static_cast<int>(ctx.integer(s["n_high"], sp + "/n_high", 2));
                src.sizes.n_test = static_cast<int>(ctx.integer(s["n_test"], sp + "/n_test", 1));
                if (src.sizes.n_high > src.sizes.n_low) {
                    ctx.fail(sp + "/n_high", "n_high cannot exceed n_low");
                }
            }
        }
        if (tb.contains("low_fidelity")) {
            try {
                src.form = testbed::low_fidelity_form_from_string(ctx.string(tb["low_fidelity"], tp + "/low_fidelity"));
            } catch (const ConfigError& e) {
                ctx.fail(tp + "/low_fidelity", e.what());
            }
        }
        c.testbed = src;
        return;
    }
    for (const char* k : {"designs", "outputs"}) {
        if (!d.contains(k) || !d[k].is_array() || d[k].empty()) {
            ctx.fail(ptr, std::string("dataset needs a testbed or a non-empty ") + k + " list");
        }
    }
    if (d["designs"].size() != d["outputs"].size()) {
        ctx.fail(ptr + "/outputs", "dataset.designs and dataset.outputs need one file per level");
    }
    for (std::size_t t = 0; t < d["designs"].size(); ++t) {
        c.files.designs.push_back(ctx.path(d["designs"][t], ptr + "/designs/" + std::to_string(t), base));
        c.files.outputs.push_back(ctx.path(d["outputs"][t], ptr + "/outputs/" + std::to_string(t), base));
    }
    if (d.contains("locations")) {
        c.files.locations = ctx.path(d["locations"], ptr + "/locations", base);
    }
    if (d.contains("test_inputs")) {
        c.files.test_inputs = ctx.path(d["test_inputs"], ptr + "/test_inputs", base);
    }
    if (d.contains("test_outputs")) {
        if (!d.contains("test_inputs")) {
            ctx.fail(ptr + "/test_outputs", "dataset.test_outputs requires dataset.test_inputs");
        }
        c.files.test_outputs = ctx.path(d["test_outputs"], ptr + "/test_outputs", base);
    }
    std::vector<fs::path> all = c.files.designs;
    all.insert(all.end(), c.files.outputs.begin(), c.files.outputs.end());
    for (const auto& p : {c.files.locations, c.files.test_inputs, c.files.test_outputs}) {
        if (!p.empty()) {
            all.push_back(p);
        }
    }
    for (const auto& p : all) {
        if (!fs::exists(p)) {
            ctx.fail(ptr, "dataset file " + p.string() + " does not exist");
        }
    }
}

void parse_mcmc(const Json& m, const std::string& ptr, const Ctx& ctx, RunConfig& c) {
    ctx.keys(m, ptr, {"iterations", "burn_in", "thin", "proposal_scales", "adapt"});
    if (m.contains("iterations")) {
        c.mcmc.iterations = static_cast<int>(ctx.integer(m["iterations"], ptr + "/iterations", 1));
    }
    if (m.contains("burn_in")) {
        c.mcmc.burn_in = static_cast<int>(ctx.integer(m["burn_in"], ptr + "/burn_in", 0));
    }
    if (m.contains("thin")) {
        c.mcmc.thin = static_cast<int>(ctx.integer(m["thin"], ptr + "/thin", 1));
    }
    if (m.contains("adapt")) {
        c.mcmc.adapt = ctx.boolean(m["adapt"], ptr + "/adapt");
    }
    if (m.contains("proposal_scales")) {
        const Json& v = m["proposal_scales"];
        if (!v.is_array()) {
            ctx.fail(ptr + "/proposal_scales", "mcmc.proposal_scales must be a list of numbers");
        }
        c.mcmc.proposal_scales.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            c.mcmc.proposal_scales.push_back(ctx.number(v[i], ptr + "/proposal_scales/" + std::to_string(i), true));
        }
    }
    if (c.mcmc.burn_in >= c.mcmc.iterations) {
        ctx.fail(ptr + "/burn_in", "mcmc.burn_in must be smaller than mcmc.iterations");
    }
    c.mcmc.seed = c.seed;
}

void parse_prediction(const Json& p, const std::string& ptr, const Ctx& ctx, RunConfig& c) {
    ctx.keys(p, ptr, {"samples_per_input", "seed", "chain_draws", "mask"});
    if (p.contains("samples_per_input")) {
        c.prediction.samples_per_input = static_cast<int>(ctx.integer(p["samples_per_input"], ptr + "/samples_per_input", 1));
    }
    if (p.contains("seed")) {
        c.prediction.seed = ctx.seed(p["seed"], ptr + "/seed");
    }
    if (p.contains("chain_draws")) {
        c.prediction.chain_draws = static_cast<int>(ctx.integer(p["chain_draws"], ptr + "/chain_draws", 0));
    }
    if (p.contains("mask")) {
        const Json& v = p["mask"];
        if (!v.is_array()) {
            ctx.fail(ptr + "/mask", "prediction.mask must be a list of one-based location ids");
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            c.prediction.mask.push_back(static_cast<int>(ctx.integer(v[i], ptr + "/mask/" + std::to_string(i), 1)) - 1);
        }
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source, const Overrides& overrides) {
    RunConfig c;
    c.source = source;
    Json doc;
    try {
        doc = text.empty() ? Json::object() : Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    c.lines = SourceMap(text);
    const Ctx ctx = context(c);
    ctx.keys(doc, "", {"model", "preset", "seed", "threads", "out", "dataset", "sep", "nonsep", "mcmc", "prediction", "sweep"});

    if (doc.contains("model")) {
        const std::string m = ctx.string(doc["model"], "/model");
        if (m == "sep") {
            c.model = Model::sep;
        } else if (m == "nonsep") {
            c.model = Model::nonsep;
        } else if (m == "pp-baseline") {
            c.model = Model::pp_baseline;
        } else {
            ctx.fail("/model", "model must be sep, nonsep or pp-baseline (got '" + m + "')");
        }
    }
    if (overrides.preset) {
        c.preset = *overrides.preset;
    } else if (doc.contains("preset")) {
        try {
            c.preset = preset_from_string(ctx.string(doc["preset"], "/preset"));
        } catch (const ConfigError& e) {
            ctx.fail("/preset", e.what());
        }
    }
    if (overrides.seed) {
        c.seed = *overrides.seed;
    } else if (doc.contains("seed")) {
        c.seed = ctx.seed(doc["seed"], "/seed");
    }
    if (overrides.threads) {
        c.threads = *overrides.threads;
    } else if (doc.contains("threads")) {
        c.threads = static_cast<int>(ctx.integer(doc["threads"], "/threads", 0));
    }
    if (c.threads < 0) {
        throw ConfigError("threads must be nonnegative");
    }
    const fs::path base = source.empty() || source == "<overrides>" ? fs::current_path()
                                                                   : fs::absolute(fs::path(source)).parent_path();
    if (overrides.out) {
        c.out = *overrides.out;
    } else if (doc.contains("out")) {
        c.out = ctx.path(doc["out"], "/out", base);
    }

    if (doc.contains("dataset")) {
        parse_dataset(doc["dataset"], "/dataset", ctx, base, c);
    } else {
        TestbedSource src;
        src.seed = c.seed;
        src.sizes = c.preset == Preset::paper ? testbed::ExperimentSizes::paper() : testbed::ExperimentSizes::desk();
        c.testbed = src;
    }

    if (c.preset == Preset::desk) {
        c.mcmc = ChainSettings::desk();
    } else {
        c.mcmc = c.model == Model::nonsep ? ChainSettings::paper_nonsep() : ChainSettings::paper_sep();
    }
    c.mcmc.seed = c.seed;
    if (doc.contains("mcmc")) {
        parse_mcmc(doc["mcmc"], "/mcmc", ctx, c);
    }
    c.prediction.seed = c.seed;
    if (doc.contains("prediction")) {
        parse_prediction(doc["prediction"], "/prediction", ctx, c);
    }
    if (doc.contains("sweep")) {
        const Json& s = doc["sweep"];
        ctx.keys(s, "/sweep", {"p_min", "p_max"});
        if (s.contains("p_min")) {
            c.sweep.p_min = static_cast<int>(ctx.integer(s["p_min"], "/sweep/p_min", 1));
        }
        if (s.contains("p_max")) {
            c.sweep.p_max = static_cast<int>(ctx.integer(s["p_max"], "/sweep/p_max", 1));
        }
        if (c.sweep.p_max < c.sweep.p_min) {
            ctx.fail("/sweep", "sweep.p_max must be at least sweep.p_min");
        }
    }
    if (doc.contains("sep")) {
        ctx.keys(doc["sep"], "/sep",
                 {"gamma", "basis", "neighbors_p", "tau2", "eta", "lambda", "half_cauchy_scales", "jitter", "smoothness"});
        c.sep_section = doc["sep"];
    }
    if (doc.contains("nonsep")) {
        ctx.keys(doc["nonsep"], "/nonsep",
                 {"components", "scaling", "auto_predictors", "predictor_threshold", "prior_scales", "overrides",
                  "jitter", "smoothness"});
        c.nonsep_section = doc["nonsep"];
    }
    return c;
}

RunConfig load_run_config(const fs::path& path, const Overrides& overrides) {
    if (path.empty()) {
        return parse_run_config("", "<overrides>", overrides);
    }
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw ConfigError("cannot read config file " + path.string());
    }
    const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_run_config(text, path.string(), overrides);
}

LoadedData load_data(const RunConfig& config) {
    LoadedData out;
    if (config.testbed) {
        auto ex = testbed::generate_experiment(config.testbed->seed, config.testbed->sizes, config.testbed->form);
        out.data = std::move(ex.data);
        out.X_test = std::move(ex.X_test);
        out.Y_test = std::move(ex.Y_test);
        return out;
    }
    io::DatasetFiles files{config.files.designs, config.files.outputs, config.files.locations};
    out.data = io::load_dataset(files);
    if (!config.files.test_inputs.empty()) {
        out.X_test = io::read_csv(config.files.test_inputs).values;
        if (out.X_test.cols() != out.data.input_dim()) {
            throw ConfigError(config.files.test_inputs.string() + ": test inputs need " +
                              std::to_string(out.data.input_dim()) + " columns");
        }
    }
    if (!config.files.test_outputs.empty()) {
        out.Y_test = io::read_csv(config.files.test_outputs).values;
        if (out.Y_test.rows() != out.X_test.rows() || out.Y_test.cols() != out.data.num_outputs()) {
            throw ConfigError(config.files.test_outputs.string() + ": test outputs need one row per test input and " +
                              std::to_string(out.data.num_outputs()) + " columns");
        }
    }
    return out;
}

namespace {

void resolve_sep(RunConfig& c, const MultifidelityDataset& data, const Ctx& ctx) {
    const int m = data.num_levels();
    const int d = data.input_dim();
    sep::SepConfig s = sep::SepConfig::defaults(m, data.effective_bounds());
    s.neighbors_p = c.model == Model::pp_baseline ? 0 : 1;
    const Json& j = c.sep_section;
    const std::string p = "/sep";
    if (!j.is_null()) {
        if (j.contains("gamma")) {
            s.gamma = ctx.per_level(j["gamma"], p + "/gamma", m - 1, false);
        }
        if (j.contains("basis")) {
            const Json& b = j["basis"];
            auto one = [&](const Json& v, const std::string& ptr) {
                try {
                    return sep::mean_basis_from_string(ctx.string(v, ptr));
                } catch (const ConfigError& e) {
                    ctx.fail(ptr, e.what());
                }
            };
            if (b.is_array()) {
                if (static_cast<int>(b.size()) != m) {
                    ctx.fail(p + "/basis", "sep.basis needs one entry per level (" + std::to_string(m) + ")");
                }
                for (int t = 0; t < m; ++t) {
                    s.basis[t] = one(b[t], p + "/basis/" + std::to_string(t));
                }
            } else {
                s.basis.assign(m, one(b, p + "/basis"));
            }
        }
        if (j.contains("neighbors_p")) {
            s.neighbors_p = static_cast<int>(ctx.integer(j["neighbors_p"], p + "/neighbors_p", 0));
            if (c.model == Model::pp_baseline && s.neighbors_p != 0) {
                ctx.fail(p + "/neighbors_p", "pp-baseline uses neighbors_p = 0");
            }
        }
        if (j.contains("tau2")) {
            s.tau2 = ctx.per_level(j["tau2"], p + "/tau2", m, true);
        }
        if (j.contains("eta")) {
            s.eta = ctx.per_level(j["eta"], p + "/eta", m, false, true);
        }
        if (j.contains("lambda")) {
            s.lambda = ctx.per_level(j["lambda"], p + "/lambda", m, true);
        }
        if (j.contains("half_cauchy_scales")) {
            s.half_cauchy_scales = ctx.scales(j["half_cauchy_scales"], p + "/half_cauchy_scales", m, d);
        }
        if (j.contains("jitter")) {
            s.jitter = ctx.number(j["jitter"], p + "/jitter", false, true);
        }
        if (j.contains("smoothness")) {
            s.smoothness = ctx.number(j["smoothness"], p + "/smoothness", true);
        }
    }
    try {
        s.validate(data);
    } catch (const ConfigError& e) {
        ctx.fail(p, e.what());
    }
    c.sep = std::move(s);
}

void resolve_nonsep(RunConfig& c, const MultifidelityDataset& data, const Ctx& ctx) {
    const int m = data.num_levels();
    const int d = data.input_dim();
    nonsep::NonsepConfig s = nonsep::NonsepConfig::defaults(m, data.effective_bounds(), 8);
    int cap = data.num_outputs();
    for (const auto& lv : data.levels) {
        cap = std::min(cap, static_cast<int>(lv.X.rows()) - 3);
    }
    for (auto& k : s.components) {
        k = std::max(1, std::min(k, cap));
    }
    const Json& j = c.nonsep_section;
    const std::string p = "/nonsep";
    if (!j.is_null()) {
        if (j.contains("components")) {
            const auto v = ctx.per_level(j["components"], p + "/components", m, true);
            for (int t = 0; t < m; ++t) {
                if (v[t] != std::floor(v[t])) {
                    ctx.fail(p + "/components", "nonsep.components must be whole numbers");
                }
                s.components[t] = static_cast<int>(v[t]);
            }
        }
        if (j.contains("scaling")) {
            try {
                s.scaling = nonsep::scaling_from_string(ctx.string(j["scaling"], p + "/scaling"));
            } catch (const ConfigError& e) {
                ctx.fail(p + "/scaling", e.what());
            }
        }
        if (j.contains("auto_predictors")) {
            s.auto_predictors = ctx.boolean(j["auto_predictors"], p + "/auto_predictors");
        }
        if (j.contains("predictor_threshold")) {
            s.predictor_threshold = ctx.number(j["predictor_threshold"], p + "/predictor_threshold", true);
        }
        if (j.contains("prior_scales")) {
            s.prior_scales = ctx.scales(j["prior_scales"], p + "/prior_scales", m, d);
        }
        if (j.contains("overrides")) {
            const Json& o = j["overrides"];
            if (!o.is_array()) {
                ctx.fail(p + "/overrides", "nonsep.overrides must be a list of {level, component, scales}");
            }
            for (std::size_t i = 0; i < o.size(); ++i) {
                const std::string op = p + "/overrides/" + std::to_string(i);
                ctx.keys(o[i], op, {"level", "component", "scales"});
                if (!o[i].contains("level") || !o[i].contains("component") || !o[i].contains("scales")) {
                    ctx.fail(op, "each override needs level, component and scales");
                }
                const int lv = static_cast<int>(ctx.integer(o[i]["level"], op + "/level", 1));
                const int comp = static_cast<int>(ctx.integer(o[i]["component"], op + "/component", 1));
                if (lv > m) {
                    ctx.fail(op + "/level", "override level exceeds the level count");
                }
                s.scale_overrides[{lv - 1, comp - 1}] = ctx.vector(o[i]["scales"], op + "/scales", d);
            }
        }
        if (j.contains("jitter")) {
            s.jitter = ctx.number(j["jitter"], p + "/jitter", false, true);
        }
        if (j.contains("smoothness")) {
            s.smoothness = ctx.number(j["smoothness"], p + "/smoothness", true);
        }
    }
    try {
        s.validate(data);
    } catch (const ConfigError& e) {
        ctx.fail(p, e.what());
    }
    c.nonsep = std::move(s);
}

}  // namespace

void resolve_models(RunConfig& config, const MultifidelityDataset& data) {
    const Ctx ctx = context(config);
    if (config.model == Model::nonsep) {
        resolve_nonsep(config, data, ctx);
    } else {
        resolve_sep(config, data, ctx);
    }
    for (int j : config.prediction.mask) {
        if (j >= data.num_outputs()) {
            ctx.fail("/prediction/mask", "prediction.mask id " + std::to_string(j + 1) + " exceeds the location count");
        }
    }
    if (!config.mcmc.proposal_scales.empty() &&
        static_cast<int>(config.mcmc.proposal_scales.size()) != data.input_dim()) {
        ctx.fail("/mcmc/proposal_scales", "mcmc.proposal_scales needs one entry per input dimension");
    }
}

Json effective_config(const RunConfig& c) {
    Json j;
    j["model"] = to_string(c.model);
    j["preset"] = to_string(c.preset);
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out"] = fs::absolute(c.out).lexically_normal().string();
    Json d;
    if (c.testbed) {
        d["testbed"] = {{"seed", c.testbed->seed},
                        {"sizes", {{"n_low", c.testbed->sizes.n_low}, {"n_high", c.testbed->sizes.n_high},
                                   {"n_test", c.testbed->sizes.n_test}}},
                        {"low_fidelity", testbed::to_string(c.testbed->form)}};
    } else {
        auto abs = [](const fs::path& p) { return fs::absolute(p).lexically_normal().string(); };
        d["designs"] = Json::array();
        d["outputs"] = Json::array();
        for (std::size_t t = 0; t < c.files.designs.size(); ++t) {
            d["designs"].push_back(abs(c.files.designs[t]));
            d["outputs"].push_back(abs(c.files.outputs[t]));
        }
        if (!c.files.locations.empty()) {
            d["locations"] = abs(c.files.locations);
        }
        if (!c.files.test_inputs.empty()) {
            d["test_inputs"] = abs(c.files.test_inputs);
        }
        if (!c.files.test_outputs.empty()) {
            d["test_outputs"] = abs(c.files.test_outputs);
        }
    }
    j["dataset"] = d;
    if (c.model == Model::nonsep) {
        const auto& s = c.nonsep;
        Json n;
        n["components"] = s.components;
        n["scaling"] = nonsep::to_string(s.scaling);
        n["auto_predictors"] = s.auto_predictors;
        n["predictor_threshold"] = s.predictor_threshold;
        n["prior_scales"] = s.prior_scales;
        n["overrides"] = Json::array();
        for (const auto& [key, scales] : s.scale_overrides) {
            n["overrides"].push_back({{"level", key.first + 1}, {"component", key.second + 1}, {"scales", scales}});
        }
        n["jitter"] = s.jitter;
        n["smoothness"] = s.smoothness;
        j["nonsep"] = n;
    } else {
        const auto& s = c.sep;
        Json n;
        n["gamma"] = s.gamma;
        n["basis"] = Json::array();
        for (auto b : s.basis) {
            n["basis"].push_back(sep::to_string(b));
        }
        n["neighbors_p"] = s.neighbors_p;
        n["tau2"] = s.tau2;
        n["eta"] = s.eta;
        n["lambda"] = s.lambda;
        n["half_cauchy_scales"] = s.half_cauchy_scales;
        n["jitter"] = s.jitter;
        n["smoothness"] = s.smoothness;
        j["sep"] = n;
    }
    Json mc = {{"iterations", c.mcmc.iterations}, {"burn_in", c.mcmc.burn_in}, {"thin", c.mcmc.thin},
               {"adapt", c.mcmc.adapt}};
    if (!c.mcmc.proposal_scales.empty()) {
        mc["proposal_scales"] = c.mcmc.proposal_scales;
    }
    j["mcmc"] = mc;
    Json mask = Json::array();
    for (int loc : c.prediction.mask) {
        mask.push_back(loc + 1);
    }
    j["prediction"] = {{"samples_per_input", c.prediction.samples_per_input},
                       {"seed", c.prediction.seed},
                       {"chain_draws", c.prediction.chain_draws},
                       {"mask", mask}};
    j["sweep"] = {{"p_min", c.sweep.p_min}, {"p_max", c.sweep.p_max}};
    return j;
}

}  // namespace mfgp::cli
