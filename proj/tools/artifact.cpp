#include "artifact.hpp"

#include "mfgp/error.hpp"
#include "mfgp/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

namespace mfgp::cli {

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
}

void hash_matrix(std::uint64_t& h, const Matrix& M) {
    const std::int64_t shape[2] = {M.rows(), M.cols()};
    hash_bytes(h, shape, sizeof shape);
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            const double v = M(i, j);
            hash_bytes(h, &v, sizeof v);
        }
    }
}

std::vector<std::string> theta_names(const MultifidelityDataset& data) {
    std::vector<std::string> names;
    for (int k = 0; k < data.input_dim(); ++k) {
        names.push_back("theta_" + (static_cast<int>(data.input_names.size()) > k ? data.input_names[k]
                                                                                  : "x" + std::to_string(k + 1)));
    }
    return names;
}

Json vec(const Vector& v) {
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Json mat(const Matrix& M) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        rows.push_back(vec(M.row(i).transpose()));
    }
    return rows;
}

Json chain_summary(const Chain& chain, const Vector& theta_map, const std::string& file, std::uint64_t seed) {
    Json j;
    j["theta_map"] = vec(theta_map);
    j["acceptance_rate"] = chain.acceptance_rate;
    Json ess = Json::array();
    for (Eigen::Index k = 0; k < chain.samples.cols(); ++k) {
        ess.push_back(effective_sample_size(chain.samples.col(k)));
    }
    j["effective_sample_size"] = ess;
    j["chain"] = file;
    j["seed"] = seed;
    return j;
}

Json header(const RunConfig& config, const MultifidelityDataset& data, std::vector<std::string> warnings) {
    Json j;
    j["format"] = "mfgp-fit";
    j["version"] = kArtifactVersion;
    j["model"] = to_string(config.model);
    Json cfg = effective_config(config);
    cfg.erase("threads");
    cfg.erase("out");
    j["config"] = cfg;
    Json d;
    d["fingerprint"] = dataset_fingerprint(data);
    d["levels"] = Json::array();
    for (const auto& lv : data.levels) {
        d["levels"].push_back(static_cast<int>(lv.X.rows()));
    }
    d["input_dim"] = data.input_dim();
    d["num_outputs"] = data.num_outputs();
    j["dataset"] = d;
    j["warnings"] = warnings;
    return j;
}

CorrelationParams theta_from(const Json& j, double smoothness, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw ConfigError("fit artifact: theta_map has the wrong length");
    }
    return CorrelationParams(j.get<std::vector<double>>(), smoothness);
}

void check_header(const Json& fit, const RunConfig& config, const MultifidelityDataset& data) {
    if (fit.value("format", "") != "mfgp-fit" || fit.value("version", 0) != kArtifactVersion) {
        throw ConfigError("fit artifact: unrecognized format or version");
    }
    if (fit.value("model", "") != to_string(config.model)) {
        throw ConfigError("fit artifact holds a " + fit.value("model", std::string("?")) +
                          " fit but the configuration asks for " + to_string(config.model));
    }
    if (fit["dataset"].value("fingerprint", "") != dataset_fingerprint(data)) {
        throw ConfigError("fit artifact was produced from a different dataset");
    }
}

}  // namespace

std::string dataset_fingerprint(const MultifidelityDataset& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& lv : data.levels) {
        hash_matrix(h, lv.X);
        hash_matrix(h, lv.Y);
    }
    hash_matrix(h, data.locations);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json write_sep_fit(const RunConfig& config, const MultifidelityDataset& data, const sep::SepPosterior& post) {
    io::ensure_directory(config.out / "chains");
    Json j = header(config, data, post.warnings);
    const auto names = theta_names(data);
    const auto& nb = post.neighbors;
    Json order = Json::array();
    for (int c : nb.order) {
        order.push_back(c + 1);
    }
    j["neighbors_p"] = nb.p;
    j["order"] = order;
    if (nb.p > 0) {
        Json sets = Json::array();
        for (const auto& s : nb.sets) {
            Json ids = Json::array();
            for (int pos : s) {
                ids.push_back(nb.order[pos] + 1);
            }
            sets.push_back(ids);
        }
        j["neighbors"] = sets;
    }
    j["levels"] = Json::array();
    for (int t = 0; t < post.num_levels(); ++t) {
        const auto& lv = post.levels[t];
        const std::string file = "chains/level" + std::to_string(t + 1) + ".csv";
        io::write_chain(config.out / file, lv.chain, names, config.mcmc.burn_in, config.mcmc.thin);
        Json L = chain_summary(lv.chain, lv.theta_map.as_vector(), file, lv.seed);
        L["level"] = t + 1;
        L["log_posterior_map"] = lv.state.log_posterior();
        L["beta_hat"] = mat(lv.state.gls.beta_hat);
        const auto& f = lv.state.factors;
        Json factors;
        factors["dof"] = f.dof;
        factors["d_hat"] = vec(f.d_hat);
        if (nb.p > 0) {
            Json a = Json::array();
            Json V = Json::array();
            for (int pos = 0; pos < nb.size(); ++pos) {
                a.push_back(vec(f.a_hat[pos]));
                V.push_back(mat(f.V_hat[pos]));
            }
            factors["a_hat"] = a;
            factors["V_hat"] = V;
        }
        L["factors"] = factors;
        j["levels"].push_back(L);
    }
    return j;
}

Json write_nonsep_fit(const RunConfig& config, const MultifidelityDataset& data, const nonsep::NonsepPosterior& post) {
    io::ensure_directory(config.out / "chains");
    Json j = header(config, data, post.warnings);
    const auto names = theta_names(data);
    j["levels"] = Json::array();
    for (int t = 0; t < post.num_levels(); ++t) {
        const auto& lv = post.levels[t];
        Json L;
        L["level"] = t + 1;
        L["explained"] = vec(lv.basis.explained);
        L["components"] = Json::array();
        for (int l = 0; l < lv.basis.p(); ++l) {
            const std::string file =
                "chains/level" + std::to_string(t + 1) + "_pc" + std::to_string(l + 1) + ".csv";
            io::write_chain(config.out / file, lv.chains[l], names, config.mcmc.burn_in, config.mcmc.thin);
            Json C = chain_summary(lv.chains[l], lv.specs[l].theta.as_vector(), file, lv.seeds[l]);
            C["component"] = l + 1;
            Json pred = Json::array();
            for (int c : lv.specs[l].predictors) {
                pred.push_back(c + 1);
            }
            C["predictors"] = pred;
            C["prior"] = lv.specs[l].prior == nonsep::PriorKind::half_cauchy ? "half_cauchy" : "half_normal";
            L["components"].push_back(C);
        }
        j["levels"].push_back(L);
    }
    return j;
}

Json read_fit(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot read fit artifact " + path.string());
    }
    try {
        return Json::parse(is);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

sep::SepPosterior restore_sep(const Json& fit, const fs::path& fit_dir, const RunConfig& config,
                              const MultifidelityDataset& data, bool with_chains) {
    check_header(fit, config, data);
    const Json& levels = fit["levels"];
    if (!levels.is_array() || static_cast<int>(levels.size()) != data.num_levels()) {
        throw ConfigError("fit artifact level count does not match the dataset");
    }
    std::vector<CorrelationParams> thetas;
    for (const auto& L : levels) {
        thetas.push_back(theta_from(L["theta_map"], config.sep.smoothness, data.input_dim()));
    }
    sep::SepPosterior post = sep::condition(data, config.sep, thetas);
    if (with_chains) {
        for (int t = 0; t < post.num_levels(); ++t) {
            const io::CsvTable table = io::read_csv(fit_dir / levels[t]["chain"].get<std::string>());
            post.levels[t].chain.samples = table.values.middleCols(1, data.input_dim());
            post.levels[t].chain.log_densities = table.values.col(data.input_dim() + 1);
        }
    }
    return post;
}

nonsep::NonsepPosterior restore_nonsep(const Json& fit, const RunConfig& config, const MultifidelityDataset& data) {
    check_header(fit, config, data);
    const Json& levels = fit["levels"];
    if (!levels.is_array() || static_cast<int>(levels.size()) != data.num_levels()) {
        throw ConfigError("fit artifact level count does not match the dataset");
    }
    std::vector<std::vector<CorrelationParams>> thetas;
    for (const auto& L : levels) {
        std::vector<CorrelationParams> row;
        for (const auto& C : L["components"]) {
            row.push_back(theta_from(C["theta_map"], config.nonsep.smoothness, data.input_dim()));
        }
        thetas.push_back(std::move(row));
    }
    return nonsep::condition(data, config.nonsep, thetas);
}

}  // namespace mfgp::cli
