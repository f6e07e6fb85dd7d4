#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli_harness.hpp"

#include <json.hpp>

using namespace mfgp::checks;

namespace {

// Everything except effective_config.json, which records the thread cap and output path.
std::vector<std::pair<std::string, std::string>> outputs(const fs::path& dir) {
    auto files = snapshot(dir);
    std::erase_if(files, [](const auto& f) { return f.first == "effective_config.json"; });
    return files;
}

nlohmann::json run_settings(const fs::path& dir) {
    auto j = nlohmann::json::parse(slurp(dir / "effective_config.json"));
    j.erase("threads");
    j.erase("out");
    return j;
}

void pipeline(const fs::path& dir, const std::string& model, int threads) {
    const fs::path cfg = dir / "run.json";
    spit(cfg, R"({"model": ")" + model + R"(", "seed": 21, "dataset": {"testbed": {"sizes": "desk"}},
        "nonsep": {"components": [3, 3]}, "mcmc": {"iterations": 300, "burn_in": 60},
        "prediction": {"samples_per_input": 200}})");
    const std::string t = std::to_string(threads);
    const std::string out = (dir / "out").string();
    REQUIRE(run_cli({"fit", "--config", cfg.string(), "--threads", t, "--out", out}).code == 0);
    REQUIRE(run_cli({"predict", "--config", cfg.string(), "--threads", t, "--out", out}).code == 0);
    REQUIRE(run_cli({"evaluate", "--config", cfg.string(), "--threads", t, "--out", out}).code == 0);
}

}  // namespace

TEST_CASE("outputs do not depend on the thread count") {
    for (const std::string model : {"sep", "nonsep"}) {
        const auto one = fresh_dir("det_" + model + "_1");
        const auto many = fresh_dir("det_" + model + "_8");
        pipeline(one, model, 1);
        pipeline(many, model, 8);
        CHECK(run_settings(one / "out") == run_settings(many / "out"));
        const auto a = outputs(one / "out");
        const auto b = outputs(many / "out");
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK_MESSAGE(a[i] == b[i], a[i].first);
        }
    }
}

TEST_CASE("a repeated run reproduces every byte") {
    const auto a = fresh_dir("det_rep_a");
    const auto b = fresh_dir("det_rep_b");
    pipeline(a, "sep", 4);
    pipeline(b, "sep", 4);
    CHECK(outputs(a / "out") == outputs(b / "out"));
    CHECK(run_settings(a / "out") == run_settings(b / "out"));
}
