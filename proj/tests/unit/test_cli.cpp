#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli_harness.hpp"
#include "mfgp/io.hpp"
#include "mfgp/testbed.hpp"

#include <json.hpp>

#include <cmath>

using namespace mfgp;
using namespace mfgp::checks;
using nlohmann::json;

namespace {

const char* kQuickChain = R"("mcmc": {"iterations": 200, "burn_in": 50})";

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path path = dir / "run.json";
    spit(path, body);
    return path;
}

/// Testbed files for seed 3 at desk sizes, generated once per process.
const fs::path& testbed_dir() {
    static const fs::path dir = [] {
        const fs::path d = fresh_dir("cli_testbed");
        const auto cfg = write_config(d, R"({"dataset": {"testbed": {"seed": 3, "sizes": "desk"}}, "out": "data"})");
        const auto r = run_cli({"gen-testbed", "--config", cfg.string()});
        REQUIRE(r.code == 0);
        return d / "data";
    }();
    return dir;
}

std::string files_dataset(const fs::path& data, const std::string& test_inputs, const std::string& test_outputs) {
    const std::string d = data.generic_string();
    return R"("dataset": {"designs": [")" + d + R"(/level1_design.csv", ")" + d + R"(/level2_design.csv"],
      "outputs": [")" + d + R"(/level1_outputs.csv", ")" + d + R"(/level2_outputs.csv"],
      "locations": ")" + d + R"(/locations.csv", "test_inputs": ")" + d + "/" + test_inputs +
           R"(", "test_outputs": ")" + d + "/" + test_outputs + R"("})";
}

json read_json(const fs::path& path) {
    return json::parse(slurp(path));
}

}  // namespace

TEST_CASE("argument and configuration errors exit with code 2") {
    const auto dir = fresh_dir("cli_errors");
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    CHECK(run_cli({"fit", "--preset", "huge"}).code == 2);
    CHECK(run_cli({"fit", "--config", (dir / "absent.json").string()}).code == 2);

    const auto bad = write_config(dir, "{\n  \"model\": \"sep\",\n  \"mcmc\": {\"iterations\": -5}\n}\n");
    const auto r = run_cli({"fit", "--config", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("run.json:3") != std::string::npos);

    write_config(dir, "{\n  \"model\": \"sep\",\n  \"unknown_key\": 1\n}\n");
    const auto u = run_cli({"fit", "--config", bad.string()});
    CHECK(u.code == 2);
    CHECK(u.err.find("run.json:3") != std::string::npos);
    CHECK(u.err.find("unknown_key") != std::string::npos);

    write_config(dir, "{\n  \"model\": \"sep\",\n  \"seed\": \n}\n");
    const auto syntax = run_cli({"fit", "--config", bad.string()});
    CHECK(syntax.code == 2);
    CHECK(syntax.err.find("run.json:") != std::string::npos);
}

TEST_CASE("gen-testbed is reproducible and documented") {
    const auto a = fresh_dir("cli_gen_a");
    const auto b = fresh_dir("cli_gen_b");
    for (const auto& d : {a, b}) {
        const auto cfg = write_config(d, R"({"dataset": {"testbed": {"seed": 11, "sizes": "desk"}}})");
        REQUIRE(run_cli({"gen-testbed", "--config", cfg.string(), "--out", (d / "out").string()}).code == 0);
    }
    CHECK(snapshot(a / "out") == snapshot(b / "out"));

    const json m = read_json(a / "out" / "manifest.json");
    CHECK(m["seed"] == 11);
    CHECK(m["counts"]["level1"] == 30);
    CHECK(m["counts"]["level2"] == 15);
    CHECK(m["counts"]["locations"] == 1000);
    CHECK(m["T"] == 30.0);
    CHECK(m["low_fidelity"] == "reciprocal");

    const Matrix X2 = io::read_csv(a / "out" / "level2_design.csv").values;
    const Matrix Y2 = io::read_csv(a / "out" / "level2_outputs.csv").values;
    const Matrix S = io::read_csv(a / "out" / "locations.csv").values;
    const int cells[5][2] = {{0, 0}, {3, 999}, {7, 420}, {14, 51}, {10, 777}};
    for (const auto& c : cells) {
        const testbed::EnvInput in{X2(c[0], 0), X2(c[0], 1), X2(c[0], 2), testbed::kSpillTime};
        const double expect = testbed::hi_fidelity(in, S(c[1], 0), S(c[1], 1));
        CHECK(std::abs(Y2(c[0], c[1]) - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
    }
    const auto cfg = write_config(a, R"({"dataset": {"testbed": {"seed": 12, "sizes": "desk"}}})");
    run_cli({"gen-testbed", "--config", cfg.string(), "--out", (b / "out").string()});
    CHECK(slurp(a / "out" / "level2_outputs.csv") != slurp(b / "out" / "level2_outputs.csv"));
}

TEST_CASE("pp-baseline artifact carries no neighbor factors") {
    const auto dir = fresh_dir("cli_pp");
    const auto cfg = write_config(dir, std::string(R"({"model": "pp-baseline", "out": "fit", )") +
                                           files_dataset(testbed_dir(), "test_inputs.csv", "test_outputs.csv") +
                                           ", " + kQuickChain + "}");
    REQUIRE(run_cli({"fit", "--config", cfg.string()}).code == 0);
    const json fit = read_json(dir / "fit" / "fit.json");
    CHECK(fit["neighbors_p"] == 0);
    CHECK_FALSE(fit.contains("neighbors"));
    for (const auto& L : fit["levels"]) {
        CHECK_FALSE(L["factors"].contains("V_hat"));
        CHECK_FALSE(L["factors"].contains("a_hat"));
        CHECK(L["factors"]["d_hat"].size() == 1000);
    }
    CHECK(fs::exists(dir / "fit" / "chains" / "level2.csv"));
    CHECK(fs::exists(dir / "fit" / "effective_config.json"));

    const auto nonzero = write_config(dir, std::string(R"({"model": "pp-baseline", "sep": {"neighbors_p": 2}, )") +
                                               files_dataset(testbed_dir(), "test_inputs.csv", "test_outputs.csv") +
                                               "}");
    CHECK(run_cli({"fit", "--config", nonzero.string()}).code == 2);
}

TEST_CASE("SEP predictions interpolate the high-fidelity runs") {
    const auto dir = fresh_dir("cli_interp");
    const auto cfg = write_config(dir, std::string(R"({"model": "sep", "out": "run", )") +
                                           files_dataset(testbed_dir(), "level2_design.csv", "level2_outputs.csv") +
                                           R"(, "prediction": {"samples_per_input": 200}, )" + kQuickChain + "}");
    REQUIRE(run_cli({"fit", "--config", cfg.string()}).code == 0);
    REQUIRE(run_cli({"predict", "--config", cfg.string()}).code == 0);
    const auto pred = io::read_predictions(dir / "run" / "predictions.csv", dir / "run" / "aggregated.csv");
    const Matrix Y2 = io::read_csv(testbed_dir() / "level2_outputs.csv").values;
    const double scale = Y2.cwiseAbs().maxCoeff();
    CHECK((pred.mean - Y2).cwiseAbs().maxCoeff() < 1e-6 * scale);
    CHECK((pred.q975 - pred.q025).cwiseAbs().maxCoeff() < 1e-3 * scale);
    const Vector avg = pred.mean.rowwise().mean();
    CHECK((pred.agg_mean - avg).cwiseAbs().maxCoeff() < 1e-10 * scale);

    REQUIRE(run_cli({"evaluate", "--config", cfg.string()}).code == 0);
    const json metrics = read_json(dir / "run" / "metrics.json");
    CHECK(metrics["marginal"]["rmspe"].get<double>() < 1e-6 * scale);
    CHECK(metrics["inputs"] == 15);
}

TEST_CASE("predict rejects an artifact from another dataset") {
    const auto dir = fresh_dir("cli_mismatch");
    const auto cfg = write_config(dir, std::string(R"({"model": "sep", "out": "run", )") +
                                           files_dataset(testbed_dir(), "test_inputs.csv", "test_outputs.csv") +
                                           ", " + kQuickChain + "}");
    REQUIRE(run_cli({"fit", "--config", cfg.string()}).code == 0);
    const auto other = fresh_dir("cli_mismatch_data");
    const auto gen = write_config(other, R"({"dataset": {"testbed": {"seed": 4, "sizes": "desk"}}, "out": "data"})");
    REQUIRE(run_cli({"gen-testbed", "--config", gen.string()}).code == 0);
    const auto cfg2 = write_config(other, std::string(R"({"model": "sep", "out": "run", )") +
                                              files_dataset(other / "data", "test_inputs.csv", "test_outputs.csv") + "}");
    const auto r = run_cli({"predict", "--config", cfg2.string(), "--fit", (dir / "run" / "fit.json").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("different dataset") != std::string::npos);
}

TEST_CASE("predict reuses the configuration stored in the artifact") {
    const auto dir = fresh_dir("cli_artifact_config");
    const auto cfg = write_config(dir, std::string(R"({"model": "sep", "out": "run", )") +
                                           files_dataset(testbed_dir(), "test_inputs.csv", "test_outputs.csv") +
                                           R"(, "prediction": {"samples_per_input": 150}, )" + kQuickChain + "}");
    REQUIRE(run_cli({"fit", "--config", cfg.string()}).code == 0);
    REQUIRE(run_cli({"predict", "--config", cfg.string()}).code == 0);
    const std::string first = slurp(dir / "run" / "predictions.csv");
    REQUIRE(run_cli({"predict", "--fit", (dir / "run" / "fit.json").string(), "--out", (dir / "again").string()}).code == 0);
    CHECK(slurp(dir / "again" / "predictions.csv") == first);
}

TEST_CASE("evaluate scores a perfect prediction file") {
    const auto dir = fresh_dir("cli_eval");
    const Matrix truth = io::read_csv(testbed_dir() / "test_outputs.csv").values;
    auto s = make_summary(static_cast<int>(truth.rows()), static_cast<int>(truth.cols()), 1, {});
    s.mean = s.q025 = s.q975 = truth;
    s.agg_mean = s.agg_q025 = s.agg_q975 = spatial_average(truth, {});
    io::write_predictions(dir / "p.csv", s);
    io::write_aggregated(dir / "a.csv", s);
    const auto r = run_cli({"evaluate", "--predictions", (dir / "p.csv").string(), "--aggregated",
                            (dir / "a.csv").string(), "--truth", (testbed_dir() / "test_outputs.csv").string(),
                            "--out", (dir / "m").string()});
    REQUIRE(r.code == 0);
    const json m = read_json(dir / "m" / "metrics.json");
    CHECK(m["marginal"]["rmspe"] == 0.0);
    CHECK(m["marginal"]["cvg95"] == 100.0);
    CHECK(m["aggregated"]["cvg95"] == 100.0);
    CHECK(io::read_csv(dir / "m" / "metrics_per_location.csv").values.rows() == truth.cols());

    const auto bad = run_cli({"evaluate", "--predictions", (dir / "p.csv").string(), "--aggregated",
                              (dir / "a.csv").string(), "--truth", (testbed_dir() / "level1_outputs.csv").string(),
                              "--out", (dir / "m").string()});
    CHECK(bad.code == 2);
}

TEST_CASE("sweep-pcs kriging column ignores the low-fidelity outputs") {
    const auto dir = fresh_dir("cli_sweep");
    const fs::path copy = dir / "data";
    fs::copy(testbed_dir(), copy);
    const auto cfg = write_config(dir, std::string(R"({"out": "sweep", )") +
                                           files_dataset(copy, "test_inputs.csv", "test_outputs.csv") + ", " +
                                           kQuickChain + R"(, "sweep": {"p_min": 1, "p_max": 3}})");
    REQUIRE(run_cli({"sweep-pcs", "--config", cfg.string()}).code == 0);
    const Matrix before = io::read_csv(dir / "sweep" / "sweep.csv").values;
    REQUIRE(before.rows() == 3);
    CHECK(before.col(0) == Vector::LinSpaced(3, 1, 3));

    auto low = io::read_csv(copy / "level1_outputs.csv");
    low.values.array() *= 1.5;
    low.values.array() += 0.3;
    io::write_csv(copy / "level1_outputs.csv", low.header, low.values);
    REQUIRE(run_cli({"sweep-pcs", "--config", cfg.string(), "--out", (dir / "sweep2").string()}).code == 0);
    const Matrix after = io::read_csv(dir / "sweep2" / "sweep.csv").values;
    CHECK(after.col(2) == before.col(2));
    CHECK(after.col(1) != before.col(1));

    CHECK(run_cli({"sweep-pcs", "--config", cfg.string(), "--p-min", "4", "--p-max", "2"}).code == 2);
}
