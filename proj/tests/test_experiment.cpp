#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "filtercast/csv_io.hpp"
#include "filtercast/errors.hpp"
#include "filtercast/experiment.hpp"
#include "filtercast/synthgen.hpp"

using namespace filtercast;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

constexpr const char* kFastProtocol = R"( "protocol": {
    "initial_train_days": 30, "retrain_every": 7, "forecast_trials": 1,
    "arima_grid": [2, 1, 1],
    "rnn": {"hidden": 6, "epochs": 30}, "rnn_retrain_epochs": 10, "threads": 2
  })";

}  // namespace

TEST_CASE("binomial sweep experiment writes reports and traces") {
    TempDir dir("filtercast_exp_binomial");
    const auto input = dir.path / "counts.csv";
    write_count_series(gen_inar(InarSpec{0.6, 25.0, 80, 3}), input.string());

    std::ostringstream config;
    config << "{\n"
           << R"(  "input": ")" << input.string() << "\",\n"
           << R"(  "kind": "counts",)" << "\n"
           << R"(  "scheme": {"type": "binomial", "p_values": [0.5, 1.0], "trials": 3},)"
           << "\n"
           << kFastProtocol << ",\n"
           << R"(  "models": ["arima"],)" << "\n"
           << R"(  "seed": 7,)" << "\n"
           << R"(  "output_dir": ")" << (dir.path / "out").string() << "\"\n}";

    const ExperimentOutcome outcome = run_experiment(config.str());
    CHECK(outcome.exit_code == 0);
    CHECK(outcome.failures == 0);
    const std::string report = slurp(dir.path / "out" / "report.csv");
    CHECK(report.find("scheme_param,effective_rate") == 0);
    CHECK(std::filesystem::exists(dir.path / "out" / "report.json"));
    CHECK(std::filesystem::exists(dir.path / "out" / "traces" / "0_5_arima.csv"));
    CHECK(std::filesystem::exists(dir.path / "out" / "traces" / "1_arima.csv"));

    // identical config + seed reproduce the report byte for byte
    const ExperimentOutcome again = run_experiment(config.str());
    CHECK(again.exit_code == 0);
    CHECK(slurp(dir.path / "out" / "report.csv") == report);
}

TEST_CASE("threshold sweep experiment runs from an event log") {
    TempDir dir("filtercast_exp_threshold");
    const auto input = dir.path / "events.csv";
    const EventLog log =
        gen_labeled_log(gen_inar(InarSpec{0.6, 20.0, 75, 5}), default_label_spec(), 9);
    write_event_log(log, input.string());

    std::ostringstream config;
    config << "{\n"
           << R"(  "input": ")" << input.string() << "\",\n"
           << R"(  "kind": "events",)" << "\n"
           << R"(  "scheme": {"type": "threshold", "thresholds": [100, 300]},)" << "\n"
           << kFastProtocol << ",\n"
           << R"(  "models": ["arima"],)" << "\n"
           << R"(  "seed": 3,)" << "\n"
           << R"(  "traces": "none",)" << "\n"
           << R"(  "output_dir": ")" << (dir.path / "out").string() << "\"\n}";

    const ExperimentOutcome outcome = run_experiment(config.str());
    CHECK(outcome.exit_code == 0);
    const std::string report = slurp(dir.path / "out" / "report.csv");
    CHECK(report.find("\n100,") != std::string::npos);
    CHECK(!std::filesystem::exists(dir.path / "out" / "traces"));
}

TEST_CASE("external experiment config produces the variant report") {
    TempDir dir("filtercast_exp_external");
    const auto input = dir.path / "counts.csv";
    write_count_series(gen_inar(InarSpec{0.7, 30.0, 70, 11}), input.string());

    std::ostringstream config;
    config << "{\n"
           << R"(  "input": ")" << input.string() << "\",\n"
           << R"(  "scheme": {"type": "binomial", "p_values": [1.0]},)" << "\n"
           << kFastProtocol << ",\n"
           << R"(  "external": {"variants": ["Without", "Full"], "trials": 1},)" << "\n"
           << R"(  "seed": 5,)" << "\n"
           << R"(  "output_dir": ")" << (dir.path / "out").string() << "\"\n}";

    const ExperimentOutcome outcome = run_experiment(config.str());
    CHECK(outcome.exit_code == 0);
    const std::string report = slurp(dir.path / "out" / "external_report.csv");
    CHECK(report.find(",Without,") != std::string::npos);
    CHECK(report.find(",Full,") != std::string::npos);
    CHECK(report.find(",Prediction,") == std::string::npos);
}

TEST_CASE("config validation errors") {
    CHECK_THROWS_AS(run_experiment("{"), ParseError);
    CHECK_THROWS_AS(run_experiment(R"({"input": "x.csv", "kind": "bogus",
        "scheme": {"type": "binomial", "p_values": [1.0]}, "output_dir": "/tmp/o"})"),
                    ValidationError);
    CHECK_THROWS_AS(run_experiment(R"({"input": "/nonexistent/file.csv", "kind": "counts",
        "scheme": {"type": "binomial", "p_values": [1.0]}, "output_dir": "/tmp/o"})"),
                    Error);
    CHECK_THROWS_AS(run_experiment_file("/nonexistent/config.json"), Error);
}
