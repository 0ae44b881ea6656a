// filtercast command-line front end: synthetic data generation, sampling
// schemes, predictability metrics, forecasting models and the full
// experiment harness.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "filtercast/csv_io.hpp"
#include "filtercast/errors.hpp"
#include "filtercast/experiment.hpp"
#include "filtercast/harness.hpp"
#include "filtercast/metrics.hpp"
#include "filtercast/synthgen.hpp"

namespace fc = filtercast;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fc::Error("cannot open '" + path + "' for reading");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

int run_synth(double alpha, double lambda, int days, std::uint64_t seed,
              const std::string& labels_path, bool weekly, const std::string& out_path) {
    fc::InarSpec spec{alpha, lambda, days, seed};
    fc::CountSeries series;
    if (weekly) {
        series = fc::gen_seasonal_inar(spec, {1.3, 1.1, 1.0, 0.95, 1.05, 0.6, 0.5});
    } else {
        series = fc::gen_inar(spec);
    }
    if (!labels_path.empty()) {
        const fc::LabelSpec labels = fc::label_spec_from_json(read_file(labels_path));
        const fc::EventLog log = fc::gen_labeled_log(series, labels, seed);
        fc::write_event_log(log, out_path);
        std::cout << "wrote " << log.records.size() << " events over " << days
                  << " days to " << out_path << "\n";
    } else {
        fc::write_count_series(series, out_path);
        std::cout << "wrote " << days << " days of counts to " << out_path << "\n";
    }
    return 0;
}

int run_sample(const std::string& scheme, double p, int trials, std::uint64_t seed,
               int threshold, int k, const std::string& in_path,
               const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    if (scheme == "binomial") {
        const fc::CountSeries x = fc::read_count_series(in_path);
        const fc::TrialSet set = fc::binomial_thin(x, p, trials, seed);
        for (std::size_t i = 0; i < set.series.size(); ++i) {
            std::ostringstream name;
            name << "trial_" << std::setw(3) << std::setfill('0') << i << ".csv";
            fc::write_count_series(set.series[i],
                                   (std::filesystem::path(out_dir) / name.str()).string());
        }
        std::cout << "wrote " << set.series.size() << " trial series to " << out_dir << "\n";
        return 0;
    }
    const fc::EventLog log = fc::read_event_log(in_path);
    const fc::DayRange range = fc::covering_range(log);
    fc::CountSeries series;
    std::string name;
    if (scheme == "threshold") {
        series = fc::risk_threshold_filter(log, threshold, range);
        name = "threshold_" + std::to_string(threshold) + ".csv";
    } else if (scheme == "category") {
        series = fc::category_stack_series(log, k, range);
        name = "category_" + std::to_string(k) + ".csv";
    } else {
        throw fc::ParameterError("unknown scheme '" + scheme + "'");
    }
    fc::write_count_series(series, (std::filesystem::path(out_dir) / name).string());
    std::cout << "wrote " << name << " to " << out_dir << "\n";
    return 0;
}

int run_metrics(int pe_order, int lag_window, const std::string& in_path) {
    const fc::CountSeries series = fc::read_count_series(in_path);
    const std::vector<double> values = series.as_doubles();
    const fc::AcfResult lag = fc::best_lag(values, lag_window);
    const fc::PermutationEntropyResult pe = fc::permutation_entropy(values, pe_order);
    nlohmann::json doc;
    doc["lag"] = lag.lag;
    doc["acf"] = lag.value;
    doc["pe_nats"] = pe.entropy_nats;
    doc["pe_normalized"] = pe.normalized;
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int run_forecast(const std::string& model_kind, const std::vector<int>& grid, int hidden,
                 int window, int epochs, double lr, std::uint64_t seed,
                 const std::string& in_path) {
    const fc::CountSeries series = fc::read_count_series(in_path);
    const fc::NormalizedSeries norm = fc::znormalize(series);
    nlohmann::json doc;
    double next_normalized = 0.0;
    if (model_kind == "arima") {
        fc::arima::GridBounds bounds;
        if (!grid.empty()) {
            if (grid.size() != 3) throw fc::ParameterError("--grid expects p,d,q");
            bounds = fc::arima::GridBounds{grid[0], grid[1], grid[2]};
        }
        const fc::arima::ArimaModel model = fc::arima::grid_search(norm.values, bounds);
        next_normalized = fc::arima::forecast_one(model, norm.values);
        doc["model"] = nlohmann::json::parse(fc::arima::to_json(model));
    } else if (model_kind == "rnn") {
        fc::rnn::RnnSpec spec;
        spec.hidden = hidden;
        spec.window = window;
        spec.epochs = epochs;
        spec.lr = lr;
        spec.seed = seed;
        const fc::rnn::WindowDataset data = fc::rnn::make_windows(norm.values, {}, window);
        const fc::rnn::RnnModel model = fc::rnn::train(spec, data);
        const std::span<const double> recent(norm.values.data() + norm.values.size() - window,
                                             static_cast<std::size_t>(window));
        next_normalized = fc::rnn::predict_next(model, recent);
        doc["model"] = nlohmann::json::parse(fc::rnn::to_json(model));
    } else {
        throw fc::ParameterError("unknown model '" + model_kind + "'");
    }
    doc["forecast_next_normalized"] = next_normalized;
    doc["forecast_next"] = fc::denormalize_value(norm, next_normalized);
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int run_experiment_cmd(const std::string& config_path) {
    const fc::ExperimentOutcome outcome = fc::run_experiment_file(config_path);
    for (const std::string& file : outcome.outputs) {
        std::cout << "wrote " << outcome.output_dir << "/" << file << "\n";
    }
    if (outcome.failures > 0) {
        std::cout << outcome.failures << " sub-task(s) failed; see the failures column\n";
    }
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"predictability-under-filtering toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic count series or event log");
    double alpha = 0.7, lambda = 30.0;
    int days = 365;
    std::uint64_t seed = 0;
    std::string labels_path, out_path;
    bool weekly = false;
    synth->add_option("--alpha", alpha, "INAR survival coefficient in [0,1)");
    synth->add_option("--lambda", lambda, "innovation rate > 0");
    synth->add_option("--days", days, "series length (>= 30)");
    synth->add_option("--seed", seed, "random seed");
    synth->add_option("--labels", labels_path, "label spec JSON; emits an event log");
    synth->add_flag("--weekly", weekly, "modulate the rate with a 7-day profile");
    synth->add_option("out", out_path, "output CSV")->required();

    // sample
    auto* sample = app.add_subcommand("sample", "apply a sampling scheme");
    std::string scheme = "binomial", in_path, out_dir;
    double p = 0.5;
    int trials = 50, threshold = 0, k = 1;
    sample->add_option("--scheme", scheme, "binomial | threshold | category");
    sample->add_option("--p", p, "survival probability (binomial)");
    sample->add_option("--trials", trials, "trial count (binomial)");
    sample->add_option("--seed", seed, "random seed (binomial)");
    sample->add_option("--t", threshold, "risk score threshold 0..400");
    sample->add_option("--k", k, "number of rarest categories to keep");
    sample->add_option("in", in_path, "input CSV (counts for binomial, events otherwise)")
        ->required();
    sample->add_option("out_dir", out_dir, "output directory")->required();

    // metrics
    auto* metrics = app.add_subcommand("metrics", "model-free predictability measures");
    int pe_order = 3, lag_window = 7;
    metrics->add_option("--pe-order", pe_order, "permutation entropy order (3..5)");
    metrics->add_option("--lag-window", lag_window, "autocorrelation lag search window");
    metrics->add_option("in", in_path, "count series CSV")->required();

    // forecast
    auto* forecast = app.add_subcommand("forecast", "fit a forecaster, print model JSON");
    std::string model_kind = "arima";
    std::vector<int> grid;
    int hidden = 32, window = 7, epochs = 200;
    double lr = 1e-3;
    forecast->add_option("--model", model_kind, "arima | rnn");
    forecast->add_option("--grid", grid, "ARIMA grid bounds p,d,q")->delimiter(',');
    forecast->add_option("--hidden", hidden, "LSTM hidden units");
    forecast->add_option("--window", window, "LSTM input window");
    forecast->add_option("--epochs", epochs, "LSTM training epochs");
    forecast->add_option("--lr", lr, "LSTM learning rate");
    forecast->add_option("--seed", seed, "LSTM init seed");
    forecast->add_option("in", in_path, "training count series CSV")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a JSON-configured experiment");
    std::string config_path;
    experiment->add_option("config", config_path, "experiment config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            return run_synth(alpha, lambda, days, seed, labels_path, weekly, out_path);
        }
        if (sample->parsed()) {
            return run_sample(scheme, p, trials, seed, threshold, k, in_path, out_dir);
        }
        if (metrics->parsed()) return run_metrics(pe_order, lag_window, in_path);
        if (forecast->parsed()) {
            return run_forecast(model_kind, grid, hidden, window, epochs, lr, seed, in_path);
        }
        if (experiment->parsed()) return run_experiment_cmd(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
