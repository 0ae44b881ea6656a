#include "filtercast/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "filtercast/csv_io.hpp"
#include "filtercast/errors.hpp"
#include "filtercast/harness.hpp"

namespace filtercast {

namespace {

using nlohmann::json;

ProtocolConfig protocol_from_json(const json& doc) {
    ProtocolConfig config;
    if (!doc.contains("protocol")) return config;
    const json& p = doc.at("protocol");
    config.initial_train_days = p.value("initial_train_days", config.initial_train_days);
    config.retrain_every = p.value("retrain_every", config.retrain_every);
    if (p.contains("normalization")) {
        const std::string mode = p.at("normalization").get<std::string>();
        if (mode == "whole-series") {
            config.normalization = Normalization::kWholeSeries;
        } else if (mode == "train-only") {
            config.normalization = Normalization::kTrainOnly;
        } else {
            throw ValidationError("config: unknown normalization '" + mode + "'");
        }
    }
    config.forecast_trials = p.value("forecast_trials", config.forecast_trials);
    config.pe_order = p.value("pe_order", config.pe_order);
    config.max_lag = p.value("max_lag", config.max_lag);
    config.threads = p.value("threads", config.threads);
    config.freeze_arima_order = p.value("freeze_arima_order", config.freeze_arima_order);
    config.rnn_retrain_epochs = p.value("rnn_retrain_epochs", config.rnn_retrain_epochs);
    config.rnn_retrain_patience = p.value("rnn_retrain_patience", config.rnn_retrain_patience);
    if (p.contains("arima_grid")) {
        const auto grid = p.at("arima_grid").get<std::vector<int>>();
        if (grid.size() != 3) throw ValidationError("config: arima_grid must be [p,d,q]");
        config.arima_grid = arima::GridBounds{grid[0], grid[1], grid[2]};
    }
    if (p.contains("rnn")) {
        const json& r = p.at("rnn");
        config.rnn.hidden = r.value("hidden", config.rnn.hidden);
        config.rnn.window = r.value("window", config.rnn.window);
        config.rnn.epochs = r.value("epochs", config.rnn.epochs);
        config.rnn.lr = r.value("lr", config.rnn.lr);
        config.rnn.patience = r.value("patience", config.rnn.patience);
        if (r.contains("injection")) {
            const std::string wiring = r.at("injection").get<std::string>();
            if (wiring == "extra_step") {
                config.rnn.injection = rnn::ExternalInjection::kExtraStep;
            } else if (wiring == "head_concat") {
                config.rnn.injection = rnn::ExternalInjection::kHeadConcat;
            } else {
                throw ValidationError("config: unknown injection '" + wiring + "'");
            }
        }
    }
    return config;
}

std::vector<ModelKind> models_from_json(const json& doc) {
    std::vector<ModelKind> models;
    if (!doc.contains("models")) {
        return {ModelKind::kArima, ModelKind::kRnn};
    }
    for (const auto& name : doc.at("models")) {
        const std::string label = name.get<std::string>();
        if (label == "arima") {
            models.push_back(ModelKind::kArima);
        } else if (label == "rnn") {
            models.push_back(ModelKind::kRnn);
        } else {
            throw ValidationError("config: unknown model '" + label + "'");
        }
    }
    if (models.empty()) throw ValidationError("config: empty model list");
    return models;
}

ProtocolConfig::TraceMode trace_mode_from_json(const json& doc) {
    const std::string mode = doc.value("traces", "first");
    if (mode == "first") return ProtocolConfig::TraceMode::kFirstTrial;
    if (mode == "all") return ProtocolConfig::TraceMode::kAll;
    if (mode == "none") return ProtocolConfig::TraceMode::kNone;
    throw ValidationError("config: unknown traces mode '" + mode + "'");
}

std::string sanitize_for_filename(std::string value) {
    for (char& c : value) {
        if (c == '.') c = '_';
    }
    return value;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
}

}  // namespace

ExperimentOutcome run_experiment(const std::string& config_json_text) {
    json doc;
    try {
        doc = json::parse(config_json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what(), 0);
    }

    const std::string input = doc.at("input").get<std::string>();
    const std::string kind = doc.value("kind", "counts");
    const std::uint64_t seed = doc.value("seed", std::uint64_t{0});
    const std::string output_dir = doc.at("output_dir").get<std::string>();

    ProtocolConfig config = protocol_from_json(doc);
    config.models = models_from_json(doc);
    config.trace_mode = trace_mode_from_json(doc);
    config.rnn.seed = seed;

    EventLog log;
    CountSeries counts;
    if (kind == "events") {
        log = read_event_log(input);
        counts = aggregate_daily(log, covering_range(log));
        counts.label = "aggregate";
        counts.provenance = "events:" + input;
    } else if (kind == "counts") {
        counts = read_count_series(input);
        counts.provenance = "counts:" + input;
    } else {
        throw ValidationError("config: kind must be 'events' or 'counts'");
    }

    const json& scheme = doc.at("scheme");
    const std::string scheme_type = scheme.at("type").get<std::string>();

    std::filesystem::create_directories(output_dir);
    ExperimentOutcome outcome;
    outcome.output_dir = output_dir;

    const bool external = doc.contains("external");
    if (external) {
        const json& ext = doc.at("external");
        std::vector<ExternalVariant> variants;
        for (const auto& name : ext.value("variants", std::vector<std::string>{
                                                          "Without", "Prediction", "Full"})) {
            if (name == "Without") {
                variants.push_back(ExternalVariant::kWithout);
            } else if (name == "Prediction") {
                variants.push_back(ExternalVariant::kPrediction);
            } else if (name == "Full") {
                variants.push_back(ExternalVariant::kFull);
            } else {
                throw ValidationError("config: unknown variant '" + name + "'");
            }
        }
        ExternalReport report;
        if (scheme_type == "binomial") {
            const auto ps = scheme.at("p_values").get<std::vector<double>>();
            const int trials = ext.value("trials", config.forecast_trials);
            report = external_signal_experiment(counts, ps, variants, trials, seed, config);
        } else if (scheme_type == "threshold" || scheme_type == "category") {
            if (kind != "events") {
                throw ValidationError("config: real-world schemes need an event log input");
            }
            RealWorldFamily family;
            family.kind = scheme_type == "threshold" ? RealWorldFamily::Kind::kThreshold
                                                     : RealWorldFamily::Kind::kCategoryStack;
            family.params = scheme.at(scheme_type == "threshold" ? "thresholds" : "ks")
                                .get<std::vector<int>>();
            report = external_signal_experiment(log, family, variants, seed, config);
        } else {
            throw ValidationError("config: unknown scheme type '" + scheme_type + "'");
        }

        std::ostringstream csv;
        write_external_report_csv(report, csv);
        write_text_file(std::filesystem::path(output_dir) / "external_report.csv", csv.str());
        write_text_file(std::filesystem::path(output_dir) / "external_report.json",
                        external_report_to_json(report));
        outcome.outputs = {"external_report.csv", "external_report.json"};
        outcome.failures = report.total_failures();
        outcome.exit_code = outcome.failures > 0 ? 2 : 0;
        return outcome;
    }

    std::vector<SweepTrace> traces;
    ExperimentReport report;
    if (scheme_type == "binomial") {
        const auto ps = scheme.at("p_values").get<std::vector<double>>();
        const int trials = scheme.value("trials", 50);
        report = sweep_random(counts, ps, trials, seed, config, &traces);
    } else if (scheme_type == "threshold" || scheme_type == "category") {
        if (kind != "events") {
            throw ValidationError("config: real-world schemes need an event log input");
        }
        RealWorldFamily family;
        family.kind = scheme_type == "threshold" ? RealWorldFamily::Kind::kThreshold
                                                 : RealWorldFamily::Kind::kCategoryStack;
        family.params =
            scheme.at(scheme_type == "threshold" ? "thresholds" : "ks").get<std::vector<int>>();
        report = sweep_realworld(log, family, config, &traces);
    } else {
        throw ValidationError("config: unknown scheme type '" + scheme_type + "'");
    }

    std::ostringstream csv;
    write_report_csv(report, csv);
    write_text_file(std::filesystem::path(output_dir) / "report.csv", csv.str());
    write_text_file(std::filesystem::path(output_dir) / "report.json", report_to_json(report));
    outcome.outputs = {"report.csv", "report.json"};

    if (!traces.empty()) {
        const std::filesystem::path trace_dir = std::filesystem::path(output_dir) / "traces";
        std::filesystem::create_directories(trace_dir);
        for (const SweepTrace& trace : traces) {
            std::ostringstream name;
            name << sanitize_for_filename(format_double(trace.scheme_param)) << '_'
                 << to_string(trace.kind);
            if (config.trace_mode == ProtocolConfig::TraceMode::kAll) {
                name << "_trial" << trace.trial;
            }
            name << ".csv";
            std::ostringstream body;
            write_trace_csv(trace.result, body);
            write_text_file(trace_dir / name.str(), body.str());
            outcome.outputs.push_back("traces/" + name.str());
        }
    }

    outcome.failures = report.total_failures();
    outcome.exit_code = outcome.failures > 0 ? 2 : 0;
    return outcome;
}

ExperimentOutcome run_experiment_file(const std::string& config_path) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw Error("cannot open '" + config_path + "' for reading");
    std::ostringstream text;
    text << in.rdbuf();
    return run_experiment(text.str());
}

}  // namespace filtercast
