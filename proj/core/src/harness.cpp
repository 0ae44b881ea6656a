#include "filtercast/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "filtercast/metrics.hpp"
#include "filtercast/rng.hpp"
#include "filtercast/stats.hpp"

namespace filtercast {

namespace {

constexpr std::uint64_t kRnnSeedTag = 0x726e6e73ull;   // "rnns"
constexpr std::uint64_t kRawModelTag = 0x72617766ull;  // "rawf"
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min(workers, n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) break;
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

MetricAggregate aggregate(const std::vector<double>& values) {
    MetricAggregate agg;
    agg.count = static_cast<int>(values.size());
    if (values.empty()) {
        agg.mean = kNaN;
        agg.stddev = kNaN;
        return agg;
    }
    agg.mean = mean_of(values);
    agg.stddev = stddev_of(values);  // population; exactly 0 for a single trial
    return agg;
}

void check_protocol(const ProtocolConfig& config) {
    if (config.initial_train_days < 10) {
        throw ParameterError("protocol: initial_train_days must be >= 10");
    }
    if (config.retrain_every < 1) {
        throw ParameterError("protocol: retrain_every must be >= 1");
    }
    if (config.forecast_trials < 1) {
        throw ParameterError("protocol: forecast_trials must be >= 1");
    }
}

NormalizedSeries normalize_for_protocol(const std::vector<double>& raw,
                                        const ProtocolConfig& config) {
    if (config.normalization == Normalization::kWholeSeries) {
        return znormalize(raw);
    }
    const std::span<const double> head(raw.data(),
                                       static_cast<std::size_t>(config.initial_train_days));
    const double m = mean_of(head);
    const double s = stddev_of(head);
    if (!(s > 0.0)) {
        throw DegenerateSeriesError("rolling_evaluate: constant training window");
    }
    return znormalize_with(raw, m, s);
}

}  // namespace

std::string to_string(ModelKind kind) {
    return kind == ModelKind::kArima ? "arima" : "rnn";
}

std::string to_string(Normalization mode) {
    return mode == Normalization::kWholeSeries ? "whole-series" : "train-only";
}

std::string to_string(ExternalVariant variant) {
    switch (variant) {
        case ExternalVariant::kWithout: return "Without";
        case ExternalVariant::kPrediction: return "Prediction";
        case ExternalVariant::kFull: return "Full";
    }
    return "Without";
}

RollingResult rolling_evaluate(const CountSeries& series, ModelKind kind,
                               const ProtocolConfig& config, const ExternalContext& external) {
    check_protocol(config);
    validate(series);
    const int total_days = static_cast<int>(series.size());
    const int initial = config.initial_train_days;
    const int window = config.rnn.window;
    const int min_len = initial + (kind == ModelKind::kRnn ? window : 0);
    if (total_days <= min_len) {
        throw LengthError("rolling_evaluate: series length " + std::to_string(total_days) +
                          " must exceed " + std::to_string(min_len));
    }

    const std::vector<double> raw = series.as_doubles();
    NormalizedSeries norm = normalize_for_protocol(raw, config);

    const bool with_external = external.variant != ExternalVariant::kWithout;
    std::vector<double> external_z;
    if (with_external) {
        if (kind != ModelKind::kRnn) {
            throw ParameterError("rolling_evaluate: external signals are an RNN feature");
        }
        if (external.external == nullptr) {
            throw ParameterError("rolling_evaluate: variant requires an external series");
        }
        if (external.external->size() != series.size() ||
            external.external->start_day != series.start_day) {
            throw AlignmentError("rolling_evaluate: external series is not aligned");
        }
        external_z = normalize_for_protocol(external.external->as_doubles(), config).values;
        if (external.variant == ExternalVariant::kPrediction) {
            if (external.xhat_by_day == nullptr ||
                external.xhat_by_day->size() != static_cast<std::size_t>(total_days)) {
                throw AlignmentError(
                    "rolling_evaluate: Prediction variant needs an x_hat value per day");
            }
        }
    }

    GuardedSeries guard(norm.values);
    RollingResult result;
    result.first_predicted_day = series.start_day + initial;
    result.normalization = norm;
    result.predictions.reserve(static_cast<std::size_t>(total_days - initial));

    if (kind == ModelKind::kArima) {
        arima::FitOptions fit_options;
        fit_options.skip_under_recommended = true;  // short windows stay low-order
        arima::ArimaModel model;
        bool have_model = false;
        for (int day = initial; day < total_days; ++day) {
            guard.set_limit(static_cast<std::size_t>(day) - 1);
            const std::vector<double> history = guard.prefix(static_cast<std::size_t>(day));
            if ((day - initial) % config.retrain_every == 0) {
                try {
                    if (have_model && config.freeze_arima_order) {
                        model = arima::fit_css(history, model.order);
                    } else {
                        model = arima::grid_search(history, config.arima_grid, fit_options);
                    }
                    have_model = true;
                } catch (const Error&) {
                    if (!have_model) throw;
                    ++result.fit_failures;  // keep forecasting with the previous fit
                }
            }
            result.predictions.push_back(arima::forecast_one(model, history));
        }
    } else {
        rnn::RnnSpec spec = config.rnn;
        spec.input_dim = 1 + (with_external ? 1 : 0);
        const auto dataset_to = [&](int day_count) {
            const std::vector<double> history =
                guard.prefix(static_cast<std::size_t>(day_count));
            std::vector<std::vector<double>> externals;
            if (with_external) {
                externals.emplace_back(external_z.begin(), external_z.begin() + day_count);
            }
            // training windows teacher-force the true next external value
            return rnn::make_windows(history, externals, spec.window, spec.injection,
                                     with_external);
        };

        rnn::RnnModel model;
        bool have_model = false;
        for (int day = initial; day < total_days; ++day) {
            guard.set_limit(static_cast<std::size_t>(day) - 1);
            if ((day - initial) % config.retrain_every == 0) {
                try {
                    if (!have_model) {
                        model = rnn::train(spec, dataset_to(day));
                        have_model = true;
                    } else {
                        model = rnn::continue_train(std::move(model), dataset_to(day),
                                                    config.rnn_retrain_epochs,
                                                    config.rnn_retrain_patience);
                    }
                } catch (const Error&) {
                    if (!have_model) throw;
                    ++result.fit_failures;
                }
            }
            std::vector<double> recent;
            recent.reserve(static_cast<std::size_t>(window));
            for (int i = day - window; i < day; ++i) {
                recent.push_back(guard.at(static_cast<std::size_t>(i)));
            }
            std::vector<std::vector<double>> recent_externals;
            std::optional<double> next_external;
            if (with_external) {
                recent_externals.emplace_back(external_z.begin() + (day - window),
                                              external_z.begin() + day);
                next_external = external.variant == ExternalVariant::kFull
                                    ? external_z[static_cast<std::size_t>(day)]
                                    : (*external.xhat_by_day)[static_cast<std::size_t>(day)];
            }
            result.predictions.push_back(
                rnn::predict_next(model, recent, recent_externals, next_external));
        }
    }

    result.actuals.assign(norm.values.begin() + initial, norm.values.end());
    result.rmse = rmse(result.predictions, result.actuals);
    return result;
}

int ExperimentReport::total_failures() const {
    int total = 0;
    for (const ReportRow& row : rows) total += row.failures;
    return total;
}

int ExternalReport::total_failures() const {
    int total = 0;
    for (const ExternalReportRow& row : rows) total += row.failures;
    return total;
}

namespace {

bool keep_trace(ProtocolConfig::TraceMode mode, int trial) {
    switch (mode) {
        case ProtocolConfig::TraceMode::kNone: return false;
        case ProtocolConfig::TraceMode::kFirstTrial: return trial == 0;
        case ProtocolConfig::TraceMode::kAll: return true;
    }
    return false;
}

}  // namespace

ExperimentReport sweep_random(const CountSeries& x, std::span<const double> p_values,
                              int trials, std::uint64_t seed, const ProtocolConfig& config,
                              std::vector<SweepTrace>* traces) {
    check_protocol(config);
    validate(x);
    if (trials < 1) throw ParameterError("sweep_random: trials must be >= 1");
    if (p_values.empty()) throw ParameterError("sweep_random: no p values");
    bool has_baseline = false;
    for (double p : p_values) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw ParameterError("sweep_random: p values must lie in (0, 1]");
        }
        if (p == 1.0) has_baseline = true;
    }
    if (!has_baseline) {
        throw ParameterError("sweep_random: the p = 1 unsampled baseline row is required");
    }

    std::vector<double> ps(p_values.begin(), p_values.end());
    std::sort(ps.begin(), ps.end());

    const std::vector<double> ground = x.as_doubles();
    const AcfResult base = best_lag(ground, config.max_lag);

    ExperimentReport report;
    report.ground_truth_lag = base.lag;
    report.normalization_label = to_string(config.normalization);

    // thin + model-free metrics per level (cheap, serial)
    std::vector<TrialSet> sets;
    sets.reserve(ps.size());
    for (double p : ps) sets.push_back(binomial_thin(x, p, trials, seed));

    struct RowScratch {
        std::vector<double> acf;
        std::vector<double> pe;
        std::vector<double> rates;
        int failures = 0;
    };
    std::vector<RowScratch> scratch(ps.size());
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        for (const CountSeries& trial : sets[pi].series) {
            const std::vector<double> values = trial.as_doubles();
            scratch[pi].rates.push_back(effective_rate(trial, x));
            try {
                scratch[pi].acf.push_back(acf_at_lag(values, base.lag));
                scratch[pi].pe.push_back(
                    permutation_entropy(values, config.pe_order).normalized);
            } catch (const Error&) {
                ++scratch[pi].failures;
            }
        }
    }

    // rolling forecasts: independent jobs over (level, trial, model)
    const int forecast_trials = std::min(config.forecast_trials, trials);
    struct Job {
        std::size_t p_index;
        int trial;
        ModelKind kind;
    };
    std::vector<Job> jobs;
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        for (int trial = 0; trial < forecast_trials; ++trial) {
            for (ModelKind kind : config.models) jobs.push_back(Job{pi, trial, kind});
        }
    }
    struct JobResult {
        double rmse = kNaN;
        bool failed = false;
        std::optional<RollingResult> trace;
    };
    std::vector<JobResult> results(jobs.size());
    parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        ProtocolConfig cfg = config;
        cfg.threads = 1;
        cfg.rnn.seed = derive_stream(seed, kRnnSeedTag, job.p_index,
                                     static_cast<std::uint64_t>(job.trial));
        try {
            RollingResult run = rolling_evaluate(
                sets[job.p_index].series[static_cast<std::size_t>(job.trial)], job.kind, cfg);
            results[i].rmse = run.rmse;
            if (traces != nullptr && keep_trace(config.trace_mode, job.trial)) {
                results[i].trace = std::move(run);
            }
        } catch (const Error&) {
            results[i].failed = true;
        }
    });
    if (traces != nullptr) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (!results[i].trace.has_value()) continue;
            traces->push_back(SweepTrace{ps[jobs[i].p_index], jobs[i].kind, jobs[i].trial,
                                         std::move(*results[i].trace)});
        }
    }

    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        ReportRow row;
        row.scheme_param = ps[pi];
        row.effective_rate = mean_of(scratch[pi].rates);
        row.acf = aggregate(scratch[pi].acf);
        row.pe = aggregate(scratch[pi].pe);
        row.trials = trials;
        row.failures = scratch[pi].failures;
        std::vector<double> rmse_arima, rmse_rnn;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].p_index != pi) continue;
            if (results[i].failed) {
                ++row.failures;
                continue;
            }
            (jobs[i].kind == ModelKind::kArima ? rmse_arima : rmse_rnn)
                .push_back(results[i].rmse);
        }
        row.rmse_arima = aggregate(rmse_arima);
        row.rmse_rnn = aggregate(rmse_rnn);
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

CountSeries realworld_series(const EventLog& log, const RealWorldFamily& family, int param,
                             DayRange range) {
    if (family.kind == RealWorldFamily::Kind::kThreshold) {
        return risk_threshold_filter(log, param, range);
    }
    return category_stack_series(log, param, range);
}

}  // namespace

ExperimentReport sweep_realworld(const EventLog& log, const RealWorldFamily& family,
                                 const ProtocolConfig& config,
                                 std::vector<SweepTrace>* traces) {
    check_protocol(config);
    if (family.params.empty()) throw ParameterError("sweep_realworld: no scheme parameters");
    const DayRange range = covering_range(log);
    const CountSeries ground = aggregate_daily(log, range);
    const AcfResult base = best_lag(ground.as_doubles(), config.max_lag);

    std::vector<int> params = family.params;
    std::sort(params.begin(), params.end());

    ExperimentReport report;
    report.ground_truth_lag = base.lag;
    report.normalization_label = to_string(config.normalization);

    std::vector<CountSeries> targets;
    targets.reserve(params.size());
    for (int param : params) targets.push_back(realworld_series(log, family, param, range));

    struct Job {
        std::size_t row;
        ModelKind kind;
    };
    std::vector<Job> jobs;
    for (std::size_t r = 0; r < params.size(); ++r) {
        for (ModelKind kind : config.models) jobs.push_back(Job{r, kind});
    }
    struct JobResult {
        double rmse = kNaN;
        bool failed = false;
        std::optional<RollingResult> trace;
    };
    std::vector<JobResult> results(jobs.size());
    parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
        ProtocolConfig cfg = config;
        cfg.threads = 1;
        cfg.rnn.seed = derive_stream(config.rnn.seed, kRnnSeedTag, jobs[i].row);
        try {
            RollingResult run = rolling_evaluate(targets[jobs[i].row], jobs[i].kind, cfg);
            results[i].rmse = run.rmse;
            if (traces != nullptr && keep_trace(config.trace_mode, 0)) {
                results[i].trace = std::move(run);
            }
        } catch (const Error&) {
            results[i].failed = true;
        }
    });
    if (traces != nullptr) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (!results[i].trace.has_value()) continue;
            traces->push_back(SweepTrace{static_cast<double>(params[jobs[i].row]),
                                         jobs[i].kind, 0, std::move(*results[i].trace)});
        }
    }

    for (std::size_t r = 0; r < params.size(); ++r) {
        ReportRow row;
        row.scheme_param = params[r];
        row.effective_rate = effective_rate(targets[r], ground);
        row.trials = 1;
        try {
            const std::vector<double> values = targets[r].as_doubles();
            row.acf = aggregate({acf_at_lag(values, base.lag)});
            row.pe = aggregate({permutation_entropy(values, config.pe_order).normalized});
        } catch (const Error&) {
            ++row.failures;
            row.acf = aggregate({});
            row.pe = aggregate({});
        }
        std::vector<double> rmse_arima, rmse_rnn;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].row != r) continue;
            if (results[i].failed) {
                ++row.failures;
                continue;
            }
            (jobs[i].kind == ModelKind::kArima ? rmse_arima : rmse_rnn)
                .push_back(results[i].rmse);
        }
        row.rmse_arima = aggregate(rmse_arima);
        row.rmse_rnn = aggregate(rmse_rnn);
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

ExternalReport run_external_experiment(const CountSeries& raw,
                                       const std::vector<CountSeries>& level_targets,
                                       const std::vector<double>& level_params,
                                       const std::vector<int>& level_trials,
                                       const std::vector<ExternalVariant>& variants,
                                       std::uint64_t seed, const ProtocolConfig& config) {
    if (variants.empty()) {
        throw ParameterError("external_signal_experiment: no variants requested");
    }

    // The Prediction variant consumes next-day forecasts of the raw series,
    // produced once by a plain rolling run over the raw signal itself.
    std::vector<double> xhat_by_day;
    const bool needs_xhat =
        std::find(variants.begin(), variants.end(), ExternalVariant::kPrediction) !=
        variants.end();
    if (needs_xhat) {
        ProtocolConfig cfg = config;
        cfg.threads = 1;
        cfg.rnn.seed = derive_stream(seed, kRawModelTag);
        const RollingResult raw_run = rolling_evaluate(raw, ModelKind::kRnn, cfg);
        xhat_by_day.assign(raw.size(), kNaN);
        for (std::size_t i = 0; i < raw_run.predictions.size(); ++i) {
            xhat_by_day[static_cast<std::size_t>(config.initial_train_days) + i] =
                raw_run.predictions[i];
        }
    }

    struct Job {
        std::size_t level;
        std::size_t target_index;
        int trial;
        ExternalVariant variant;
    };
    std::vector<Job> jobs;
    std::size_t target_base = 0;
    for (std::size_t level = 0; level < level_params.size(); ++level) {
        for (int trial = 0; trial < level_trials[level]; ++trial) {
            for (ExternalVariant variant : variants) {
                jobs.push_back(
                    Job{level, target_base + static_cast<std::size_t>(trial), trial, variant});
            }
        }
        target_base += static_cast<std::size_t>(level_trials[level]);
    }
    struct JobResult {
        double rmse = kNaN;
        bool failed = false;
    };
    std::vector<JobResult> results(jobs.size());
    parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        ProtocolConfig cfg = config;
        cfg.threads = 1;
        // one seed per (level, trial): variants stay paired for comparison
        cfg.rnn.seed =
            derive_stream(seed, job.level, static_cast<std::uint64_t>(job.trial), kRnnSeedTag);
        ExternalContext ctx;
        ctx.external = &raw;
        ctx.variant = job.variant;
        ctx.xhat_by_day = needs_xhat ? &xhat_by_day : nullptr;
        try {
            results[i].rmse =
                rolling_evaluate(level_targets[job.target_index], ModelKind::kRnn, cfg, ctx)
                    .rmse;
        } catch (const Error&) {
            results[i].failed = true;
        }
    });

    ExternalReport report;
    report.normalization_label = to_string(config.normalization);
    target_base = 0;
    for (std::size_t level = 0; level < level_params.size(); ++level) {
        std::vector<double> rates;
        for (int trial = 0; trial < level_trials[level]; ++trial) {
            rates.push_back(effective_rate(
                level_targets[target_base + static_cast<std::size_t>(trial)], raw));
        }
        for (ExternalVariant variant : variants) {
            ExternalReportRow row;
            row.scheme_param = level_params[level];
            row.effective_rate = mean_of(rates);
            row.variant = variant;
            row.trials = level_trials[level];
            std::vector<double> rmses;
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                if (jobs[i].level != level || jobs[i].variant != variant) continue;
                if (results[i].failed) {
                    ++row.failures;
                    continue;
                }
                rmses.push_back(results[i].rmse);
            }
            row.rmse = aggregate(rmses);
            report.rows.push_back(std::move(row));
        }
        target_base += static_cast<std::size_t>(level_trials[level]);
    }
    return report;
}

}  // namespace

ExternalReport external_signal_experiment(const CountSeries& raw,
                                          std::span<const double> p_values,
                                          const std::vector<ExternalVariant>& variants,
                                          int trials, std::uint64_t seed,
                                          const ProtocolConfig& config) {
    check_protocol(config);
    validate(raw);
    if (trials < 1) throw ParameterError("external_signal_experiment: trials must be >= 1");
    if (p_values.empty()) throw ParameterError("external_signal_experiment: no p values");
    for (double p : p_values) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw ParameterError("external_signal_experiment: p values must lie in (0, 1]");
        }
    }
    std::vector<double> ps(p_values.begin(), p_values.end());
    std::sort(ps.begin(), ps.end());

    std::vector<CountSeries> targets;
    std::vector<double> params;
    std::vector<int> level_trials;
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        TrialSet set = binomial_thin(raw, ps[pi], trials, seed);
        for (CountSeries& s : set.series) targets.push_back(std::move(s));
        params.push_back(ps[pi]);
        level_trials.push_back(trials);
    }
    return run_external_experiment(raw, targets, params, level_trials, variants, seed, config);
}

ExternalReport external_signal_experiment(const EventLog& log, const RealWorldFamily& family,
                                          const std::vector<ExternalVariant>& variants,
                                          std::uint64_t seed, const ProtocolConfig& config) {
    check_protocol(config);
    if (family.params.empty()) {
        throw ParameterError("external_signal_experiment: no scheme parameters");
    }
    const DayRange range = covering_range(log);
    const CountSeries ground = aggregate_daily(log, range);

    std::vector<int> sorted = family.params;
    std::sort(sorted.begin(), sorted.end());
    std::vector<CountSeries> targets;
    std::vector<double> params;
    std::vector<int> level_trials;
    for (int param : sorted) {
        targets.push_back(realworld_series(log, family, param, range));
        params.push_back(param);
        level_trials.push_back(1);
    }
    return run_external_experiment(ground, targets, params, level_trials, variants, seed,
                                   config);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

void write_aggregate(std::ostream& out, const MetricAggregate& agg) {
    out << ',' << format_double(agg.mean) << ',' << format_double(agg.stddev);
}

nlohmann::json aggregate_to_json(const MetricAggregate& agg) {
    return {{"mean", agg.mean}, {"std", agg.stddev}, {"count", agg.count}};
}

}  // namespace

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
    out << "scheme_param,effective_rate,acf_mean,acf_std,pe_mean,pe_std,"
           "rmse_arima_mean,rmse_arima_std,rmse_rnn_mean,rmse_rnn_std,trials,failures\n";
    for (const ReportRow& row : report.rows) {
        out << format_double(row.scheme_param) << ',' << format_double(row.effective_rate);
        write_aggregate(out, row.acf);
        write_aggregate(out, row.pe);
        write_aggregate(out, row.rmse_arima);
        write_aggregate(out, row.rmse_rnn);
        out << ',' << row.trials << ',' << row.failures << '\n';
    }
}

std::string report_to_json(const ExperimentReport& report) {
    nlohmann::json doc;
    doc["ground_truth_lag"] = report.ground_truth_lag;
    doc["normalization"] = report.normalization_label;
    doc["rows"] = nlohmann::json::array();
    for (const ReportRow& row : report.rows) {
        doc["rows"].push_back({{"scheme_param", row.scheme_param},
                               {"effective_rate", row.effective_rate},
                               {"acf", aggregate_to_json(row.acf)},
                               {"pe", aggregate_to_json(row.pe)},
                               {"rmse_arima", aggregate_to_json(row.rmse_arima)},
                               {"rmse_rnn", aggregate_to_json(row.rmse_rnn)},
                               {"trials", row.trials},
                               {"failures", row.failures}});
    }
    return doc.dump(2);
}

void write_external_report_csv(const ExternalReport& report, std::ostream& out) {
    out << "scheme_param,effective_rate,variant,rmse_mean,rmse_std,trials,failures\n";
    for (const ExternalReportRow& row : report.rows) {
        out << format_double(row.scheme_param) << ',' << format_double(row.effective_rate)
            << ',' << to_string(row.variant) << ',' << format_double(row.rmse.mean) << ','
            << format_double(row.rmse.stddev) << ',' << row.trials << ',' << row.failures
            << '\n';
    }
}

std::string external_report_to_json(const ExternalReport& report) {
    nlohmann::json doc;
    doc["normalization"] = report.normalization_label;
    doc["rows"] = nlohmann::json::array();
    for (const ExternalReportRow& row : report.rows) {
        doc["rows"].push_back({{"scheme_param", row.scheme_param},
                               {"effective_rate", row.effective_rate},
                               {"variant", to_string(row.variant)},
                               {"rmse", aggregate_to_json(row.rmse)},
                               {"trials", row.trials},
                               {"failures", row.failures}});
    }
    return doc.dump(2);
}

void write_trace_csv(const RollingResult& result, std::ostream& out) {
    out << "day,actual,predicted,actual_normalized,predicted_normalized\n";
    for (std::size_t i = 0; i < result.predictions.size(); ++i) {
        const int day = result.first_predicted_day + static_cast<int>(i);
        const double actual = denormalize_value(result.normalization, result.actuals[i]);
        const double predicted =
            denormalize_value(result.normalization, result.predictions[i]);
        out << day << ',' << format_double(actual) << ',' << format_double(predicted) << ','
            << format_double(result.actuals[i]) << ',' << format_double(result.predictions[i])
            << '\n';
    }
}

}  // namespace filtercast
