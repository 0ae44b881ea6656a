#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "filtercast/arima.hpp"
#include "filtercast/errors.hpp"
#include "filtercast/lstm.hpp"
#include "filtercast/sampling.hpp"
#include "filtercast/series.hpp"

namespace filtercast {

enum class ModelKind { kArima, kRnn };
std::string to_string(ModelKind kind);

enum class Normalization { kWholeSeries, kTrainOnly };
std::string to_string(Normalization mode);

/// External-signal wiring of a rolling run: no external input, the forecast
/// x_hat of the raw series, or the true (oracle) raw value.
enum class ExternalVariant { kWithout, kPrediction, kFull };
std::string to_string(ExternalVariant variant);

/// Rolling next-day protocol: train on the first month, forecast one day at
/// a time, refit on all accumulated history every week of predictions.
struct ProtocolConfig {
    int initial_train_days = 30;
    int retrain_every = 7;
    Normalization normalization = Normalization::kWholeSeries;
    std::vector<ModelKind> models = {ModelKind::kArima, ModelKind::kRnn};

    // engine settings
    arima::GridBounds arima_grid{};
    bool freeze_arima_order = false;  // keep the first selected (p,d,q) at refits
    rnn::RnnSpec rnn{};
    int rnn_retrain_epochs = 30;      // warm-start continuation per refit
    int rnn_retrain_patience = 8;

    // sweep settings
    int forecast_trials = 10;  // metrics run on all trials; forecasts on this many
    int pe_order = 3;
    int max_lag = 7;
    int threads = 0;           // 0 = hardware concurrency
    enum class TraceMode { kNone, kFirstTrial, kAll };
    TraceMode trace_mode = TraceMode::kFirstTrial;
};

/// Read guard enforcing the no-look-ahead protocol invariant: any access
/// beyond the current limit throws LookAheadError. The rolling loop funnels
/// every history read through one of these.
class GuardedSeries {
public:
    explicit GuardedSeries(std::span<const double> values)
        : values_(values), limit_(0) {}

    void set_limit(std::size_t limit) { limit_ = limit; }
    std::size_t size() const { return values_.size(); }

    double at(std::size_t index) const {
        if (index > limit_) {
            throw LookAheadError("look-ahead: index " + std::to_string(index) +
                                 " read while forecasting day " + std::to_string(limit_ + 1));
        }
        return values_[index];
    }

    /// Copies values [0, count); every element passes through the guard.
    std::vector<double> prefix(std::size_t count) const {
        std::vector<double> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(at(i));
        return out;
    }

private:
    std::span<const double> values_;
    std::size_t limit_;
};

/// External-signal context for one rolling run.
struct ExternalContext {
    const CountSeries* external = nullptr;
    ExternalVariant variant = ExternalVariant::kWithout;
    /// Normalized next-day forecasts of the external series indexed by
    /// absolute day; required for kPrediction.
    const std::vector<double>* xhat_by_day = nullptr;
};

struct RollingResult {
    int first_predicted_day = 0;
    std::vector<double> predictions;  // normalized scale
    std::vector<double> actuals;      // normalized scale
    double rmse = 0.0;                // over all predicted days, normalized units
    int fit_failures = 0;             // refits that fell back to the previous model
    NormalizedSeries normalization;   // statistics used (for denormalized traces)
};

RollingResult rolling_evaluate(const CountSeries& series, ModelKind kind,
                               const ProtocolConfig& config,
                               const ExternalContext& external = {});

struct MetricAggregate {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

struct ReportRow {
    double scheme_param = 0.0;
    double effective_rate = 0.0;
    MetricAggregate acf;
    MetricAggregate pe;           // normalized permutation entropy
    MetricAggregate rmse_arima;
    MetricAggregate rmse_rnn;
    int trials = 0;
    int failures = 0;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;  // ordered by scheme parameter
    int ground_truth_lag = 1;
    std::string normalization_label;

    int total_failures() const;
};

/// One retained rolling run, for the per-day prediction trace files.
struct SweepTrace {
    double scheme_param = 0.0;
    ModelKind kind = ModelKind::kArima;
    int trial = 0;
    RollingResult result;
};

/// Random-sampling sweep: thins the ground truth at every p, measures ACF at
/// the ground-truth best lag, permutation entropy and per-model rolling RMSE,
/// and aggregates mean/std over trials. p = 1 must be present as the
/// unsampled baseline row.
ExperimentReport sweep_random(const CountSeries& x, std::span<const double> p_values,
                              int trials, std::uint64_t seed, const ProtocolConfig& config,
                              std::vector<SweepTrace>* traces = nullptr);

struct RealWorldFamily {
    enum class Kind { kThreshold, kCategoryStack };
    Kind kind = Kind::kThreshold;
    std::vector<int> params;  // thresholds or k values
};

/// Real-world sweep over an event log: one deterministic row per threshold
/// or category count, placed on the p-axis via the effective rate.
ExperimentReport sweep_realworld(const EventLog& log, const RealWorldFamily& family,
                                 const ProtocolConfig& config,
                                 std::vector<SweepTrace>* traces = nullptr);

struct ExternalReportRow {
    double scheme_param = 0.0;
    double effective_rate = 0.0;
    ExternalVariant variant = ExternalVariant::kWithout;
    MetricAggregate rmse;
    int trials = 0;
    int failures = 0;
};

struct ExternalReport {
    std::vector<ExternalReportRow> rows;
    std::string normalization_label;

    int total_failures() const;
};

/// External-signal experiment (RNN only): per sampling level and variant,
/// rolling RMSE of forecasting the thinned series with the raw series as the
/// external input. The Prediction variant first runs a raw-series model to
/// produce x_hat for each day.
ExternalReport external_signal_experiment(const CountSeries& raw,
                                          std::span<const double> p_values,
                                          const std::vector<ExternalVariant>& variants,
                                          int trials, std::uint64_t seed,
                                          const ProtocolConfig& config);

/// Real-world form: targets come from threshold/category filters on the log
/// and the full aggregate serves as the raw external signal.
ExternalReport external_signal_experiment(const EventLog& log, const RealWorldFamily& family,
                                          const std::vector<ExternalVariant>& variants,
                                          std::uint64_t seed, const ProtocolConfig& config);

// Report serialization. CSV columns:
// scheme_param,effective_rate,acf_mean,acf_std,pe_mean,pe_std,
// rmse_arima_mean,rmse_arima_std,rmse_rnn_mean,rmse_rnn_std,trials,failures
void write_report_csv(const ExperimentReport& report, std::ostream& out);
std::string report_to_json(const ExperimentReport& report);
void write_external_report_csv(const ExternalReport& report, std::ostream& out);
std::string external_report_to_json(const ExternalReport& report);

/// Per-day prediction trace for plotting:
/// day,actual,predicted,actual_normalized,predicted_normalized
void write_trace_csv(const RollingResult& result, std::ostream& out);

/// Fixed-format double used in every CSV so identical runs are
/// byte-identical.
std::string format_double(double v);

}  // namespace filtercast
