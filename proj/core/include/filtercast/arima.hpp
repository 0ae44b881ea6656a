#pragma once

#include <span>
#include <string>
#include <vector>

#include "filtercast/errors.hpp"

namespace filtercast::arima {

struct ArimaOrder {
    int p = 0;  // autoregressive terms
    int d = 0;  // differences
    int q = 0;  // moving-average terms

    int param_count() const { return p + q + 1; }
    bool operator==(const ArimaOrder&) const = default;
};

/// Fitted model in mean form: with w the d-fold differenced series and
/// mu the intercept,
///   (w_t - mu) = sum_i ar[i] (w_{t-i-1} - mu) + sum_j ma[j] e_{t-j-1} + e_t.
struct ArimaModel {
    ArimaOrder order;
    double intercept = 0.0;
    std::vector<double> ar;
    std::vector<double> ma;
    double sigma2 = 0.0;
    double aic = 0.0;
    int train_len = 0;
};

struct FitOptions {
    int max_iterations = 500;    // simplex iterations, no restarts
    double tolerance = 1e-8;     // relative SSE change at convergence
    std::vector<std::string>* warnings = nullptr;
    /// grid_search only: silently skip cells whose recommended minimum
    /// length 10 * (p+q+1) exceeds the series. Short training windows would
    /// otherwise let heavily parameterized cells win AIC by memorizing
    /// noise.
    bool skip_under_recommended = false;
};

struct GridBounds {
    int max_p = 5;
    int max_d = 2;
    int max_q = 5;
};

struct CellFailure {
    ArimaOrder order;
    std::string message;
};

/// The simplex hit its iteration cap; carries the best parameters seen.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, ArimaModel best)
        : Error(message), best_(std::move(best)) {}

    const ArimaModel& best_model() const { return best_; }

private:
    ArimaModel best_;
};

/// Every grid cell failed to fit.
class GridSearchError : public Error {
public:
    explicit GridSearchError(std::vector<CellFailure> failures);

    const std::vector<CellFailure>& failures() const { return failures_; }

private:
    std::vector<CellFailure> failures_;
};

/// d-fold first differences. Throws LengthError when length <= d.
std::vector<double> difference(std::span<const double> series, int d);

/// Inverts d-fold differencing for a one-step forecast given the recent
/// undifferenced history.
double undifference(double forecast, std::span<const double> history, int d);

/// Conditional-sum-of-squares fit of one (p,d,q) cell. Deterministic:
/// Yule-Walker AR start, zero MA start, intercept at the sample mean, then
/// Nelder-Mead (closed-form least squares when q = 0). Stationarity and
/// invertibility are kept by a smooth root-modulus penalty.
ArimaModel fit_css(std::span<const double> series, ArimaOrder order,
                   const FitOptions& options = {});

/// Fits every cell in the grid and returns the minimum-AIC model. Ties break
/// toward fewer parameters, then lexicographic (p,d,q). Individual cell
/// failures are collected (optionally into failures_out); only an all-cell
/// failure throws.
ArimaModel grid_search(std::span<const double> series, const GridBounds& bounds = {},
                       const FitOptions& options = {},
                       std::vector<CellFailure>* failures_out = nullptr);

/// One-step-ahead forecast. Re-runs the residual recursion over the supplied
/// history, so the model can be reused as history accrues between refits.
double forecast_one(const ArimaModel& model, std::span<const double> history);

std::string to_json(const ArimaModel& model);
ArimaModel model_from_json(const std::string& json_text);

}  // namespace filtercast::arima
