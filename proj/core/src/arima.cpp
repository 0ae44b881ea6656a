#include "filtercast/arima.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "filtercast/stats.hpp"

namespace filtercast::arima {

namespace {

constexpr double kBigObjective = 1e300;
// Characteristic roots may reach this modulus. Kept clearly inside the unit
// circle: a (near-)double root parked at the boundary makes the residual
// recursion amplify like t * m^t, which turns one-step forecasts into
// runaways when the recursion is re-run over histories longer than the
// training window.
constexpr double kRootMargin = 0.98;
constexpr double kSseFloor = 1e-30;     // keeps AIC finite on exact fits

/// Max modulus over the roots of z^m + a[0] z^{m-1} + ... + a[m-1].
double max_root_modulus(std::vector<double> a) {
    // roots at zero only shrink the modulus; strip them
    while (!a.empty() && a.back() == 0.0) a.pop_back();
    const std::size_t m = a.size();
    if (m == 0) return 0.0;
    if (m == 1) return std::abs(a[0]);
    if (m == 2) {
        const std::complex<double> disc =
            std::sqrt(std::complex<double>(a[0] * a[0] - 4.0 * a[1], 0.0));
        const std::complex<double> r1 = (-a[0] + disc) / 2.0;
        const std::complex<double> r2 = (-a[0] - disc) / 2.0;
        return std::max(std::abs(r1), std::abs(r2));
    }
    // Durand-Kerner for degree 3..5
    std::vector<std::complex<double>> roots(m);
    const std::complex<double> gen(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        acc *= gen;
        roots[i] = acc;
    }
    auto eval = [&](std::complex<double> z) {
        std::complex<double> f(1.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) f = f * z + a[i];
        return f;
    };
    for (int iter = 0; iter < 80; ++iter) {
        double max_step = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            if (std::abs(denom) < 1e-300) continue;
            const std::complex<double> step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < 1e-9) break;
    }
    double worst = 0.0;
    for (const auto& r : roots) worst = std::max(worst, std::abs(r));
    return worst;
}

/// Lagrange bound: if sum |a_i| / r^i <= 1 every root of
/// z^m + a[0] z^{m-1} + ... has modulus <= r. Cheap sufficient condition
/// that skips root-finding for the bulk of simplex evaluations.
bool roots_within(std::span<const double> a, double r) {
    double total = 0.0;
    double scale = 1.0;
    for (double c : a) {
        scale *= r;
        total += std::abs(c) / scale;
    }
    return total <= 1.0;
}

double root_excess(std::vector<double> coeff) {
    if (roots_within(coeff, kRootMargin)) return 0.0;
    return std::max(0.0, max_root_modulus(std::move(coeff)) - kRootMargin);
}

/// Root-modulus violation of the stationarity/invertibility region.
/// AR characteristic polynomial: z^p - ar[0] z^{p-1} - ... - ar[p-1];
/// MA: z^q + ma[0] z^{q-1} + ... + ma[q-1]. Both must have roots inside the
/// unit circle.
double region_violation(std::span<const double> ar, std::span<const double> ma) {
    double viol = 0.0;
    if (!ar.empty()) {
        std::vector<double> coeff(ar.size());
        for (std::size_t i = 0; i < ar.size(); ++i) coeff[i] = -ar[i];
        viol += root_excess(std::move(coeff));
    }
    if (!ma.empty()) {
        viol += root_excess(std::vector<double>(ma.begin(), ma.end()));
    }
    return viol;
}

/// Conditional-sum-of-squares recursion in mean form. Residuals for the
/// first max(p,q) steps are pinned at zero.
class CssObjective {
public:
    CssObjective(const std::vector<double>& w, int p, int q)
        : w_(w), p_(p), q_(q), start_(std::max(p, q)), scratch_(w.size(), 0.0) {}

    int n_eff() const { return static_cast<int>(w_.size()) - start_; }

    double sse(double mu, std::span<const double> ar, std::span<const double> ma) const {
        const int n = static_cast<int>(w_.size());
        std::fill(scratch_.begin(), scratch_.end(), 0.0);
        double total = 0.0;
        for (int t = start_; t < n; ++t) {
            double pred = mu;
            for (int i = 1; i <= p_; ++i) pred += ar[i - 1] * (w_[t - i] - mu);
            for (int j = 1; j <= q_; ++j) pred += ma[j - 1] * scratch_[t - j];
            const double r = w_[t] - pred;
            scratch_[t] = r;
            total += r * r;
        }
        return total;
    }

    /// Penalized objective over the packed vector [mu, ar..., ma...].
    double operator()(std::span<const double> params) const {
        const double mu = params[0];
        const auto ar = params.subspan(1, static_cast<std::size_t>(p_));
        const auto ma = params.subspan(1 + static_cast<std::size_t>(p_),
                                       static_cast<std::size_t>(q_));
        const double raw = sse(mu, ar, ma);
        if (!std::isfinite(raw)) return kBigObjective;
        const double viol = region_violation(ar, ma);
        // the wall must dominate any overfitting gain right at the margin,
        // otherwise a root parked on the unit circle makes the residual
        // recursion drift and one-step forecasts run away
        const double wall = 1.0 + 200.0 * viol;
        const double penalized = raw * wall * wall + n_eff() * 2500.0 * viol * viol;
        return std::isfinite(penalized) ? penalized : kBigObjective;
    }

private:
    const std::vector<double>& w_;
    int p_;
    int q_;
    int start_;
    mutable std::vector<double> scratch_;
};

/// Yule-Walker AR(p) start values from the sample autocovariances.
std::vector<double> yule_walker(const std::vector<double>& w, int p) {
    std::vector<double> phi(static_cast<std::size_t>(p), 0.0);
    if (p == 0) return phi;
    const int n = static_cast<int>(w.size());
    const double m = mean_of(w);
    std::vector<double> cov(static_cast<std::size_t>(p) + 1, 0.0);
    for (int lag = 0; lag <= p; ++lag) {
        double s = 0.0;
        for (int t = lag; t < n; ++t) s += (w[t] - m) * (w[t - lag] - m);
        cov[static_cast<std::size_t>(lag)] = s / n;
    }
    if (cov[0] <= 0.0) return phi;

    // Toeplitz system solved by Gaussian elimination with partial pivoting;
    // p <= 5 keeps this trivial.
    std::vector<std::vector<double>> m_aug(static_cast<std::size_t>(p),
                                           std::vector<double>(static_cast<std::size_t>(p) + 1));
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            m_aug[i][static_cast<std::size_t>(j)] = cov[static_cast<std::size_t>(std::abs(i - j))];
        }
        m_aug[i][static_cast<std::size_t>(p)] = cov[static_cast<std::size_t>(i) + 1];
    }
    for (int col = 0; col < p; ++col) {
        int pivot = col;
        for (int r = col + 1; r < p; ++r) {
            if (std::abs(m_aug[r][static_cast<std::size_t>(col)]) >
                std::abs(m_aug[pivot][static_cast<std::size_t>(col)])) {
                pivot = r;
            }
        }
        if (std::abs(m_aug[pivot][static_cast<std::size_t>(col)]) < 1e-12) {
            return std::vector<double>(static_cast<std::size_t>(p), 0.0);
        }
        std::swap(m_aug[static_cast<std::size_t>(col)], m_aug[static_cast<std::size_t>(pivot)]);
        for (int r = col + 1; r < p; ++r) {
            const double f = m_aug[r][static_cast<std::size_t>(col)] /
                             m_aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int c = col; c <= p; ++c) {
                m_aug[r][static_cast<std::size_t>(c)] -=
                    f * m_aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            }
        }
    }
    for (int row = p - 1; row >= 0; --row) {
        double v = m_aug[row][static_cast<std::size_t>(p)];
        for (int c = row + 1; c < p; ++c) {
            v -= m_aug[row][static_cast<std::size_t>(c)] * phi[static_cast<std::size_t>(c)];
        }
        phi[static_cast<std::size_t>(row)] =
            v / m_aug[row][static_cast<std::size_t>(row)];
    }
    // keep the start point comfortably inside the search region
    const double viol = region_violation(phi, {});
    if (viol > 0.0) {
        for (double& x : phi) x *= 0.9 / (0.9 + viol);
    }
    return phi;
}

struct SimplexResult {
    std::vector<double> best;
    double objective = 0.0;
    bool converged = false;
};

/// Deterministic Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). Converged when the objective spread collapses or the best
/// SSE stops changing by more than tol (relative) over a window of
/// iterations.
SimplexResult nelder_mead(const CssObjective& objective, std::vector<double> start,
                          int max_iterations, double tol) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> vertex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) {
        vertex[i + 1][i] += 0.1;
    }
    std::vector<double> value(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) value[i] = objective(vertex[i]);

    std::vector<std::size_t> rank(dim + 1);
    auto sort_rank = [&] {
        std::iota(rank.begin(), rank.end(), std::size_t{0});
        std::stable_sort(rank.begin(), rank.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    };

    constexpr int kStallWindow = 15;
    std::vector<double> best_history;
    best_history.reserve(static_cast<std::size_t>(max_iterations) + 1);

    SimplexResult result;
    for (int iter = 0; iter < max_iterations; ++iter) {
        sort_rank();
        const std::size_t best = rank[0];
        const std::size_t worst = rank[dim];
        const std::size_t second_worst = rank[dim - 1];
        const double scale = tol * (std::abs(value[best]) + 1e-12);
        best_history.push_back(value[best]);
        const bool spread_done = (value[worst] - value[best]) <= scale;
        const bool stalled =
            iter >= kStallWindow &&
            best_history[static_cast<std::size_t>(iter - kStallWindow)] - value[best] <= scale;
        if (spread_done || stalled) {
            result.best = vertex[best];
            result.objective = value[best];
            result.converged = true;
            return result;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += vertex[i][k];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef) {
            std::vector<double> x(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                x[k] = centroid[k] + coef * (centroid[k] - vertex[worst][k]);
            }
            return x;
        };

        std::vector<double> reflected = blend(1.0);
        const double f_reflected = objective(reflected);
        if (f_reflected < value[rank[0]]) {
            std::vector<double> expanded = blend(2.0);
            const double f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                vertex[worst] = std::move(expanded);
                value[worst] = f_expanded;
            } else {
                vertex[worst] = std::move(reflected);
                value[worst] = f_reflected;
            }
        } else if (f_reflected < value[second_worst]) {
            vertex[worst] = std::move(reflected);
            value[worst] = f_reflected;
        } else {
            std::vector<double> contracted = blend(-0.5);
            const double f_contracted = objective(contracted);
            if (f_contracted < value[worst]) {
                vertex[worst] = std::move(contracted);
                value[worst] = f_contracted;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == rank[0]) continue;
                    for (std::size_t k = 0; k < dim; ++k) {
                        vertex[i][k] = vertex[rank[0]][k] + 0.5 * (vertex[i][k] - vertex[rank[0]][k]);
                    }
                    value[i] = objective(vertex[i]);
                }
            }
        }
    }
    sort_rank();
    result.best = vertex[rank[0]];
    result.objective = value[rank[0]];
    result.converged = false;
    return result;
}

/// Exact CSS minimizer for q = 0: ordinary least squares of w_t on its p
/// lags plus a constant. Returns false when the regression is singular or
/// the solution leaves the stationarity region (caller falls back to the
/// simplex).
bool least_squares_ar(const std::vector<double>& w, int p, double* mu_out,
                      std::vector<double>* ar_out) {
    const int n = static_cast<int>(w.size());
    const int k = p + 1;
    std::vector<std::vector<double>> ata(static_cast<std::size_t>(k),
                                         std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0));
    for (int t = p; t < n; ++t) {
        std::vector<double> row(static_cast<std::size_t>(k));
        row[0] = 1.0;
        for (int i = 1; i <= p; ++i) row[static_cast<std::size_t>(i)] = w[t - i];
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) {
                ata[a][static_cast<std::size_t>(b)] +=
                    row[static_cast<std::size_t>(a)] * row[static_cast<std::size_t>(b)];
            }
            ata[a][static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(a)] * w[t];
        }
    }
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r) {
            if (std::abs(ata[r][static_cast<std::size_t>(col)]) >
                std::abs(ata[pivot][static_cast<std::size_t>(col)])) {
                pivot = r;
            }
        }
        if (std::abs(ata[pivot][static_cast<std::size_t>(col)]) < 1e-10) return false;
        std::swap(ata[static_cast<std::size_t>(col)], ata[static_cast<std::size_t>(pivot)]);
        for (int r = col + 1; r < k; ++r) {
            const double f = ata[r][static_cast<std::size_t>(col)] /
                             ata[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int c = col; c <= k; ++c) {
                ata[r][static_cast<std::size_t>(c)] -=
                    f * ata[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            }
        }
    }
    std::vector<double> sol(static_cast<std::size_t>(k));
    for (int row = k - 1; row >= 0; --row) {
        double v = ata[row][static_cast<std::size_t>(k)];
        for (int c = row + 1; c < k; ++c) {
            v -= ata[row][static_cast<std::size_t>(c)] * sol[static_cast<std::size_t>(c)];
        }
        sol[static_cast<std::size_t>(row)] = v / ata[row][static_cast<std::size_t>(row)];
    }
    std::vector<double> ar(sol.begin() + 1, sol.end());
    const double phi_sum = std::accumulate(ar.begin(), ar.end(), 0.0);
    if (std::abs(1.0 - phi_sum) < 1e-9) return false;  // process mean undefined
    if (region_violation(ar, {}) > 0.0) return false;
    *mu_out = sol[0] / (1.0 - phi_sum);
    *ar_out = std::move(ar);
    return true;
}

}  // namespace

GridSearchError::GridSearchError(std::vector<CellFailure> failures)
    : Error([&failures] {
          std::ostringstream out;
          out << "all " << failures.size() << " grid cells failed";
          const std::size_t shown = std::min<std::size_t>(failures.size(), 3);
          for (std::size_t i = 0; i < shown; ++i) {
              out << "; (" << failures[i].order.p << "," << failures[i].order.d << ","
                  << failures[i].order.q << "): " << failures[i].message;
          }
          if (failures.size() > shown) out << "; ...";
          return out.str();
      }()),
      failures_(std::move(failures)) {}

std::vector<double> difference(std::span<const double> series, int d) {
    if (d < 0) throw ParameterError("difference: d must be >= 0");
    if (static_cast<int>(series.size()) <= d) {
        throw LengthError("difference: series has length <= d");
    }
    std::vector<double> w(series.begin(), series.end());
    for (int round = 0; round < d; ++round) {
        for (std::size_t t = w.size() - 1; t >= 1; --t) w[t] -= w[t - 1];
        w.erase(w.begin());
    }
    return w;
}

double undifference(double forecast, std::span<const double> history, int d) {
    if (static_cast<int>(history.size()) < d) {
        throw LengthError("undifference: history shorter than d");
    }
    // forecast is on the d-fold differenced scale; integrate back up by
    // adding the last value of every lower difference level.
    std::vector<double> level(history.begin(), history.end());
    double result = forecast;
    for (int round = 0; round < d; ++round) {
        result += level.back();
        for (std::size_t t = level.size() - 1; t >= 1; --t) level[t] -= level[t - 1];
        level.erase(level.begin());
    }
    return result;
}

ArimaModel fit_css(std::span<const double> series, ArimaOrder order,
                   const FitOptions& options) {
    if (order.p < 0 || order.d < 0 || order.q < 0) {
        throw ParameterError("fit_css: negative order");
    }
    const int n_orig = static_cast<int>(series.size());
    if (n_orig <= order.p + order.q + order.d) {
        throw LengthError("fit_css: series length must exceed p + q + d");
    }
    if (options.warnings != nullptr && n_orig < 10 * order.param_count()) {
        options.warnings->push_back("series length " + std::to_string(n_orig) +
                                    " below recommended 10 * (p+q+1) for order (" +
                                    std::to_string(order.p) + "," + std::to_string(order.d) +
                                    "," + std::to_string(order.q) + ")");
    }

    const std::vector<double> w = difference(series, order.d);
    CssObjective objective(w, order.p, order.q);

    ArimaModel model;
    model.order = order;
    model.train_len = n_orig;

    bool solved = false;
    if (order.q == 0) {
        double mu = 0.0;
        std::vector<double> ar;
        if (least_squares_ar(w, order.p, &mu, &ar)) {
            model.intercept = mu;
            model.ar = std::move(ar);
            solved = true;
        }
    }

    bool converged = true;
    if (!solved) {
        std::vector<double> start(static_cast<std::size_t>(order.param_count()), 0.0);
        start[0] = mean_of(w);
        const std::vector<double> phi0 = yule_walker(w, order.p);
        for (int i = 0; i < order.p; ++i) start[static_cast<std::size_t>(i) + 1] = phi0[static_cast<std::size_t>(i)];
        const SimplexResult fit =
            nelder_mead(objective, std::move(start), options.max_iterations, options.tolerance);
        model.intercept = fit.best[0];
        model.ar.assign(fit.best.begin() + 1, fit.best.begin() + 1 + order.p);
        model.ma.assign(fit.best.begin() + 1 + order.p, fit.best.end());
        converged = fit.converged;
    }

    const double sse = objective.sse(model.intercept, model.ar, model.ma);
    const int n_eff = objective.n_eff();
    model.sigma2 = sse / n_eff;
    model.aic = n_eff * std::log(std::max(model.sigma2, kSseFloor)) +
                2.0 * order.param_count();
    if (!converged) {
        throw ConvergenceError("fit_css: simplex hit the iteration cap for order (" +
                                   std::to_string(order.p) + "," + std::to_string(order.d) +
                                   "," + std::to_string(order.q) + ")",
                               std::move(model));
    }
    return model;
}

ArimaModel grid_search(std::span<const double> series, const GridBounds& bounds,
                       const FitOptions& options, std::vector<CellFailure>* failures_out) {
    if (bounds.max_p < 0 || bounds.max_d < 0 || bounds.max_q < 0) {
        throw ParameterError("grid_search: negative grid bounds");
    }
    std::vector<CellFailure> failures;
    bool found = false;
    ArimaModel best_model;
    auto better = [](const ArimaModel& a, const ArimaModel& b) {
        if (a.aic != b.aic) return a.aic < b.aic;
        if (a.order.param_count() != b.order.param_count()) {
            return a.order.param_count() < b.order.param_count();
        }
        return std::tie(a.order.p, a.order.d, a.order.q) <
               std::tie(b.order.p, b.order.d, b.order.q);
    };
    for (int p = 0; p <= bounds.max_p; ++p) {
        for (int d = 0; d <= bounds.max_d; ++d) {
            for (int q = 0; q <= bounds.max_q; ++q) {
                const ArimaOrder order{p, d, q};
                if (options.skip_under_recommended &&
                    static_cast<int>(series.size()) < 10 * order.param_count()) {
                    continue;
                }
                try {
                    ArimaModel candidate = fit_css(series, order, options);
                    if (!found || better(candidate, best_model)) {
                        best_model = std::move(candidate);
                        found = true;
                    }
                } catch (const Error& e) {
                    failures.push_back(CellFailure{order, e.what()});
                }
            }
        }
    }
    if (failures_out != nullptr) *failures_out = failures;
    if (!found && failures.empty()) {
        throw LengthError("grid_search: every cell is below the recommended minimum length");
    }
    if (!found) throw GridSearchError(std::move(failures));
    return best_model;
}

double forecast_one(const ArimaModel& model, std::span<const double> history) {
    const int p = model.order.p;
    const int q = model.order.q;
    const int d = model.order.d;
    if (static_cast<int>(history.size()) < p + d || history.empty()) {
        throw LengthError("forecast_one: history shorter than p + d");
    }
    const std::vector<double> w = difference(history, d);
    const int n = static_cast<int>(w.size());
    const int start = std::max(p, q);
    std::vector<double> e(w.size(), 0.0);
    for (int t = start; t < n; ++t) {
        double pred = model.intercept;
        for (int i = 1; i <= p; ++i) pred += model.ar[static_cast<std::size_t>(i - 1)] * (w[t - i] - model.intercept);
        for (int j = 1; j <= q; ++j) pred += model.ma[static_cast<std::size_t>(j - 1)] * e[t - j];
        e[static_cast<std::size_t>(t)] = w[static_cast<std::size_t>(t)] - pred;
    }
    double next = model.intercept;
    for (int i = 1; i <= p; ++i) next += model.ar[static_cast<std::size_t>(i - 1)] * (w[n - i] - model.intercept);
    for (int j = 1; j <= q; ++j) {
        const int idx = n - j;
        if (idx >= 0) next += model.ma[static_cast<std::size_t>(j - 1)] * e[static_cast<std::size_t>(idx)];
    }
    return undifference(next, history, d);
}

std::string to_json(const ArimaModel& model) {
    nlohmann::json doc;
    doc["order"] = {{"p", model.order.p}, {"d", model.order.d}, {"q", model.order.q}};
    doc["intercept"] = model.intercept;
    doc["ar"] = model.ar;
    doc["ma"] = model.ma;
    doc["sigma2"] = model.sigma2;
    doc["aic"] = model.aic;
    doc["train_len"] = model.train_len;
    return doc.dump(2);
}

ArimaModel model_from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("arima model JSON: ") + e.what(), 0);
    }
    ArimaModel model;
    try {
        model.order.p = doc.at("order").at("p").get<int>();
        model.order.d = doc.at("order").at("d").get<int>();
        model.order.q = doc.at("order").at("q").get<int>();
        model.intercept = doc.at("intercept").get<double>();
        model.ar = doc.at("ar").get<std::vector<double>>();
        model.ma = doc.at("ma").get<std::vector<double>>();
        model.sigma2 = doc.at("sigma2").get<double>();
        model.aic = doc.at("aic").get<double>();
        model.train_len = doc.at("train_len").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("arima model JSON: ") + e.what());
    }
    if (static_cast<int>(model.ar.size()) != model.order.p ||
        static_cast<int>(model.ma.size()) != model.order.q) {
        throw ValidationError("arima model JSON: coefficient counts do not match order");
    }
    return model;
}

}  // namespace filtercast::arima
