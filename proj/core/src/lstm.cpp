#include "filtercast/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "filtercast/errors.hpp"
#include "filtercast/rng.hpp"

namespace filtercast::rnn {

namespace {

constexpr std::uint64_t kInitTag = 0x6c73746dull;  // "lstm"

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Offsets into the flat parameter vector.
struct Layout {
    int input_dim;
    int hidden;
    bool head_extra;

    std::size_t w() const { return 0; }
    std::size_t u() const { return static_cast<std::size_t>(4 * hidden) * input_dim; }
    std::size_t b() const { return u() + static_cast<std::size_t>(4 * hidden) * hidden; }
    std::size_t head_w() const { return b() + static_cast<std::size_t>(4 * hidden); }
    std::size_t head_dim() const { return static_cast<std::size_t>(hidden) + (head_extra ? 1 : 0); }
    std::size_t head_b() const { return head_w() + head_dim(); }
    std::size_t total() const { return head_b() + 1; }
};

Layout layout_of(const RnnModel& model) {
    return Layout{model.spec.input_dim, model.spec.hidden, model.head_extra};
}

void check_input(const RnnModel& model, const Matrix& input,
                 const std::optional<double>& head_extra) {
    if (input.cols != model.spec.input_dim) {
        throw ShapeError("lstm: input has " + std::to_string(input.cols) +
                         " columns, model expects " + std::to_string(model.spec.input_dim));
    }
    if (input.rows < 1) throw ShapeError("lstm: input has no time steps");
    if (model.head_extra != head_extra.has_value()) {
        throw ShapeError(model.head_extra ? "lstm: model expects a head-concat external value"
                                          : "lstm: model takes no head-concat value");
    }
}

/// Per-step activations cached for backpropagation through time.
struct ForwardCache {
    int steps = 0;
    std::vector<double> gates;  // steps x 4H: i, f, g, o post-activation
    std::vector<double> c;      // steps x H
    std::vector<double> tc;     // steps x H, tanh(c)
    std::vector<double> h;      // steps x H
};

double forward_pass(const RnnModel& model, const Matrix& input,
                    const std::optional<double>& head_extra, ForwardCache* cache) {
    const Layout lay = layout_of(model);
    const int H = lay.hidden;
    const int I = lay.input_dim;
    const double* W = model.params.data() + lay.w();
    const double* U = model.params.data() + lay.u();
    const double* B = model.params.data() + lay.b();
    const double* Wy = model.params.data() + lay.head_w();
    const double by = model.params[lay.head_b()];

    if (cache != nullptr) {
        cache->steps = input.rows;
        cache->gates.assign(static_cast<std::size_t>(input.rows) * 4 * H, 0.0);
        cache->c.assign(static_cast<std::size_t>(input.rows) * H, 0.0);
        cache->tc.assign(static_cast<std::size_t>(input.rows) * H, 0.0);
        cache->h.assign(static_cast<std::size_t>(input.rows) * H, 0.0);
    }

    std::vector<double> h(static_cast<std::size_t>(H), 0.0);
    std::vector<double> c(static_cast<std::size_t>(H), 0.0);
    std::vector<double> a(static_cast<std::size_t>(4 * H), 0.0);
    for (int t = 0; t < input.rows; ++t) {
        const double* x = input.data.data() + static_cast<std::size_t>(t) * I;
        for (int l = 0; l < 4 * H; ++l) {
            double acc = B[l];
            const double* wrow = W + static_cast<std::size_t>(l) * I;
            for (int i = 0; i < I; ++i) acc += wrow[i] * x[i];
            const double* urow = U + static_cast<std::size_t>(l) * H;
            for (int k = 0; k < H; ++k) acc += urow[k] * h[static_cast<std::size_t>(k)];
            a[static_cast<std::size_t>(l)] = acc;
        }
        for (int k = 0; k < H; ++k) {
            const double gi = sigmoid(a[static_cast<std::size_t>(k)]);
            const double gf = sigmoid(a[static_cast<std::size_t>(H + k)]);
            const double gg = std::tanh(a[static_cast<std::size_t>(2 * H + k)]);
            const double go = sigmoid(a[static_cast<std::size_t>(3 * H + k)]);
            const double ct = gf * c[static_cast<std::size_t>(k)] + gi * gg;
            const double tct = std::tanh(ct);
            c[static_cast<std::size_t>(k)] = ct;
            h[static_cast<std::size_t>(k)] = go * tct;
            if (cache != nullptr) {
                const std::size_t g0 = (static_cast<std::size_t>(t) * 4 + 0) * H + k;
                cache->gates[g0] = gi;
                cache->gates[(static_cast<std::size_t>(t) * 4 + 1) * H + k] = gf;
                cache->gates[(static_cast<std::size_t>(t) * 4 + 2) * H + k] = gg;
                cache->gates[(static_cast<std::size_t>(t) * 4 + 3) * H + k] = go;
                cache->c[static_cast<std::size_t>(t) * H + k] = ct;
                cache->tc[static_cast<std::size_t>(t) * H + k] = tct;
                cache->h[static_cast<std::size_t>(t) * H + k] = h[static_cast<std::size_t>(k)];
            }
        }
    }
    double pred = by;
    for (int k = 0; k < H; ++k) pred += Wy[k] * h[static_cast<std::size_t>(k)];
    if (model.head_extra) pred += Wy[H] * *head_extra;
    return pred;
}

/// Accumulates one sample's gradient contribution. dpred already carries the
/// 2 (pred - y) / N factor.
void backward_pass(const RnnModel& model, const Matrix& input,
                   const std::optional<double>& head_extra, const ForwardCache& cache,
                   double dpred, std::vector<double>& grad) {
    const Layout lay = layout_of(model);
    const int H = lay.hidden;
    const int I = lay.input_dim;
    const double* U = model.params.data() + lay.u();
    const double* Wy = model.params.data() + lay.head_w();
    double* gW = grad.data() + lay.w();
    double* gU = grad.data() + lay.u();
    double* gB = grad.data() + lay.b();
    double* gWy = grad.data() + lay.head_w();

    const int steps = cache.steps;
    const double* h_last = cache.h.data() + static_cast<std::size_t>(steps - 1) * H;
    for (int k = 0; k < H; ++k) gWy[k] += dpred * h_last[k];
    if (model.head_extra) gWy[H] += dpred * *head_extra;
    grad[lay.head_b()] += dpred;

    std::vector<double> dh(static_cast<std::size_t>(H), 0.0);
    std::vector<double> dc(static_cast<std::size_t>(H), 0.0);
    std::vector<double> da(static_cast<std::size_t>(4 * H), 0.0);
    for (int k = 0; k < H; ++k) dh[static_cast<std::size_t>(k)] = dpred * Wy[k];

    for (int t = steps - 1; t >= 0; --t) {
        const double* gi = cache.gates.data() + (static_cast<std::size_t>(t) * 4 + 0) * H;
        const double* gf = cache.gates.data() + (static_cast<std::size_t>(t) * 4 + 1) * H;
        const double* gg = cache.gates.data() + (static_cast<std::size_t>(t) * 4 + 2) * H;
        const double* go = cache.gates.data() + (static_cast<std::size_t>(t) * 4 + 3) * H;
        const double* tc = cache.tc.data() + static_cast<std::size_t>(t) * H;
        const double* c_prev =
            t > 0 ? cache.c.data() + static_cast<std::size_t>(t - 1) * H : nullptr;
        const double* h_prev =
            t > 0 ? cache.h.data() + static_cast<std::size_t>(t - 1) * H : nullptr;
        const double* x = input.data.data() + static_cast<std::size_t>(t) * I;

        for (int k = 0; k < H; ++k) {
            const double dck = dc[static_cast<std::size_t>(k)] +
                               dh[static_cast<std::size_t>(k)] * go[k] * (1.0 - tc[k] * tc[k]);
            const double dok = dh[static_cast<std::size_t>(k)] * tc[k];
            const double dik = dck * gg[k];
            const double dgk = dck * gi[k];
            const double dfk = dck * (t > 0 ? c_prev[k] : 0.0);
            da[static_cast<std::size_t>(k)] = dik * gi[k] * (1.0 - gi[k]);
            da[static_cast<std::size_t>(H + k)] = dfk * gf[k] * (1.0 - gf[k]);
            da[static_cast<std::size_t>(2 * H + k)] = dgk * (1.0 - gg[k] * gg[k]);
            da[static_cast<std::size_t>(3 * H + k)] = dok * go[k] * (1.0 - go[k]);
            dc[static_cast<std::size_t>(k)] = dck * gf[k];
        }
        for (int l = 0; l < 4 * H; ++l) {
            const double dal = da[static_cast<std::size_t>(l)];
            if (dal == 0.0) continue;
            double* wrow = gW + static_cast<std::size_t>(l) * I;
            for (int i = 0; i < I; ++i) wrow[i] += dal * x[i];
            if (t > 0) {
                double* urow = gU + static_cast<std::size_t>(l) * H;
                for (int k = 0; k < H; ++k) urow[k] += dal * h_prev[k];
            }
            gB[l] += dal;
        }
        std::fill(dh.begin(), dh.end(), 0.0);
        if (t > 0) {
            for (int l = 0; l < 4 * H; ++l) {
                const double dal = da[static_cast<std::size_t>(l)];
                if (dal == 0.0) continue;
                const double* urow = U + static_cast<std::size_t>(l) * H;
                for (int k = 0; k < H; ++k) dh[static_cast<std::size_t>(k)] += dal * urow[k];
            }
        }
    }
}

std::optional<double> sample_head_extra(const WindowDataset& data, std::size_t i,
                                        bool head_extra) {
    if (!head_extra) return std::nullopt;
    return data.head_extra[i];
}

void check_dataset(const RnnModel& model, const WindowDataset& data) {
    if (data.inputs.size() != data.targets.size()) {
        throw AlignmentError("lstm: dataset inputs/targets differ in count");
    }
    if (model.head_extra && data.head_extra.size() != data.inputs.size()) {
        throw AlignmentError("lstm: dataset lacks head-concat values");
    }
}

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    int step = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void update(std::vector<double>& params, const std::vector<double>& grad, double lr) {
        ++step;
        const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        const double c1 = 1.0 - std::pow(b1, step);
        const double c2 = 1.0 - std::pow(b2, step);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
            v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
            params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
};

/// Shared training loop (fresh Adam state per call; continue_train reuses
/// the incoming parameters as its warm start).
RnnModel train_loop(RnnModel model, const WindowDataset& data, int epochs, int patience) {
    check_dataset(model, data);
    if (data.size() == 0) throw LengthError("lstm train: empty dataset");

    const std::size_t holdout = data.size() / 10;
    const std::size_t train_end = data.size() - holdout;

    AdamState adam(model.params.size());
    std::vector<double> best_params = model.params;
    double best_val = std::numeric_limits<double>::infinity();
    int stale = 0;

    auto validation = [&](const RnnModel& m, double train_loss) {
        return holdout > 0 ? dataset_loss(m, data, train_end, data.size()) : train_loss;
    };

    for (int epoch = 0; epoch < epochs; ++epoch) {
        LossGrad lg = loss_and_gradient(model, data, 0, train_end);
        if (!std::isfinite(lg.loss)) {
            throw DivergenceError("lstm train: non-finite loss; lower the learning rate");
        }
        model.loss_trace.push_back(lg.loss);
        const double val = validation(model, lg.loss);
        if (val < best_val) {
            best_val = val;
            best_params = model.params;
            stale = 0;
        } else if (++stale >= patience) {
            break;
        }
        adam.update(model.params, lg.grad, model.spec.lr);
    }
    // the last update never got scored inside the loop
    const double final_val = holdout > 0 ? dataset_loss(model, data, train_end, data.size())
                                         : dataset_loss(model, data, 0, train_end);
    if (final_val >= best_val) model.params = std::move(best_params);
    return model;
}

}  // namespace

WindowDataset make_windows(std::span<const double> target,
                           const std::vector<std::vector<double>>& externals, int window,
                           ExternalInjection injection, bool append_next_external) {
    if (window < 1) throw ParameterError("make_windows: window must be >= 1");
    const std::size_t T = target.size();
    for (const auto& ext : externals) {
        if (ext.size() != T) {
            throw AlignmentError("make_windows: external series length differs from target");
        }
    }
    if (T < static_cast<std::size_t>(window) + 1) {
        throw LengthError("make_windows: series of length " + std::to_string(T) +
                          " yields no windows for window " + std::to_string(window));
    }
    if (append_next_external && externals.empty()) {
        throw ParameterError("make_windows: next-external append requires an external series");
    }
    if (append_next_external && injection == ExternalInjection::kHeadConcat &&
        externals.size() != 1) {
        throw ParameterError("make_windows: head-concat wiring supports exactly one external");
    }

    const int input_dim = 1 + static_cast<int>(externals.size());
    const bool extra_step = append_next_external && injection == ExternalInjection::kExtraStep;
    WindowDataset data;
    const std::size_t n = T - static_cast<std::size_t>(window);
    data.inputs.reserve(n);
    data.targets.reserve(n);
    for (std::size_t t = static_cast<std::size_t>(window) - 1; t + 1 < T; ++t) {
        Matrix input(window + (extra_step ? 1 : 0), input_dim);
        for (int s = 0; s < window; ++s) {
            const std::size_t day = t + 1 - static_cast<std::size_t>(window) + s;
            input(s, 0) = target[day];
            for (std::size_t e = 0; e < externals.size(); ++e) {
                input(s, static_cast<int>(e) + 1) = externals[e][day];
            }
        }
        if (extra_step) {
            // target column zero-masked: the true next value is unknown at
            // prediction time
            input(window, 0) = 0.0;
            for (std::size_t e = 0; e < externals.size(); ++e) {
                input(window, static_cast<int>(e) + 1) = externals[e][t + 1];
            }
        }
        data.inputs.push_back(std::move(input));
        data.targets.push_back(target[t + 1]);
        if (append_next_external && injection == ExternalInjection::kHeadConcat) {
            data.head_extra.push_back(externals[0][t + 1]);
        }
    }
    return data;
}

std::size_t RnnModel::param_count() const { return layout_of(*this).total(); }

RnnModel init_model(const RnnSpec& spec, bool head_extra) {
    if (spec.input_dim < 1 || spec.hidden < 1 || spec.window < 1) {
        throw ParameterError("lstm: input_dim, hidden and window must be >= 1");
    }
    if (!(spec.lr > 0.0)) throw ParameterError("lstm: learning rate must be > 0");
    RnnModel model;
    model.spec = spec;
    model.head_extra = head_extra;
    const Layout lay = layout_of(model);
    model.params.assign(lay.total(), 0.0);

    Rng rng(derive_stream(spec.seed, 0, 0, kInitTag));
    const double win_scale = 1.0 / std::sqrt(static_cast<double>(spec.input_dim + spec.hidden));
    for (std::size_t i = lay.w(); i < lay.b(); ++i) {
        model.params[i] = rng.uniform(-win_scale, win_scale);
    }
    const double head_scale = 1.0 / std::sqrt(static_cast<double>(lay.head_dim()));
    for (std::size_t i = lay.head_w(); i < lay.head_b(); ++i) {
        model.params[i] = rng.uniform(-head_scale, head_scale);
    }
    return model;
}

double lstm_forward(const RnnModel& model, const Matrix& input,
                    std::optional<double> head_extra) {
    check_input(model, input, head_extra);
    return forward_pass(model, input, head_extra, nullptr);
}

LossGrad loss_and_gradient(const RnnModel& model, const WindowDataset& data,
                           std::size_t begin, std::size_t end) {
    check_dataset(model, data);
    end = std::min(end, data.size());
    if (begin >= end) throw LengthError("lstm: empty gradient batch");

    LossGrad out;
    out.grad.assign(model.params.size(), 0.0);
    ForwardCache cache;
    const double scale = 2.0 / static_cast<double>(end - begin);
    for (std::size_t s = begin; s < end; ++s) {
        const auto extra = sample_head_extra(data, s, model.head_extra);
        check_input(model, data.inputs[s], extra);
        const double pred = forward_pass(model, data.inputs[s], extra, &cache);
        const double err = pred - data.targets[s];
        out.loss += err * err;
        backward_pass(model, data.inputs[s], extra, cache, scale * err, out.grad);
    }
    out.loss /= static_cast<double>(end - begin);
    return out;
}

double dataset_loss(const RnnModel& model, const WindowDataset& data, std::size_t begin,
                    std::size_t end) {
    check_dataset(model, data);
    end = std::min(end, data.size());
    if (begin >= end) throw LengthError("lstm: empty evaluation batch");
    double loss = 0.0;
    for (std::size_t s = begin; s < end; ++s) {
        const auto extra = sample_head_extra(data, s, model.head_extra);
        check_input(model, data.inputs[s], extra);
        const double err = forward_pass(model, data.inputs[s], extra, nullptr) - data.targets[s];
        loss += err * err;
    }
    return loss / static_cast<double>(end - begin);
}

RnnModel train(const RnnSpec& spec, const WindowDataset& data) {
    RnnModel model = init_model(spec, !data.head_extra.empty());
    return train_loop(std::move(model), data, spec.epochs, spec.patience);
}

RnnModel continue_train(RnnModel model, const WindowDataset& data, int epochs, int patience) {
    return train_loop(std::move(model), data, epochs, patience);
}

double predict_next(const RnnModel& model, std::span<const double> recent_target,
                    const std::vector<std::vector<double>>& recent_externals,
                    std::optional<double> next_external) {
    const int window = model.spec.window;
    if (static_cast<int>(recent_target.size()) != window) {
        throw ShapeError("predict_next: need exactly window recent target values");
    }
    if (static_cast<int>(recent_externals.size()) + 1 != model.spec.input_dim) {
        throw ShapeError("predict_next: external series count does not match input_dim");
    }
    for (const auto& ext : recent_externals) {
        if (static_cast<int>(ext.size()) != window) {
            throw ShapeError("predict_next: external history must cover the window");
        }
    }
    const bool extra_step = next_external.has_value() &&
                            model.spec.injection == ExternalInjection::kExtraStep;
    if (next_external.has_value() && recent_externals.size() != 1) {
        throw ShapeError("predict_next: next-external value requires exactly one external");
    }

    Matrix input(window + (extra_step ? 1 : 0), model.spec.input_dim);
    for (int s = 0; s < window; ++s) {
        input(s, 0) = recent_target[static_cast<std::size_t>(s)];
        for (std::size_t e = 0; e < recent_externals.size(); ++e) {
            input(s, static_cast<int>(e) + 1) = recent_externals[e][static_cast<std::size_t>(s)];
        }
    }
    std::optional<double> head_value;
    if (extra_step) {
        input(window, 0) = 0.0;
        for (std::size_t e = 0; e < recent_externals.size(); ++e) {
            input(window, static_cast<int>(e) + 1) = *next_external;
        }
    } else if (next_external.has_value()) {
        head_value = next_external;
    }
    return lstm_forward(model, input, head_value);
}

std::string to_json(const RnnModel& model) {
    const Layout lay = layout_of(model);
    nlohmann::json doc;
    doc["spec"] = {{"input_dim", model.spec.input_dim},
                   {"hidden", model.spec.hidden},
                   {"window", model.spec.window},
                   {"epochs", model.spec.epochs},
                   {"lr", model.spec.lr},
                   {"seed", model.spec.seed},
                   {"patience", model.spec.patience},
                   {"injection", model.spec.injection == ExternalInjection::kExtraStep
                                     ? "extra_step"
                                     : "head_concat"}};
    doc["head_extra"] = model.head_extra;
    doc["shapes"] = {{"gate_w", {4 * model.spec.hidden, model.spec.input_dim}},
                     {"gate_u", {4 * model.spec.hidden, model.spec.hidden}},
                     {"gate_b", {4 * model.spec.hidden}},
                     {"head_w", {static_cast<int>(lay.head_dim())}},
                     {"head_b", {1}}};
    doc["params"] = model.params;
    doc["loss_trace"] = model.loss_trace;
    return doc.dump(2);
}

RnnModel model_from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("rnn model JSON: ") + e.what(), 0);
    }
    RnnModel model;
    try {
        const auto& spec = doc.at("spec");
        model.spec.input_dim = spec.at("input_dim").get<int>();
        model.spec.hidden = spec.at("hidden").get<int>();
        model.spec.window = spec.at("window").get<int>();
        model.spec.epochs = spec.at("epochs").get<int>();
        model.spec.lr = spec.at("lr").get<double>();
        model.spec.seed = spec.at("seed").get<std::uint64_t>();
        model.spec.patience = spec.at("patience").get<int>();
        model.spec.injection = spec.at("injection").get<std::string>() == "head_concat"
                                   ? ExternalInjection::kHeadConcat
                                   : ExternalInjection::kExtraStep;
        model.head_extra = doc.at("head_extra").get<bool>();
        model.params = doc.at("params").get<std::vector<double>>();
        model.loss_trace = doc.at("loss_trace").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("rnn model JSON: ") + e.what());
    }
    if (model.params.size() != model.param_count()) {
        throw ValidationError("rnn model JSON: parameter count does not match shapes");
    }
    return model;
}

}  // namespace filtercast::rnn
