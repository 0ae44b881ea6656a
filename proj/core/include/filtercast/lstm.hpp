#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace filtercast::rnn {

/// Row-major dense matrix, just large enough for window inputs.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const {
        return data[static_cast<std::size_t>(r) * cols + c];
    }
};

/// Where the external one-step forecast x_hat enters the network:
/// as an appended time step (default) or concatenated onto the output head.
enum class ExternalInjection { kExtraStep, kHeadConcat };

struct RnnSpec {
    int input_dim = 1;   // 1 target column + one column per external series
    int hidden = 32;
    int window = 7;
    int epochs = 200;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    int patience = 20;   // early-stopping patience on the held-out tail
    ExternalInjection injection = ExternalInjection::kExtraStep;
};

/// Supervised sliding windows: inputs[i] is a (window [+1]) x input_dim
/// matrix, targets[i] the next-day normalized value. head_extra carries the
/// per-sample x_hat under the kHeadConcat wiring.
struct WindowDataset {
    std::vector<Matrix> inputs;
    std::vector<double> targets;
    std::vector<double> head_extra;

    std::size_t size() const { return inputs.size(); }
};

/// Builds windows over aligned normalized series. Input row t carries
/// [target, externals...] for one day. With append_next_external set, the
/// next day's external value is teacher-forced into each sample: under
/// kExtraStep as a final time step whose target column is zero-masked, under
/// kHeadConcat as the head_extra scalar.
WindowDataset make_windows(std::span<const double> target,
                           const std::vector<std::vector<double>>& externals, int window,
                           ExternalInjection injection = ExternalInjection::kExtraStep,
                           bool append_next_external = false);

/// Single-layer LSTM with a linear head. Parameters live in one flat vector:
/// gate weights W (4H x I, blocks input/forget/cell/output), recurrent
/// weights U (4H x H), gate biases (4H), head weights (H [+1]) and head bias.
struct RnnModel {
    RnnSpec spec;
    bool head_extra = false;
    std::vector<double> params;
    std::vector<double> loss_trace;  // training MSE per epoch

    std::size_t param_count() const;
};

/// Seeded uniform(-1,1)/sqrt(fan-in) weight init, zero biases.
RnnModel init_model(const RnnSpec& spec, bool head_extra = false);

/// Forward pass over one input window. Zero initial hidden/cell state;
/// prediction is the linear head over the final hidden state.
double lstm_forward(const RnnModel& model, const Matrix& input,
                    std::optional<double> head_extra = std::nullopt);

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad;  // same layout as RnnModel::params
};

/// Full-batch MSE and its analytic gradient via backpropagation through
/// time. Exposed so the finite-difference check can exercise it directly.
LossGrad loss_and_gradient(const RnnModel& model, const WindowDataset& data,
                           std::size_t begin = 0,
                           std::size_t end = static_cast<std::size_t>(-1));

/// Forward-only MSE over [begin, end).
double dataset_loss(const RnnModel& model, const WindowDataset& data, std::size_t begin = 0,
                    std::size_t end = static_cast<std::size_t>(-1));

/// Trains from the seeded init with full-batch adaptive-moment updates.
/// The last 10% of windows are held out for early stopping; the returned
/// model carries the best held-out parameters encountered.
RnnModel train(const RnnSpec& spec, const WindowDataset& data);

/// Continues training an existing model (weekly refits warm-start here).
RnnModel continue_train(RnnModel model, const WindowDataset& data, int epochs, int patience);

/// One normalized next-day prediction from the trailing window.
double predict_next(const RnnModel& model, std::span<const double> recent_target,
                    const std::vector<std::vector<double>>& recent_externals = {},
                    std::optional<double> next_external = std::nullopt);

std::string to_json(const RnnModel& model);
RnnModel model_from_json(const std::string& json_text);

}  // namespace filtercast::rnn
