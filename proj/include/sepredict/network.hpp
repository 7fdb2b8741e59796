#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sepredict/encoder.hpp"

namespace sep {

/// Row-major dense matrix, just enough for the network math.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(size_t i, size_t j) { return data[i * cols + j]; }
    double operator()(size_t i, size_t j) const { return data[i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

/// Five layers: 2 inputs, three hidden layers totalling more than 60 units,
/// 2 outputs.
struct NetworkShape {
    std::vector<int> layer_sizes{2, 24, 24, 16, 2};

    bool operator==(const NetworkShape&) const = default;
};

/// Throws Error{invalid_shape} unless the topology constraints hold.
void validate_shape(const NetworkShape& shape);

struct NetworkModel {
    NetworkShape shape;
    std::vector<Matrix> weights;              // weights[k]: size(k+1) x size(k)
    std::vector<std::vector<double>> biases;  // biases[k]: size(k+1)
    InputScaler scaler;
    uint64_t seed = 0;

    bool operator==(const NetworkModel&) const = default;
};

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 500;
    int batch_size = 16;
    uint64_t seed = 0;
    double l2 = 0.0;
};

struct Prediction {
    std::array<double, 2> probabilities{0.5, 0.5};
    Label predicted = Label::Unsafe;  // argmax; an exact tie resolves to Unsafe
};

/// One training point: scaled input and one-hot target.
struct LabeledInput {
    std::array<double, 2> input{0.0, 0.0};
    std::array<double, 2> target{1.0, 0.0};
};

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

/// Glorot-uniform weights, zero biases; fully determined by seed.
NetworkModel init(const NetworkShape& shape, uint64_t seed);

/// ReLU hidden activations, softmax output (computed with max subtraction).
Prediction forward(const NetworkModel& model, const std::array<double, 2>& scaled_input);

/// Applies the model's scaler to raw IFs, then runs forward.
Prediction predict(const NetworkModel& model, const IfVector& input);

/// Mean categorical cross-entropy with the log argument clamped below at
/// 1e-12, plus l2/2 * |weights|^2 when l2 > 0.
double loss(const NetworkModel& model, const std::vector<LabeledInput>& batch, double l2 = 0.0);

/// Analytic gradient of `loss` for every weight and bias.
Gradients backward(const NetworkModel& model, const std::vector<LabeledInput>& batch, double l2 = 0.0);

/// Mini-batch gradient descent with per-epoch seeded shuffling. Fits the
/// input scaler on this split. Bitwise deterministic for a fixed
/// (data order, config). A split missing one class warns, not fails.
NetworkModel train(const std::vector<EncodedSample>& split, const TrainConfig& config,
                   const NetworkShape& shape, std::vector<std::string>* warnings = nullptr);

// Model persistence. Numbers are written with up to 17 significant digits so
// that load followed by save reproduces the file byte for byte.
std::string model_json(const NetworkModel& model);
NetworkModel model_from_json(const std::string& text, const std::string& source = "<string>");
void save_model(const NetworkModel& model, const std::string& path);
NetworkModel load_model(const std::string& path);

}  // namespace sep
