// Five-layer feed-forward classifier: ReLU hidden layers, softmax output,
// cross-entropy loss, trained by plain mini-batch gradient descent. All
// randomness flows from the configured seed.

#include "sepredict/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "sepredict/io.hpp"
#include "sepredict/rng.hpp"

namespace sep {

namespace {

constexpr double kLogFloor = 1e-12;

void validate_config(const TrainConfig& config) {
    if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
        throw Error(Errc::invalid_argument, "learning rate must be positive and finite");
    }
    if (config.epochs < 0) {
        throw Error(Errc::invalid_argument, "epochs must be non-negative");
    }
    if (config.batch_size < 1) {
        throw Error(Errc::invalid_argument, "batch size must be at least 1");
    }
    if (config.l2 < 0.0 || !std::isfinite(config.l2)) {
        throw Error(Errc::invalid_argument, "l2 must be non-negative and finite");
    }
}

std::array<double, 2> softmax2(double z0, double z1) {
    const double m = std::max(z0, z1);
    const double e0 = std::exp(z0 - m);
    const double e1 = std::exp(z1 - m);
    const double sum = e0 + e1;
    return {e0 / sum, e1 / sum};
}

struct ForwardCache {
    std::vector<std::vector<double>> pre;  // pre[k] = z at layer k+1
    std::vector<std::vector<double>> act;  // act[k] = activation at layer k
    std::array<double, 2> probs{0.5, 0.5};
};

ForwardCache run_forward(const NetworkModel& model, const std::array<double, 2>& input) {
    if (!std::isfinite(input[0]) || !std::isfinite(input[1])) {
        throw Error(Errc::non_finite_input, "network input must be finite");
    }
    const size_t layers = model.weights.size();  // 4 weight layers for 5 layers of units
    ForwardCache cache;
    cache.pre.resize(layers);
    cache.act.resize(layers + 1);
    cache.act[0] = {input[0], input[1]};
    for (size_t k = 0; k < layers; ++k) {
        const Matrix& w = model.weights[k];
        const std::vector<double>& b = model.biases[k];
        std::vector<double> z(w.rows, 0.0);
        for (size_t i = 0; i < w.rows; ++i) {
            double acc = b[i];
            for (size_t j = 0; j < w.cols; ++j) {
                acc += w(i, j) * cache.act[k][j];
            }
            z[i] = acc;
        }
        cache.pre[k] = z;
        if (k + 1 < layers) {
            for (double& v : z) {
                v = v > 0.0 ? v : 0.0;  // ReLU
            }
            cache.act[k + 1] = std::move(z);
        } else {
            cache.probs = softmax2(z[0], z[1]);
            cache.act[k + 1] = {cache.probs[0], cache.probs[1]};
        }
    }
    return cache;
}

double weight_norm_sq(const NetworkModel& model) {
    double sum = 0.0;
    for (const Matrix& w : model.weights) {
        for (double v : w.data) {
            sum += v * v;
        }
    }
    return sum;
}

}  // namespace

void validate_shape(const NetworkShape& shape) {
    const auto& sizes = shape.layer_sizes;
    if (sizes.size() != 5) {
        throw Error(Errc::invalid_shape,
                    "expected 5 layers, got " + std::to_string(sizes.size()));
    }
    for (int size : sizes) {
        if (size < 1) {
            throw Error(Errc::invalid_shape, "layer sizes must be positive");
        }
    }
    if (sizes.front() != 2) {
        throw Error(Errc::invalid_shape, "input layer must have 2 units, got " +
                                             std::to_string(sizes.front()));
    }
    if (sizes.back() != 2) {
        throw Error(Errc::invalid_shape, "output layer must have 2 units, got " +
                                             std::to_string(sizes.back()));
    }
    const int hidden = sizes[1] + sizes[2] + sizes[3];
    if (hidden <= 60) {
        throw Error(Errc::invalid_shape, "hidden layers must total more than 60 units, got " +
                                             std::to_string(hidden));
    }
}

NetworkModel init(const NetworkShape& shape, uint64_t seed) {
    validate_shape(shape);
    NetworkModel model;
    model.shape = shape;
    model.seed = seed;
    Rng rng(mix_seed(seed, 0));
    const auto& sizes = shape.layer_sizes;
    for (size_t k = 0; k + 1 < sizes.size(); ++k) {
        const auto fan_in = static_cast<size_t>(sizes[k]);
        const auto fan_out = static_cast<size_t>(sizes[k + 1]);
        const double scale = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Matrix w(fan_out, fan_in);
        for (double& v : w.data) {
            v = (rng.uniform() * 2.0 - 1.0) * scale;
        }
        model.weights.push_back(std::move(w));
        model.biases.emplace_back(fan_out, 0.0);
    }
    return model;
}

Prediction forward(const NetworkModel& model, const std::array<double, 2>& scaled_input) {
    const ForwardCache cache = run_forward(model, scaled_input);
    Prediction prediction;
    prediction.probabilities = cache.probs;
    prediction.predicted =
        cache.probs[0] > cache.probs[1] ? Label::Safe : Label::Unsafe;
    return prediction;
}

Prediction predict(const NetworkModel& model, const IfVector& input) {
    return forward(model, apply_scaler(model.scaler, input));
}

double loss(const NetworkModel& model, const std::vector<LabeledInput>& batch, double l2) {
    if (batch.empty()) {
        throw Error(Errc::empty_batch, "loss of an empty batch");
    }
    double total = 0.0;
    for (const auto& point : batch) {
        const ForwardCache cache = run_forward(model, point.input);
        for (size_t c = 0; c < 2; ++c) {
            if (point.target[c] != 0.0) {
                total -= point.target[c] * std::log(std::max(cache.probs[c], kLogFloor));
            }
        }
    }
    double value = total / static_cast<double>(batch.size());
    if (l2 > 0.0) {
        value += 0.5 * l2 * weight_norm_sq(model);
    }
    return value;
}

Gradients backward(const NetworkModel& model, const std::vector<LabeledInput>& batch, double l2) {
    if (batch.empty()) {
        throw Error(Errc::empty_batch, "gradient of an empty batch");
    }
    const size_t layers = model.weights.size();
    Gradients grads;
    for (size_t k = 0; k < layers; ++k) {
        grads.weights.emplace_back(model.weights[k].rows, model.weights[k].cols);
        grads.biases.emplace_back(model.biases[k].size(), 0.0);
    }
    for (const auto& point : batch) {
        const ForwardCache cache = run_forward(model, point.input);
        // softmax + cross-entropy collapses to p - t at the output
        std::vector<double> delta{cache.probs[0] - point.target[0],
                                  cache.probs[1] - point.target[1]};
        for (size_t k = layers; k-- > 0;) {
            Matrix& dw = grads.weights[k];
            std::vector<double>& db = grads.biases[k];
            const std::vector<double>& below = cache.act[k];
            for (size_t i = 0; i < dw.rows; ++i) {
                db[i] += delta[i];
                for (size_t j = 0; j < dw.cols; ++j) {
                    dw(i, j) += delta[i] * below[j];
                }
            }
            if (k == 0) {
                break;
            }
            const Matrix& w = model.weights[k];
            std::vector<double> next(w.cols, 0.0);
            for (size_t j = 0; j < w.cols; ++j) {
                double acc = 0.0;
                for (size_t i = 0; i < w.rows; ++i) {
                    acc += w(i, j) * delta[i];
                }
                next[j] = cache.pre[k - 1][j] > 0.0 ? acc : 0.0;  // ReLU mask
            }
            delta = std::move(next);
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (size_t k = 0; k < layers; ++k) {
        for (double& v : grads.weights[k].data) {
            v *= inv;
        }
        for (double& v : grads.biases[k]) {
            v *= inv;
        }
        if (l2 > 0.0) {
            for (size_t i = 0; i < grads.weights[k].data.size(); ++i) {
                grads.weights[k].data[i] += l2 * model.weights[k].data[i];
            }
        }
    }
    return grads;
}

NetworkModel train(const std::vector<EncodedSample>& split, const TrainConfig& config,
                   const NetworkShape& shape, std::vector<std::string>* warnings) {
    if (split.empty()) {
        throw Error(Errc::empty_split, "cannot train on an empty split");
    }
    validate_config(config);

    std::vector<IfVector> raw;
    raw.reserve(split.size());
    size_t safe_count = 0;
    for (const auto& sample : split) {
        raw.push_back(sample.input);
        if (sample.label() == Label::Safe) {
            ++safe_count;
        }
    }
    const InputScaler scaler = fit_scaler(raw);

    if (safe_count == 0 || safe_count == split.size()) {
        const std::string message =
            std::string("training split contains no ") +
            (safe_count == 0 ? "safe" : "unsafe") + " samples";
        if (warnings) {
            warnings->push_back(message);
        } else {
            std::fprintf(stderr, "warning: %s\n", message.c_str());
        }
    }

    std::vector<LabeledInput> data;
    data.reserve(split.size());
    for (const auto& sample : split) {
        data.push_back({apply_scaler(scaler, sample.input), sample.target});
    }

    NetworkModel model = init(shape, config.seed);
    model.scaler = scaler;

    Rng shuffle_rng(mix_seed(config.seed, 1));
    std::vector<size_t> order(data.size());
    std::iota(order.begin(), order.end(), size_t{0});
    const auto batch_size = static_cast<size_t>(config.batch_size);

    std::vector<LabeledInput> chunk;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (size_t start = 0; start < order.size(); start += batch_size) {
            const size_t end = std::min(start + batch_size, order.size());
            chunk.clear();
            for (size_t i = start; i < end; ++i) {
                chunk.push_back(data[order[i]]);
            }
            const Gradients grads = backward(model, chunk, config.l2);
            for (size_t k = 0; k < model.weights.size(); ++k) {
                for (size_t i = 0; i < model.weights[k].data.size(); ++i) {
                    model.weights[k].data[i] -= config.learning_rate * grads.weights[k].data[i];
                }
                for (size_t i = 0; i < model.biases[k].size(); ++i) {
                    model.biases[k][i] -= config.learning_rate * grads.biases[k][i];
                }
            }
        }
    }
    return model;
}

std::string model_json(const NetworkModel& model) {
    std::string out = "{\n  \"format\": \"sepredict-model/1\",\n  \"layer_sizes\": [";
    for (size_t i = 0; i < model.shape.layer_sizes.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += std::to_string(model.shape.layer_sizes[i]);
    }
    out += "],\n  \"seed\": " + std::to_string(model.seed) + ",\n";
    out += "  \"scaler\": { \"hot_max\": " + g17(model.scaler.hot_max) +
           ", \"cold_max\": " + g17(model.scaler.cold_max) + " },\n";
    auto write_arrays = [&out](const char* key, auto get_values, size_t count) {
        out += std::string("  \"") + key + "\": [\n";
        for (size_t k = 0; k < count; ++k) {
            out += "    [";
            const std::vector<double>& values = get_values(k);
            for (size_t i = 0; i < values.size(); ++i) {
                if (i > 0) {
                    out += ", ";
                }
                out += g17(values[i]);
            }
            out += k + 1 < count ? "],\n" : "]\n";
        }
        out += "  ]";
    };
    write_arrays(
        "weights",
        [&model](size_t k) -> const std::vector<double>& { return model.weights[k].data; },
        model.weights.size());
    out += ",\n";
    write_arrays(
        "biases", [&model](size_t k) -> const std::vector<double>& { return model.biases[k]; },
        model.biases.size());
    out += "\n}\n";
    return out;
}

NetworkModel model_from_json(const std::string& text, const std::string& source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::bad_model_file, std::string("not valid JSON: ") + e.what(), source, 0);
    }
    try {
        if (doc.at("format").get<std::string>() != "sepredict-model/1") {
            throw Error(Errc::bad_model_file, "unsupported model format", source, 0);
        }
        NetworkModel model;
        model.shape.layer_sizes = doc.at("layer_sizes").get<std::vector<int>>();
        try {
            validate_shape(model.shape);
        } catch (const Error& e) {
            throw Error(Errc::bad_model_file, e.what(), source, 0);
        }
        model.seed = doc.at("seed").get<uint64_t>();
        model.scaler.hot_max = doc.at("scaler").at("hot_max").get<double>();
        model.scaler.cold_max = doc.at("scaler").at("cold_max").get<double>();
        if (!(model.scaler.hot_max > 0.0) || !(model.scaler.cold_max > 0.0)) {
            throw Error(Errc::bad_model_file, "scaler maxima must be positive", source, 0);
        }
        const auto& weights = doc.at("weights");
        const auto& biases = doc.at("biases");
        const auto& sizes = model.shape.layer_sizes;
        if (weights.size() != sizes.size() - 1 || biases.size() != sizes.size() - 1) {
            throw Error(Errc::bad_model_file, "wrong number of parameter arrays", source, 0);
        }
        for (size_t k = 0; k + 1 < sizes.size(); ++k) {
            const auto rows = static_cast<size_t>(sizes[k + 1]);
            const auto cols = static_cast<size_t>(sizes[k]);
            Matrix w(rows, cols);
            w.data = weights.at(k).get<std::vector<double>>();
            if (w.data.size() != rows * cols) {
                throw Error(Errc::bad_model_file, "weight array " + std::to_string(k) +
                                                      " has wrong length", source, 0);
            }
            std::vector<double> b = biases.at(k).get<std::vector<double>>();
            if (b.size() != rows) {
                throw Error(Errc::bad_model_file, "bias array " + std::to_string(k) +
                                                      " has wrong length", source, 0);
            }
            for (double v : w.data) {
                if (!std::isfinite(v)) {
                    throw Error(Errc::bad_model_file, "non-finite weight", source, 0);
                }
            }
            for (double v : b) {
                if (!std::isfinite(v)) {
                    throw Error(Errc::bad_model_file, "non-finite bias", source, 0);
                }
            }
            model.weights.push_back(std::move(w));
            model.biases.push_back(std::move(b));
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::bad_model_file, std::string("bad model document: ") + e.what(), source,
                    0);
    }
}

void save_model(const NetworkModel& model, const std::string& path) {
    write_file(path, model_json(model));
}

NetworkModel load_model(const std::string& path) {
    return model_from_json(read_file(path), path);
}

}  // namespace sep
