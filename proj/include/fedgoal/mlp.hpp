#pragma once

#include "fedgoal/errors.hpp"
#include "fedgoal/time_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace fedgoal {

struct MlpHyperparams {
    std::size_t lag_count = 24;
    std::size_t hidden_units = 8;
    double sigmoid_steepness = 1.0; // `a` in G(z) = 1/(1+exp(-a z))
    double learning_rate = 0.01;
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
};

/// z-score parameters of the training targets; applied to inputs and
/// targets alike since both live on the series' scale.
struct Scaler {
    double mean = 0.0;
    double std = 1.0;
};

/// One-hidden-layer perceptron with sigmoid units and identity output.
struct MlpParams {
    std::vector<std::vector<double>> input_weights; // hidden x lags
    std::vector<double> input_biases;               // hidden
    std::vector<double> output_weights;             // hidden
    double output_bias = 0.0;
    double sigmoid_steepness = 1.0;
    Scaler scaler;

    std::size_t lag_count() const {
        return input_weights.empty() ? 0 : input_weights.front().size();
    }
    std::size_t hidden_units() const { return input_weights.size(); }
};

/// Gradient of the batch MSE, same layout as the trainable weights.
struct MlpGradient {
    std::vector<std::vector<double>> input_weights;
    std::vector<double> input_biases;
    std::vector<double> output_weights;
    double output_bias = 0.0;
};

namespace detail {

inline double sigmoid(double steepness, double z) { return 1.0 / (1.0 + std::exp(-steepness * z)); }

/// Forward pass in normalized space; optionally captures hidden activations.
inline double forward_normalized(const MlpParams &p, std::span<const double> x_norm,
                                 std::vector<double> *hidden_out = nullptr) {
    double out = p.output_bias;
    if (hidden_out) hidden_out->resize(p.hidden_units());
    for (std::size_t j = 0; j < p.hidden_units(); ++j) {
        double z = p.input_biases[j];
        const auto &w = p.input_weights[j];
        for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x_norm[i];
        const double h = sigmoid(p.sigmoid_steepness, z);
        if (hidden_out) (*hidden_out)[j] = h;
        out += p.output_weights[j] * h;
    }
    return out;
}

} // namespace detail

/// Evaluates the network on an original-scale lag window; scaling and
/// de-scaling happen internally.
inline double forward(const MlpParams &params, std::span<const double> x) {
    if (x.size() != params.lag_count())
        throw DimensionMismatch("lag window length does not match network input size");
    std::vector<double> x_norm(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw NonFiniteInput("non-finite lag value");
        x_norm[i] = (x[i] - params.scaler.mean) / params.scaler.std;
    }
    const double y_norm = detail::forward_normalized(params, x_norm);
    return params.scaler.mean + params.scaler.std * y_norm;
}

/// Backpropagated gradient of the mean squared error over the batch,
/// computed in normalized space.
inline MlpGradient gradient(const MlpParams &params, const SupervisedSet &batch) {
    if (batch.size() == 0) throw EmptyInput("empty batch");
    if (batch.lag_count != params.lag_count())
        throw DimensionMismatch("batch lag count does not match network");

    const std::size_t d = params.hidden_units();
    const std::size_t p = params.lag_count();
    MlpGradient g;
    g.input_weights.assign(d, std::vector<double>(p, 0.0));
    g.input_biases.assign(d, 0.0);
    g.output_weights.assign(d, 0.0);

    const double inv_n = 1.0 / static_cast<double>(batch.size());
    std::vector<double> x_norm(p), hidden;
    for (std::size_t s = 0; s < batch.size(); ++s) {
        for (std::size_t i = 0; i < p; ++i)
            x_norm[i] = (batch.inputs[s][i] - params.scaler.mean) / params.scaler.std;
        const double t_norm = (batch.targets[s] - params.scaler.mean) / params.scaler.std;
        const double y = detail::forward_normalized(params, x_norm, &hidden);
        const double e = 2.0 * (y - t_norm) * inv_n; // d(MSE)/dy
        g.output_bias += e;
        for (std::size_t j = 0; j < d; ++j) {
            g.output_weights[j] += e * hidden[j];
            const double dz = e * params.output_weights[j] * params.sigmoid_steepness *
                              hidden[j] * (1.0 - hidden[j]);
            g.input_biases[j] += dz;
            for (std::size_t i = 0; i < p; ++i) g.input_weights[j][i] += dz * x_norm[i];
        }
    }
    return g;
}

namespace detail {

inline double training_mse(const MlpParams &params, const SupervisedSet &data) {
    double sum = 0.0;
    std::vector<double> x_norm(params.lag_count());
    for (std::size_t s = 0; s < data.size(); ++s) {
        for (std::size_t i = 0; i < x_norm.size(); ++i)
            x_norm[i] = (data.inputs[s][i] - params.scaler.mean) / params.scaler.std;
        const double y = params.scaler.mean + params.scaler.std * forward_normalized(params, x_norm);
        const double e = y - data.targets[s];
        sum += e * e;
    }
    return sum / static_cast<double>(data.size());
}

} // namespace detail

/// Mini-batch gradient descent from a seeded uniform [-0.5, 0.5] init.
/// Returns the epoch snapshot with the lowest full-set MSE, so the result
/// never degrades below the initial parameters.
inline MlpParams train(const SupervisedSet &data, const MlpHyperparams &hp) {
    if (hp.hidden_units < 1 || hp.lag_count < 1 || hp.sigmoid_steepness <= 0 ||
        hp.learning_rate <= 0 || hp.epochs < 1 || hp.batch_size < 1)
        throw InvalidConfig("bad hyperparameters");
    if (data.lag_count != hp.lag_count)
        throw DimensionMismatch("data lag count does not match hyperparams");
    if (data.size() < hp.batch_size)
        throw InsufficientData("fewer samples than batch_size");

    std::mt19937_64 rng(hp.seed);
    std::uniform_real_distribution<double> init(-0.5, 0.5);

    MlpParams params;
    params.sigmoid_steepness = hp.sigmoid_steepness;
    params.input_weights.assign(hp.hidden_units, std::vector<double>(hp.lag_count));
    params.input_biases.resize(hp.hidden_units);
    params.output_weights.resize(hp.hidden_units);
    for (auto &row : params.input_weights)
        for (auto &w : row) w = init(rng);
    for (auto &b : params.input_biases) b = init(rng);
    for (auto &w : params.output_weights) w = init(rng);
    params.output_bias = init(rng);

    const double mean = std::accumulate(data.targets.begin(), data.targets.end(), 0.0) /
                        static_cast<double>(data.size());
    double var = 0.0;
    for (double t : data.targets) var += (t - mean) * (t - mean);
    var /= static_cast<double>(data.size());
    params.scaler.mean = mean;
    params.scaler.std = std::max(std::sqrt(var), 1e-8); // guard for constant targets

    MlpParams best = params;
    double best_mse = detail::training_mse(params, data);

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    SupervisedSet batch;
    batch.lag_count = data.lag_count;

    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start + hp.batch_size <= data.size();
             start += hp.batch_size) {
            batch.inputs.clear();
            batch.targets.clear();
            for (std::size_t s = start; s < start + hp.batch_size; ++s) {
                batch.inputs.push_back(data.inputs[order[s]]);
                batch.targets.push_back(data.targets[order[s]]);
            }
            const MlpGradient g = gradient(params, batch);
            const double eta = hp.learning_rate;
            for (std::size_t j = 0; j < hp.hidden_units; ++j) {
                for (std::size_t i = 0; i < hp.lag_count; ++i)
                    params.input_weights[j][i] -= eta * g.input_weights[j][i];
                params.input_biases[j] -= eta * g.input_biases[j];
                params.output_weights[j] -= eta * g.output_weights[j];
            }
            params.output_bias -= eta * g.output_bias;
        }
        const double mse = detail::training_mse(params, data);
        if (!std::isfinite(mse)) throw DivergedTraining("non-finite loss during training");
        if (mse < best_mse) {
            best_mse = mse;
            best = params;
        }
    }
    return best;
}

/// Iterated one-step forecast: each prediction is appended to the lag
/// window and the oldest value dropped.
inline std::vector<double> predict_recursive(const MlpParams &params,
                                             std::span<const double> history,
                                             std::size_t horizon) {
    if (history.size() != params.lag_count())
        throw DimensionMismatch("history length must equal the lag count");
    if (horizon < 1) throw InvalidConfig("horizon must be >= 1");
    std::vector<double> window(history.begin(), history.end());
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const double y = forward(params, window);
        out.push_back(y);
        window.erase(window.begin());
        window.push_back(y);
    }
    return out;
}

} // namespace fedgoal
