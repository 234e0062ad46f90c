#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reachmlp/activation.hpp"

namespace reachmlp {

using Vec = std::vector<double>;

/// One fully connected layer: y = f(W x + b).
/// Weights are row-major, one row per output neuron.
struct LayerParams {
    std::size_t rows = 0;  ///< output size n^[l]
    std::size_t cols = 0;  ///< input size n^[l-1]
    std::vector<double> weights;  ///< rows * cols, row-major
    std::vector<double> biases;   ///< rows
    Activation activation;

    std::span<const double> row(std::size_t i) const {
        return {weights.data() + i * cols, cols};
    }
};

namespace detail {

inline bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

inline void validate_layer(const LayerParams& layer, std::size_t index) {
    const std::string where = "layer " + std::to_string(index);
    if (layer.rows == 0 || layer.cols == 0) {
        throw std::invalid_argument(where + ": empty weight matrix");
    }
    if (layer.weights.size() != layer.rows * layer.cols) {
        throw std::invalid_argument(where + ": weight storage is " +
                                    std::to_string(layer.weights.size()) + " entries, expected " +
                                    std::to_string(layer.rows) + "x" + std::to_string(layer.cols));
    }
    if (layer.biases.size() != layer.rows) {
        throw std::invalid_argument(where + ": bias length " + std::to_string(layer.biases.size()) +
                                    " does not match row count " + std::to_string(layer.rows));
    }
    if (!all_finite(layer.weights) || !all_finite(layer.biases)) {
        throw std::invalid_argument(where + ": non-finite parameter entry");
    }
    if (layer.activation.kind == ActivationKind::elu && !(layer.activation.alpha > 0.0)) {
        throw std::invalid_argument(where + ": elu alpha must be > 0");
    }
}

}  // namespace detail

/// A multi-layer perceptron y = f_L(W_L ... f_1(W_1 x + b_1) ... + b_L).
/// Immutable after construction; evaluation is pure and thread-safe.
class Mlp {
public:
    explicit Mlp(std::vector<LayerParams> layers) : layers_(std::move(layers)) {
        if (layers_.empty()) {
            throw std::invalid_argument("network needs at least one layer");
        }
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            detail::validate_layer(layers_[l], l);
            if (l > 0 && layers_[l].cols != layers_[l - 1].rows) {
                throw std::invalid_argument(
                    "layer " + std::to_string(l) + " expects " + std::to_string(layers_[l].cols) +
                    " inputs but layer " + std::to_string(l - 1) + " produces " +
                    std::to_string(layers_[l - 1].rows));
            }
        }
    }

    const std::vector<LayerParams>& layers() const { return layers_; }
    std::size_t input_dim() const { return layers_.front().cols; }
    std::size_t output_dim() const { return layers_.back().rows; }

private:
    std::vector<LayerParams> layers_;
};

namespace detail {

inline void check_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": got length " + std::to_string(got) +
                                    ", expected " + std::to_string(want));
    }
}

}  // namespace detail

/// Affine part of a layer: W x + b, no activation.
inline Vec preactivations(const LayerParams& layer, std::span<const double> x) {
    detail::check_length(x.size(), layer.cols, "layer input");
    Vec out(layer.rows);
    for (std::size_t i = 0; i < layer.rows; ++i) {
        const double* w = layer.weights.data() + i * layer.cols;
        double acc = layer.biases[i];
        for (std::size_t j = 0; j < layer.cols; ++j) acc += w[j] * x[j];
        out[i] = acc;
    }
    return out;
}

/// One layer forward: f(W x + b).
inline Vec layer_eval(const LayerParams& layer, std::span<const double> x) {
    Vec out = preactivations(layer, x);
    for (double& v : out) v = activate(layer.activation, v);
    return out;
}

/// Full network forward pass.
inline Vec forward(const Mlp& net, std::span<const double> x) {
    detail::check_length(x.size(), net.input_dim(), "network input");
    Vec cur(x.begin(), x.end());
    for (const LayerParams& layer : net.layers()) {
        cur = layer_eval(layer, cur);
    }
    return cur;
}

}  // namespace reachmlp
