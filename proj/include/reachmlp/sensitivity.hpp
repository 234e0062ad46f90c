#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "reachmlp/network.hpp"

namespace reachmlp {

/// Pre-activation range of one neuron over the input ball ||dx||_inf <= delta.
struct NeuronPreactBounds {
    double beta_min = 0.0;
    double beta_nominal = 0.0;
    double beta_max = 0.0;
};

/// Per-layer record of the sensitivity chain.
struct LayerTraceEntry {
    Vec input;             ///< nominal input entering the layer
    double in_radius = 0;  ///< radius entering the layer
    double epsilon = 0;    ///< layer sensitivity at (input, in_radius)
};

/// Maximum-sensitivity bound of the whole network plus the chain that
/// produced it. `epsilon` always equals the last trace entry's epsilon.
struct SensitivityResult {
    double epsilon = 0.0;
    std::vector<LayerTraceEntry> layer_trace;
};

namespace detail {

inline void check_delta(double delta) {
    if (!(delta >= 0.0)) {
        throw std::invalid_argument("delta must be >= 0, got " + std::to_string(delta));
    }
}

}  // namespace detail

/// Extreme pre-activations of each neuron over the ball ||dx||_inf <= delta.
/// A linear functional over the inf-ball peaks at the signed corner, so the
/// exact optima are w.x + b -/+ delta * ||w||_1 in closed form.
inline std::vector<NeuronPreactBounds> preactivation_bounds(const LayerParams& layer,
                                                            std::span<const double> x,
                                                            double delta) {
    detail::check_delta(delta);
    Vec nominal = preactivations(layer, x);
    std::vector<NeuronPreactBounds> out(layer.rows);
    for (std::size_t i = 0; i < layer.rows; ++i) {
        double l1 = 0.0;
        for (double w : layer.row(i)) l1 += std::abs(w);
        const double spread = delta * l1;
        out[i] = {nominal[i] - spread, nominal[i], nominal[i] + spread};
    }
    return out;
}

/// Largest output deviation of one neuron. Monotone activations attain the
/// extreme output at an extreme pre-activation, so only the two endpoints
/// need to be evaluated.
inline double neuron_deviation(const NeuronPreactBounds& bounds, const Activation& act) {
    const double nominal = activate(act, bounds.beta_nominal);
    const double up = activate(act, bounds.beta_max) - nominal;
    const double down = nominal - activate(act, bounds.beta_min);
    return std::max({up, down, 0.0});
}

/// Sensitivity of a single layer: the largest neuron deviation.
inline double layer_sensitivity(const LayerParams& layer, std::span<const double> x,
                                double delta) {
    double eps = 0.0;
    for (const NeuronPreactBounds& b : preactivation_bounds(layer, x, delta)) {
        eps = std::max(eps, neuron_deviation(b, layer.activation));
    }
    return eps;
}

/// Maximum sensitivity of the network at x0 with input radius delta.
/// Chains layer_sensitivity through the network: each layer's sensitivity
/// becomes the incoming radius of the next, and the nominal point advances
/// by an ordinary forward step.
inline SensitivityResult max_sensitivity(const Mlp& net, std::span<const double> x0,
                                         double delta) {
    detail::check_delta(delta);
    detail::check_length(x0.size(), net.input_dim(), "network input");

    SensitivityResult result;
    result.layer_trace.reserve(net.layers().size());
    Vec x(x0.begin(), x0.end());
    double radius = delta;
    for (const LayerParams& layer : net.layers()) {
        const double eps = layer_sensitivity(layer, x, radius);
        result.layer_trace.push_back({x, radius, eps});
        x = layer_eval(layer, x);
        radius = eps;
    }
    result.epsilon = radius;
    return result;
}

}  // namespace reachmlp
