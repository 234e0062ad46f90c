#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace reachmlp {

/// Supported scalar activation kinds. Every kind is non-decreasing,
/// which the sensitivity bounds rely on.
enum class ActivationKind {
    relu,
    logistic,
    tanh,
    linear,
    elu,
};

/// Tagged activation value; `alpha` is only meaningful for elu (alpha > 0).
struct Activation {
    ActivationKind kind = ActivationKind::linear;
    double alpha = 1.0;

    static Activation relu() { return {ActivationKind::relu, 1.0}; }
    static Activation logistic() { return {ActivationKind::logistic, 1.0}; }
    static Activation tanh() { return {ActivationKind::tanh, 1.0}; }
    static Activation linear() { return {ActivationKind::linear, 1.0}; }
    static Activation elu(double alpha) {
        if (!(alpha > 0.0)) {
            throw std::invalid_argument("elu requires alpha > 0, got " + std::to_string(alpha));
        }
        return {ActivationKind::elu, alpha};
    }
};

/// Applies the activation to a finite scalar.
inline double activate(const Activation& a, double v) {
    switch (a.kind) {
        case ActivationKind::relu:
            return v > 0.0 ? v : 0.0;
        case ActivationKind::logistic:
            return 1.0 / (1.0 + std::exp(-v));
        case ActivationKind::tanh:
            return std::tanh(v);
        case ActivationKind::linear:
            return v;
        case ActivationKind::elu:
            return v >= 0.0 ? v : a.alpha * std::expm1(v);
    }
    throw std::logic_error("unhandled activation kind");
}

inline std::string activation_name(const Activation& a) {
    switch (a.kind) {
        case ActivationKind::relu: return "relu";
        case ActivationKind::logistic: return "logistic";
        case ActivationKind::tanh: return "tanh";
        case ActivationKind::linear: return "linear";
        case ActivationKind::elu: return "elu";
    }
    throw std::logic_error("unhandled activation kind");
}

/// Parses an activation by name. `alpha` is consulted for elu only.
/// Throws std::invalid_argument for names outside the supported set.
inline Activation parse_activation(const std::string& name, double alpha = 1.0) {
    if (name == "relu") return Activation::relu();
    if (name == "logistic") return Activation::logistic();
    if (name == "tanh") return Activation::tanh();
    if (name == "linear") return Activation::linear();
    if (name == "elu") return Activation::elu(alpha);
    throw std::invalid_argument("unknown activation \"" + name +
                                "\" (supported: relu, logistic, tanh, linear, elu)");
}

}  // namespace reachmlp
