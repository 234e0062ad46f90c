#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "reachmlp/network.hpp"

namespace reachmlp {

/// Raised when a network document cannot be parsed or violates the schema.
/// Dimension, finiteness and activation violations surface as
/// std::invalid_argument from Mlp construction instead.
struct NetworkFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kNetworkSchemaVersion = 1;

/// Loads a network document:
///   { "version": 1, "input_dim": n,
///     "layers": [ { "weights": [[...]], "biases": [...],
///                   "activation": "tanh", "alpha": 1.0? }, ... ] }
/// Weight rows are per output neuron. "alpha" is only read for elu.
inline Mlp load_network(std::istream& source) {
    nlohmann::json doc;
    try {
        source >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw NetworkFormatError(std::string("network document: ") + e.what());
    }
    if (!doc.is_object()) {
        throw NetworkFormatError("network document: top level must be an object");
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer()) {
        throw NetworkFormatError("network document: missing integer \"version\"");
    }
    if (doc["version"].get<int>() != kNetworkSchemaVersion) {
        throw NetworkFormatError("network document: unsupported version " +
                                 doc["version"].dump());
    }
    if (!doc.contains("input_dim") || !doc["input_dim"].is_number_unsigned()) {
        throw NetworkFormatError("network document: missing non-negative \"input_dim\"");
    }
    if (!doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].empty()) {
        throw NetworkFormatError("network document: \"layers\" must be a nonempty array");
    }

    const std::size_t input_dim = doc["input_dim"].get<std::size_t>();
    std::vector<LayerParams> layers;
    layers.reserve(doc["layers"].size());
    for (std::size_t l = 0; l < doc["layers"].size(); ++l) {
        const auto& jl = doc["layers"][l];
        const std::string where = "network document: layer " + std::to_string(l);
        if (!jl.is_object() || !jl.contains("weights") || !jl.contains("biases") ||
            !jl.contains("activation")) {
            throw NetworkFormatError(where + " needs \"weights\", \"biases\", \"activation\"");
        }
        if (!jl["weights"].is_array() || jl["weights"].empty()) {
            throw NetworkFormatError(where + ": \"weights\" must be a nonempty array of rows");
        }
        LayerParams layer;
        layer.rows = jl["weights"].size();
        layer.cols = jl["weights"][0].is_array() ? jl["weights"][0].size() : 0;
        for (const auto& row : jl["weights"]) {
            if (!row.is_array() || row.size() != layer.cols || layer.cols == 0) {
                throw NetworkFormatError(where + ": ragged or empty weight row");
            }
            for (const auto& w : row) {
                if (!w.is_number()) throw NetworkFormatError(where + ": non-numeric weight");
                layer.weights.push_back(w.get<double>());
            }
        }
        if (!jl["biases"].is_array()) {
            throw NetworkFormatError(where + ": \"biases\" must be an array");
        }
        for (const auto& b : jl["biases"]) {
            if (!b.is_number()) throw NetworkFormatError(where + ": non-numeric bias");
            layer.biases.push_back(b.get<double>());
        }
        if (!jl["activation"].is_string()) {
            throw NetworkFormatError(where + ": \"activation\" must be a string");
        }
        const double alpha = jl.contains("alpha") ? jl["alpha"].get<double>() : 1.0;
        layer.activation = parse_activation(jl["activation"].get<std::string>(), alpha);
        layers.push_back(std::move(layer));
    }

    if (layers.front().cols != input_dim) {
        throw std::invalid_argument("layer 0 expects " + std::to_string(layers.front().cols) +
                                    " inputs but \"input_dim\" is " + std::to_string(input_dim));
    }
    return Mlp(std::move(layers));  // chain/finite/alpha validation happens here
}

inline Mlp load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::system_error(errno, std::generic_category(),
                                "cannot open network file \"" + path + "\"");
    }
    return load_network(in);
}

inline void save_network(const Mlp& net, std::ostream& sink) {
    nlohmann::json doc;
    doc["version"] = kNetworkSchemaVersion;
    doc["input_dim"] = net.input_dim();
    doc["layers"] = nlohmann::json::array();
    for (const LayerParams& layer : net.layers()) {
        nlohmann::json jl;
        jl["weights"] = nlohmann::json::array();
        for (std::size_t i = 0; i < layer.rows; ++i) {
            jl["weights"].push_back(std::vector<double>(layer.row(i).begin(), layer.row(i).end()));
        }
        jl["biases"] = layer.biases;
        jl["activation"] = activation_name(layer.activation);
        if (layer.activation.kind == ActivationKind::elu) {
            jl["alpha"] = layer.activation.alpha;
        }
        doc["layers"].push_back(std::move(jl));
    }
    sink << doc.dump(2) << "\n";
}

}  // namespace reachmlp
