#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reachmlp/lattice.hpp"
#include "reachmlp/network.hpp"
#include "reachmlp/parallel.hpp"
#include "reachmlp/reach.hpp"
#include "reachmlp/rng.hpp"
#include "reachmlp/sensitivity.hpp"

namespace reachmlp {

/// Result of a randomized containment audit.
struct SampleReport {
    std::size_t sample_count = 0;
    std::vector<std::pair<Vec, Vec>> violations;  ///< (input, output) pairs that escaped
    /// Worst containment overshoot over all samples: how far the worst output
    /// sticks out of the estimate in the inf-norm (0 when everything is inside).
    double max_observed_deviation = 0.0;
};

namespace detail {

inline double inf_norm_dist(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d;
}

/// Forward pass carrying a running absolute rounding-error bound per output
/// component: standard dot-product error accumulation plus a couple of ulps
/// per activation call, propagated through the activation Lipschitz constant.
inline std::pair<Vec, Vec> forward_with_error(const Mlp& net, std::span<const double> x) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    Vec cur(x.begin(), x.end());
    Vec err(cur.size(), 0.0);
    for (const LayerParams& layer : net.layers()) {
        const double lip = layer.activation.kind == ActivationKind::elu
                               ? std::max(1.0, layer.activation.alpha)
                               : 1.0;
        Vec next(layer.rows), next_err(layer.rows);
        for (std::size_t i = 0; i < layer.rows; ++i) {
            const double* w = layer.weights.data() + i * layer.cols;
            double acc = layer.biases[i];
            double mag = std::abs(layer.biases[i]);
            double carried = 0.0;
            for (std::size_t j = 0; j < layer.cols; ++j) {
                acc += w[j] * cur[j];
                mag += std::abs(w[j] * cur[j]);
                carried += std::abs(w[j]) * err[j];
            }
            const double pre_err = carried + static_cast<double>(layer.cols + 2) * eps * mag;
            next[i] = activate(layer.activation, acc);
            next_err[i] = lip * pre_err + 2.0 * eps * std::abs(next[i]);
        }
        cur = std::move(next);
        err = std::move(next_err);
    }
    return {std::move(cur), std::move(err)};
}

}  // namespace detail

/// Draws `n` uniform inputs per box, forwards each through the network and
/// records any output outside the estimate. Boxes get disjoint sub-seeds, so
/// the report is reproducible and independent of evaluation order.
inline SampleReport sample_containment(const Mlp& net, const std::vector<InputBox>& boxes,
                                       const ReachEstimate& est, std::size_t n,
                                       std::uint64_t seed) {
    SampleReport report;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        const InputBox& box = boxes[b];
        box.validate();
        SplitRng rng(SplitRng::derive(seed, b));
        Vec x(box.dim());
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t j = 0; j < box.dim(); ++j) {
                x[j] = box.lower[j] + (box.upper[j] - box.lower[j]) * rng.uniform01();
            }
            const Vec y = forward(net, x);
            double overshoot = std::numeric_limits<double>::infinity();
            for (const ReachTube& tube : est.tubes) {
                overshoot = std::min(overshoot, detail::inf_norm_dist(y, tube.center) - tube.radius);
            }
            ++report.sample_count;
            if (overshoot > 0.0) {
                report.violations.emplace_back(x, y);
                report.max_observed_deviation = std::max(report.max_observed_deviation, overshoot);
            }
        }
    }
    return report;
}

/// Grid-search lower bound on the true maximum sensitivity: evaluates
/// ||F(x0 + dx) - F(x0)||_inf over a grid_per_dim^n grid of the inf-ball
/// (corners included), minus a rigorous rounding margin so the returned
/// value is a certified lower bound in floating point too — the dominance
/// check against the chain bound holds with no test-side slack.
/// Rejects grids beyond `max_points` before doing any work.
inline double brute_sensitivity(const Mlp& net, std::span<const double> x0, double delta,
                                std::size_t grid_per_dim,
                                std::size_t max_points = 20'000'000) {
    if (grid_per_dim < 2) {
        throw std::invalid_argument("brute_sensitivity needs grid_per_dim >= 2");
    }
    detail::check_delta(delta);
    detail::check_length(x0.size(), net.input_dim(), "network input");
    const std::size_t n = x0.size();
    if (static_cast<double>(n) * std::log(static_cast<double>(grid_per_dim)) >
        std::log(static_cast<double>(max_points))) {
        throw std::invalid_argument("brute_sensitivity grid of " + std::to_string(grid_per_dim) +
                                    "^" + std::to_string(n) + " points exceeds budget");
    }
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) total *= grid_per_dim;

    constexpr double eps = std::numeric_limits<double>::epsilon();
    const auto [base, base_err] = detail::forward_with_error(net, x0);
    double worst = 0.0;
    Vec x(n);
    for (std::size_t p = 0; p < total; ++p) {
        std::size_t rem = p;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t g = rem % grid_per_dim;
            rem /= grid_per_dim;
            const double offset = std::clamp(
                -delta + 2.0 * delta * static_cast<double>(g) / static_cast<double>(grid_per_dim - 1),
                -delta, delta);
            x[j] = x0[j] + offset;
        }
        const auto [y, y_err] = detail::forward_with_error(net, x);
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double dev = std::abs(y[i] - base[i]);
            // doubled error budget also covers the comparison target's own
            // rounding, which traverses the same magnitudes
            const double certified = dev - 2.0 * (y_err[i] + base_err[i]) - 2.0 * eps * dev;
            worst = std::max(worst, certified);
        }
    }
    return std::max(worst, 0.0);
}

/// Ground truth for preactivation_bounds: enumerates all 2^n corners
/// dx in {-delta, +delta}^n and takes exact min/max per neuron. Deliberately
/// avoids the closed form so the two routes stay independent.
inline std::vector<NeuronPreactBounds> corner_lp_oracle(const LayerParams& layer,
                                                        std::span<const double> x,
                                                        double delta) {
    detail::check_delta(delta);
    detail::check_length(x.size(), layer.cols, "layer input");
    if (layer.cols > 20) {
        throw std::invalid_argument("corner_lp_oracle limited to 20 inputs (2^n corners)");
    }
    const Vec nominal = preactivations(layer, x);
    std::vector<NeuronPreactBounds> out(layer.rows);
    for (std::size_t i = 0; i < layer.rows; ++i) {
        out[i] = {nominal[i], nominal[i], nominal[i]};
    }
    const std::size_t corners = std::size_t{1} << layer.cols;
    Vec shifted(layer.cols);
    for (std::size_t mask = 0; mask < corners; ++mask) {
        for (std::size_t j = 0; j < layer.cols; ++j) {
            shifted[j] = x[j] + (((mask >> j) & 1U) != 0 ? delta : -delta);
        }
        const Vec beta = preactivations(layer, shifted);
        for (std::size_t i = 0; i < layer.rows; ++i) {
            out[i].beta_min = std::min(out[i].beta_min, beta[i]);
            out[i].beta_max = std::max(out[i].beta_max, beta[i]);
        }
    }
    return out;
}

/// Sampled tightness diagnostic: the largest inf-distance from any tube
/// corner to its nearest sample. Smaller means tighter; monotone under
/// refinement but NOT a certified Hausdorff distance.
inline double tightness(const ReachEstimate& est, const std::vector<Vec>& samples) {
    if (samples.empty()) {
        throw std::invalid_argument("tightness needs a nonempty sample set");
    }
    for (const Vec& s : samples) {
        if (!contains(est, s)) {
            throw std::invalid_argument("tightness precondition violated: sample outside estimate");
        }
    }
    if (est.output_dim > 20) {
        throw std::invalid_argument("tightness limited to 20 output dimensions (2^m corners)");
    }
    const std::size_t m = est.output_dim;
    const std::size_t corners = std::size_t{1} << m;

    std::vector<double> per_tube(est.tubes.size(), 0.0);
    detail::parallel_for(est.tubes.size(), 0, [&](std::size_t t) {
        const ReachTube& tube = est.tubes[t];
        Vec corner(m);
        double worst = 0.0;
        for (std::size_t mask = 0; mask < corners; ++mask) {
            for (std::size_t j = 0; j < m; ++j) {
                corner[j] = tube.center[j] + (((mask >> j) & 1U) != 0 ? tube.radius : -tube.radius);
            }
            double nearest = std::numeric_limits<double>::infinity();
            for (const Vec& s : samples) {
                nearest = std::min(nearest, detail::inf_norm_dist(corner, s));
            }
            worst = std::max(worst, nearest);
        }
        per_tube[t] = worst;
    });
    double result = 0.0;
    for (double v : per_tube) result = std::max(result, v);
    return result;
}

/// Planar two-link arm geometry and the joint-angle zone to sample.
struct ArmConfig {
    double l1 = 10.0;
    double l2 = 7.0;
    double theta1_min = 5.0 * std::numbers::pi / 12.0;
    double theta1_max = 7.0 * std::numbers::pi / 12.0;
    double theta2_min = 5.0 * std::numbers::pi / 12.0;
    double theta2_max = 7.0 * std::numbers::pi / 12.0;

    void validate() const {
        if (!(l1 > 0.0) || !(l2 > 0.0)) {
            throw std::invalid_argument("arm link lengths must be > 0");
        }
        const double two_pi = 2.0 * std::numbers::pi;
        for (auto [lo, hi] : {std::pair{theta1_min, theta1_max}, std::pair{theta2_min, theta2_max}}) {
            if (!(lo <= hi) || lo < 0.0 || hi > two_pi) {
                throw std::invalid_argument("arm joint intervals must satisfy 0 <= lo <= hi <= 2*pi");
            }
        }
    }
};

/// End-effector position of the two-link arm.
inline std::pair<double, double> arm_forward(const ArmConfig& cfg, double theta1, double theta2) {
    const double x = cfg.l1 * std::cos(theta1) + cfg.l2 * std::cos(theta1 + theta2);
    const double y = cfg.l1 * std::sin(theta1) + cfg.l2 * std::sin(theta1 + theta2);
    return {x, y};
}

/// Emits forward-kinematics training rows "theta1,theta2,x,y" over a
/// grid_per_dim^2 grid of the configured zone (endpoints included).
/// The rows feed an external training step; the resulting network file
/// comes back through safety_verify.
inline void gen_arm_data(const ArmConfig& cfg, std::size_t grid_per_dim, std::ostream& sink) {
    cfg.validate();
    if (grid_per_dim == 0) {
        throw std::invalid_argument("gen_arm_data needs grid_per_dim >= 1");
    }
    auto grid_point = [&](double lo, double hi, std::size_t g) {
        if (grid_per_dim == 1) return 0.5 * (lo + hi);
        return lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid_per_dim - 1);
    };
    sink << "theta1,theta2,x,y\n";
    for (std::size_t a = 0; a < grid_per_dim; ++a) {
        for (std::size_t b = 0; b < grid_per_dim; ++b) {
            const double t1 = grid_point(cfg.theta1_min, cfg.theta1_max, a);
            const double t2 = grid_point(cfg.theta2_min, cfg.theta2_max, b);
            const auto [x, y] = arm_forward(cfg, t1, t2);
            sink << detail::full_precision(t1) << "," << detail::full_precision(t2) << ","
                 << detail::full_precision(x) << "," << detail::full_precision(y) << "\n";
        }
    }
    if (!sink) {
        throw std::runtime_error("arm data export: write failure");
    }
}

/// Structured-text SampleReport writer (seed, counts, witnesses).
inline void write_sample_report(const SampleReport& report, std::uint64_t seed,
                                std::ostream& sink) {
    sink << "# sample_report seed=" << seed << "\n";
    sink << "samples: " << report.sample_count << "\n";
    sink << "violations: " << report.violations.size() << "\n";
    sink << "max_observed_deviation: " << detail::full_precision(report.max_observed_deviation)
         << "\n";
    for (const auto& [in, out] : report.violations) {
        sink << "violation: input=";
        for (std::size_t j = 0; j < in.size(); ++j) {
            sink << (j == 0 ? "" : ",") << detail::full_precision(in[j]);
        }
        sink << " output=";
        for (std::size_t j = 0; j < out.size(); ++j) {
            sink << (j == 0 ? "" : ",") << detail::full_precision(out[j]);
        }
        sink << "\n";
    }
}

}  // namespace reachmlp
