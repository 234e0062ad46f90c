#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reachmlp/lattice.hpp"
#include "reachmlp/network.hpp"
#include "reachmlp/parallel.hpp"
#include "reachmlp/reach.hpp"

namespace reachmlp {

/// Per-output-dimension interval constraint; either side may be unbounded.
struct OutputInterval {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    bool bounded() const {
        return lower != -std::numeric_limits<double>::infinity() ||
               upper != std::numeric_limits<double>::infinity();
    }
};

/// Axis-aligned safe region: the conjunction of per-dimension intervals.
/// An all-unbounded spec is the full space (everything is safe).
struct SafetySpec {
    std::vector<OutputInterval> safe_box;

    void validate(std::size_t output_dim) const {
        if (safe_box.size() != output_dim) {
            throw std::invalid_argument("safety spec covers " + std::to_string(safe_box.size()) +
                                        " dimensions, output has " + std::to_string(output_dim));
        }
        for (const OutputInterval& iv : safe_box) {
            if (iv.lower > iv.upper) {
                throw std::invalid_argument("safety spec interval has lower > upper");
            }
        }
    }
};

enum class Safety { safe, unsafe, uncertain };

inline const char* to_string(Safety s) {
    switch (s) {
        case Safety::safe: return "SAFE";
        case Safety::unsafe: return "UNSAFE";
        case Safety::uncertain: return "UNCERTAIN";
    }
    return "?";
}

/// Three-valued verification outcome. SAFE and UNSAFE are sound; UNCERTAIN
/// reports which tubes leak out of the safe region so the caller can refine.
struct Verdict {
    Safety kind = Safety::uncertain;
    Vec witness_input;    ///< UNSAFE only: cell center whose output violates the spec
    Vec witness_output;   ///< UNSAFE only: forward(witness_input)
    std::vector<std::size_t> offending_tubes;  ///< UNCERTAIN only
    std::size_t cell_count = 0;
};

/// Pointwise membership in the safe region (inclusive bounds).
inline bool point_safe(const SafetySpec& spec, std::span<const double> y) {
    spec.validate(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[j] < spec.safe_box[j].lower || y[j] > spec.safe_box[j].upper) return false;
    }
    return true;
}

/// Whole-tube containment in the safe region. Exact for axis-aligned specs
/// and inf-norm tubes: the tube fits iff it fits on every constrained axis.
inline bool tube_safe(const SafetySpec& spec, const ReachTube& tube) {
    spec.validate(tube.center.size());
    for (std::size_t j = 0; j < tube.center.size(); ++j) {
        if (tube.center[j] - tube.radius < spec.safe_box[j].lower ||
            tube.center[j] + tube.radius > spec.safe_box[j].upper) {
            return false;
        }
    }
    return true;
}

/// Two-phase safety verification.
/// Phase 1 simulates every cell center that lies in the input set; an unsafe
/// output is a real counterexample and short-circuits to UNSAFE (witness =
/// lowest cell index). Phase 2 computes the reachable-set estimate; SAFE iff
/// every tube is contained in the safe region, else UNCERTAIN with the
/// leaking tube indices.
inline Verdict safety_verify(const Mlp& net, const std::vector<InputBox>& boxes,
                             const SafetySpec& spec, double delta, std::size_t workers = 0) {
    spec.validate(net.output_dim());
    for (const InputBox& box : boxes) {
        box.validate();
        if (box.dim() != net.input_dim()) {
            throw std::invalid_argument("input box dimension does not match network input");
        }
    }

    const std::vector<LatticeCell> cells = discretize_union(boxes, delta);
    Verdict verdict;
    verdict.cell_count = cells.size();

    // Phase 1: cheap simulations first.
    constexpr auto kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> hit(cells.size(), kNone);
    detail::parallel_for(cells.size(), workers, [&](std::size_t i) {
        const Vec& center = cells[i].center;
        bool in_set = false;
        for (const InputBox& box : boxes) {
            if (box.contains(center)) {
                in_set = true;
                break;
            }
        }
        if (in_set && !point_safe(spec, forward(net, center))) hit[i] = i;
    });
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (hit[i] != kNone) {
            verdict.kind = Safety::unsafe;
            verdict.witness_input = cells[i].center;
            verdict.witness_output = forward(net, cells[i].center);
            return verdict;
        }
    }

    // Phase 2: reachable-set estimate against the safe region.
    const ReachEstimate est = output_reach(net, boxes, delta, workers);
    for (const ReachTube& tube : est.tubes) {
        if (!tube_safe(spec, tube)) verdict.offending_tubes.push_back(tube.cell_index);
    }
    verdict.kind = verdict.offending_tubes.empty() ? Safety::safe : Safety::uncertain;
    return verdict;
}

}  // namespace reachmlp
