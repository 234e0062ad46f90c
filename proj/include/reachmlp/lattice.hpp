#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "reachmlp/network.hpp"
#include "reachmlp/rng.hpp"

namespace reachmlp {

/// Axis-aligned input box [lower, upper].
struct InputBox {
    Vec lower;
    Vec upper;

    std::size_t dim() const { return lower.size(); }

    void validate() const {
        if (lower.size() != upper.size() || lower.empty()) {
            throw std::invalid_argument("box bounds must be nonempty vectors of equal length");
        }
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (!std::isfinite(lower[j]) || !std::isfinite(upper[j])) {
                throw std::invalid_argument("box bounds must be finite");
            }
            if (lower[j] > upper[j]) {
                throw std::invalid_argument("box dimension " + std::to_string(j) +
                                            " has lower > upper");
            }
        }
    }

    bool contains(std::span<const double> x) const {
        if (x.size() != lower.size()) return false;
        for (std::size_t j = 0; j < lower.size(); ++j) {
            if (x[j] < lower[j] || x[j] > upper[j]) return false;
        }
        return true;
    }
};

/// One inf-norm cell {x : ||x - center||_inf <= radius}.
struct LatticeCell {
    Vec center;
    double radius = 0.0;

    bool contains(std::span<const double> x) const {
        if (x.size() != center.size()) return false;
        for (std::size_t j = 0; j < center.size(); ++j) {
            if (std::abs(x[j] - center[j]) > radius) return false;
        }
        return true;
    }
};

namespace detail {

/// Cells per dimension: ceil(width / 2delta), clamped to >= 1. The small
/// downward nudge absorbs float noise when the width is an exact multiple;
/// the bump loop restores the closed-cell cover guarantee afterwards.
inline std::size_t cells_along(double lower, double upper, double delta) {
    const double width = upper - lower;
    if (width == 0.0) return 1;
    const double q = width / (2.0 * delta);
    auto k = static_cast<std::size_t>(std::ceil(q - 1e-9 * std::max(1.0, q)));
    if (k < 1) k = 1;
    while (lower + 2.0 * static_cast<double>(k) * delta < upper) ++k;
    return k;
}

}  // namespace detail

/// Covers the box with cells of radius delta anchored at the lower corner:
/// centers lower_j + (2m+1)*delta in row-major grid order. The grid may
/// overhang the upper face (cover, never clip); a zero-width dimension gets
/// a single center on the face.
inline std::vector<LatticeCell> discretize(const InputBox& box, double delta) {
    box.validate();
    if (!(delta > 0.0)) {
        throw std::invalid_argument("lattice radius must be > 0, got " + std::to_string(delta));
    }
    const std::size_t n = box.dim();
    std::vector<std::size_t> counts(n);
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) {
        counts[j] = detail::cells_along(box.lower[j], box.upper[j], delta);
        total *= counts[j];
    }

    std::vector<LatticeCell> cells;
    cells.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t c = 0; c < total; ++c) {
        LatticeCell cell;
        cell.radius = delta;
        cell.center.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            cell.center[j] = (box.upper[j] == box.lower[j])
                                 ? box.lower[j]
                                 : box.lower[j] + (2.0 * static_cast<double>(idx[j]) + 1.0) * delta;
        }
        cells.push_back(std::move(cell));
        for (std::size_t j = n; j-- > 0;) {  // row-major: last dimension fastest
            if (++idx[j] < counts[j]) break;
            idx[j] = 0;
        }
    }
    return cells;
}

/// Discretizes a finite union of boxes, box by box, dropping cells whose
/// center duplicates an earlier one exactly. Cell indices run over the
/// concatenated, deduplicated list.
inline std::vector<LatticeCell> discretize_union(const std::vector<InputBox>& boxes,
                                                 double delta) {
    std::vector<LatticeCell> all;
    for (const InputBox& box : boxes) {
        for (LatticeCell& cell : discretize(box, delta)) {
            bool duplicate = false;
            for (const LatticeCell& seen : all) {
                if (seen.center == cell.center) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) all.push_back(std::move(cell));
        }
    }
    return all;
}

/// Probabilistic audit of the cover guarantee: draws `samples` uniform
/// points in the box and checks each lies in some cell. On failure the
/// first escaping point is reported through `witness` when given.
inline bool covers(const std::vector<LatticeCell>& cells, const InputBox& box,
                   std::size_t samples, std::uint64_t seed, Vec* witness = nullptr) {
    box.validate();
    if (cells.empty()) {
        throw std::invalid_argument("covers needs a nonempty cell list");
    }
    SplitRng rng(seed);
    Vec point(box.dim());
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t j = 0; j < box.dim(); ++j) {
            point[j] = box.lower[j] + (box.upper[j] - box.lower[j]) * rng.uniform01();
        }
        bool inside = false;
        for (const LatticeCell& cell : cells) {
            if (cell.contains(point)) {
                inside = true;
                break;
            }
        }
        if (!inside) {
            if (witness != nullptr) *witness = point;
            return false;
        }
    }
    return true;
}

}  // namespace reachmlp
