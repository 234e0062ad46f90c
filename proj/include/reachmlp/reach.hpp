#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "reachmlp/lattice.hpp"
#include "reachmlp/network.hpp"
#include "reachmlp/parallel.hpp"
#include "reachmlp/sensitivity.hpp"

namespace reachmlp {

/// Output hyperbox {y : ||y - center||_inf <= radius} attached to one cell.
/// Boundaries are closed. `center_in_set` records whether the source cell
/// center lay inside the input set (overhang cells are kept but flagged;
/// the flag is diagnostic and not exported).
struct ReachTube {
    std::size_t cell_index = 0;
    Vec center;
    double radius = 0.0;
    bool center_in_set = true;

    bool contains(std::span<const double> y) const {
        if (y.size() != center.size()) return false;
        for (std::size_t j = 0; j < center.size(); ++j) {
            if (std::abs(y[j] - center[j]) > radius) return false;
        }
        return true;
    }

    friend bool operator==(const ReachTube& a, const ReachTube& b) {
        return a.cell_index == b.cell_index && a.center == b.center && a.radius == b.radius;
    }
};

/// Union of reachtubes over-approximating the output reachable set.
struct ReachEstimate {
    std::vector<ReachTube> tubes;
    double input_delta = 0.0;
    std::size_t cell_count = 0;
    std::size_t output_dim = 0;

    friend bool operator==(const ReachEstimate& a, const ReachEstimate& b) {
        return a.tubes == b.tubes && a.input_delta == b.input_delta &&
               a.cell_count == b.cell_count && a.output_dim == b.output_dim;
    }
};

/// True iff some tube contains y (inclusive boundaries).
inline bool contains(const ReachEstimate& est, std::span<const double> y) {
    for (const ReachTube& tube : est.tubes) {
        if (tube.contains(y)) return true;
    }
    return false;
}

/// Estimates the output reachable set of `net` over a union of input boxes:
/// discretize into cells of radius delta, then per cell take the tube
/// centered at forward(center) with radius max_sensitivity(center, delta).
/// Cells are processed independently (optionally in parallel) and merged in
/// cell-index order, so the result is identical for any worker count.
inline ReachEstimate output_reach(const Mlp& net, const std::vector<InputBox>& boxes,
                                  double delta, std::size_t workers = 0) {
    for (const InputBox& box : boxes) {
        box.validate();
        if (box.dim() != net.input_dim()) {
            throw std::invalid_argument("input box dimension " + std::to_string(box.dim()) +
                                        " does not match network input dimension " +
                                        std::to_string(net.input_dim()));
        }
    }
    const std::vector<LatticeCell> cells = discretize_union(boxes, delta);

    ReachEstimate est;
    est.input_delta = delta;
    est.cell_count = cells.size();
    est.output_dim = net.output_dim();
    est.tubes.resize(cells.size());
    detail::parallel_for(cells.size(), workers, [&](std::size_t i) {
        const LatticeCell& cell = cells[i];
        ReachTube& tube = est.tubes[i];
        tube.cell_index = i;
        tube.center = forward(net, cell.center);
        tube.radius = max_sensitivity(net, cell.center, delta).epsilon;
        tube.center_in_set = false;
        for (const InputBox& box : boxes) {
            if (box.contains(cell.center)) {
                tube.center_in_set = true;
                break;
            }
        }
    });
    return est;
}

namespace detail {

inline std::string full_precision(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

/// Writes the estimate as tabular text: a "# input_delta=..." metadata line,
/// a header "cell_index,center_1..center_m,radius", then one row per tube at
/// full precision. Round-trips losslessly through import_tubes.
inline void export_tubes(const ReachEstimate& est, std::ostream& sink) {
    sink << "# input_delta=" << detail::full_precision(est.input_delta) << "\n";
    sink << "cell_index";
    for (std::size_t j = 1; j <= est.output_dim; ++j) sink << ",center_" << j;
    sink << ",radius\n";
    for (const ReachTube& tube : est.tubes) {
        sink << tube.cell_index;
        for (double c : tube.center) sink << "," << detail::full_precision(c);
        sink << "," << detail::full_precision(tube.radius) << "\n";
    }
    if (!sink) {
        throw std::runtime_error("tube export: write failure");
    }
}

/// Reads an estimate previously written by export_tubes.
inline ReachEstimate import_tubes(std::istream& source) {
    ReachEstimate est;
    std::string line;
    if (!std::getline(source, line) || line.rfind("# input_delta=", 0) != 0) {
        throw std::runtime_error("tube import: missing \"# input_delta=\" line");
    }
    est.input_delta = std::stod(line.substr(14));
    if (!std::getline(source, line) || line.rfind("cell_index", 0) != 0) {
        throw std::runtime_error("tube import: missing header line");
    }
    std::size_t columns = 1;
    for (char ch : line) {
        if (ch == ',') ++columns;
    }
    if (columns < 2) throw std::runtime_error("tube import: malformed header");
    est.output_dim = columns - 2;

    while (std::getline(source, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        ReachTube tube;
        if (!std::getline(row, field, ',')) break;
        tube.cell_index = std::stoull(field);
        for (std::size_t j = 0; j < est.output_dim; ++j) {
            if (!std::getline(row, field, ',')) {
                throw std::runtime_error("tube import: short row");
            }
            tube.center.push_back(std::stod(field));
        }
        if (!std::getline(row, field, ',')) {
            throw std::runtime_error("tube import: short row");
        }
        tube.radius = std::stod(field);
        est.tubes.push_back(std::move(tube));
    }
    est.cell_count = est.tubes.size();
    return est;
}

}  // namespace reachmlp
