#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stackplan/decoder.hpp"
#include "stackplan/model.hpp"

namespace stackplan {

/// J1: violations accumulated while decoding.
std::int64_t violations_j1(const Floorplan& floorplan);

/// Pairs of same-layer blocks whose footprints overlap, counted directly on
/// the finished floorplan. Matches violations_j1 for decoder output.
std::int64_t count_overlapping_pairs(const Floorplan& floorplan);

/// J2: sum over netlist edges of weight * Manhattan distance between the
/// blocks' lower-left-back corners. Throws std::invalid_argument for an edge
/// naming an unplaced id.
double wirelength_j2(const Floorplan& floorplan, const Netlist& netlist, const ChipSpec& chip);

/// J3: sum over unordered block pairs of dp_i * dp_j / d_ij, where dp is power
/// per footprint area and d_ij the distance between block centers (floored at
/// kMinCenterDistance).
double thermal_j3(const Floorplan& floorplan, std::span<const ComponentSpec> components,
                  const ChipSpec& chip);

/// Decode then score. Pure in its inputs.
ObjectiveVector evaluate(const Chromosome& chromosome, const Problem& problem);

/// Per-layer grid of dissipated power (W per cell), row-major with x fastest.
struct PowerGrid {
    double cell_mm = 0.0;
    std::size_t cells_x = 0;
    std::size_t cells_y = 0;
    std::vector<std::vector<double>> layers;

    double at(std::size_t layer, std::size_t ix, std::size_t iy) const {
        return layers[layer][iy * cells_x + ix];
    }
    double total() const;
};

/// Spreads each block's power over the cells it covers, proportional to
/// covered area. cell_mm must divide both chip sides.
PowerGrid power_density_map(const Floorplan& floorplan, const Problem& problem, double cell_mm);

}  // namespace stackplan
