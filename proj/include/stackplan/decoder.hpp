#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "stackplan/model.hpp"

namespace stackplan {

/// Geometric slack used by the overlap and bounds predicates (mm).
inline constexpr double kGeometryTolerance = 1e-9;
/// Floor applied to center distances in the thermal interaction (mm).
inline constexpr double kMinCenterDistance = 1e-9;

struct PlacedBlock {
    ComponentId id = 0;
    double x_mm = 0.0;
    double y_mm = 0.0;
    int layer = 0;
    double eff_length_mm = 0.0;
    double eff_width_mm = 0.0;

    bool operator==(const PlacedBlock&) const = default;
};

struct Floorplan {
    std::vector<PlacedBlock> blocks;  // placement order
    std::int64_t violations = 0;

    bool operator==(const Floorplan&) const = default;
};

/// A lower-left corner on a layer. Orders by (layer, y, x).
struct Position {
    double x_mm = 0.0;
    double y_mm = 0.0;
    int layer = 0;

    bool operator==(const Position&) const = default;
    std::weak_ordering operator<=>(const Position& o) const {
        if (auto c = layer <=> o.layer; c != 0) return c;
        if (y_mm != o.y_mm) return y_mm < o.y_mm ? std::weak_ordering::less : std::weak_ordering::greater;
        if (x_mm != o.x_mm) return x_mm < o.x_mm ? std::weak_ordering::less : std::weak_ordering::greater;
        return std::weak_ordering::equivalent;
    }
};

/// Corner candidates for `block` on every layer: the layer origin plus the
/// right-bottom and left-top corners of each block already on that layer.
/// Candidates that leave the chip or overlap a placed block are dropped.
/// Sorted by (layer, y, x), duplicates removed.
std::vector<Position> candidate_positions(const Floorplan& partial, const ComponentSpec& block,
                                          bool rotated, const Problem& problem);

/// Picks the candidate minimising the sum of the wirelength and thermal
/// increments, each normalised by its maximum over the candidates. Ties go to
/// the earliest candidate in (layer, y, x) order. `candidates` must be
/// non-empty.
Position select_position(std::span<const Position> candidates, const ComponentSpec& block,
                         bool rotated, const Floorplan& partial, const Problem& problem);

/// Places blocks one by one in chromosome order. A block with no feasible
/// candidate goes to the in-bounds corner with the least total overlap, and
/// each block it overlaps adds one violation.
Floorplan decode(const Chromosome& chromosome, const Problem& problem);

}  // namespace stackplan
