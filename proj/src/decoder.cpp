#include "stackplan/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stackplan/kernels.hpp"

namespace stackplan {

namespace {

struct Extent {
    double length;
    double width;
};

Extent effective_extent(const ComponentSpec& c, bool rotated) {
    return rotated ? Extent{c.width_mm, c.length_mm} : Extent{c.length_mm, c.width_mm};
}

double power_density(const ComponentSpec& c) { return c.power_w / c.area_mm2(); }

// Incremental view of a partial floorplan laid out for the kernels: one
// rectangle table per layer and one table of block centers across layers.
class PlacementState {
  public:
    explicit PlacementState(const Problem& problem)
        : problem_(problem),
          layers_(static_cast<std::size_t>(problem.chip().layers)),
          corner_(problem.size()),
          placed_(problem.size(), false) {
        const auto n = problem.size();
        cx_.reserve(n);
        cy_.reserve(n);
        cz_.reserve(n);
        dp_.reserve(n);
        floorplan_.blocks.reserve(n);
    }

    PlacementState(const Problem& problem, const Floorplan& partial) : PlacementState(problem) {
        for (const auto& b : partial.blocks) {
            const auto& spec = problem.components()[problem.index_of(b.id)];
            commit(spec, b.eff_length_mm, b.eff_width_mm, {b.x_mm, b.y_mm, b.layer}, 0);
        }
        floorplan_.violations = partial.violations;
    }

    std::vector<Position> corners(Extent e, bool filter_overlaps) const {
        const ChipSpec& chip = problem_.chip();
        std::vector<Position> out;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            const LayerRects& rects = layers_[l];
            const kernels::RectsView view = rects.view();
            auto consider = [&](double x, double y) {
                if (x + e.length > chip.length_mm + kGeometryTolerance) return;
                if (y + e.width > chip.width_mm + kGeometryTolerance) return;
                if (filter_overlaps &&
                    kernels::any_overlap(view, {x, y, x + e.length, y + e.width}, kGeometryTolerance))
                    return;
                out.push_back({x, y, static_cast<int>(l)});
            };
            consider(0.0, 0.0);
            for (std::size_t j = 0; j < rects.x0.size(); ++j) {
                consider(rects.x1[j], rects.y0[j]);
                consider(rects.x0[j], rects.y1[j]);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    Position select(std::span<const Position> candidates, const ComponentSpec& spec,
                    std::size_t index, Extent e) const {
        const double t = problem_.chip().layer_thickness_mm;
        const double dp = power_density(spec);
        const auto neighbors = problem_.neighbors(index);
        const kernels::PointsView centers{cx_.data(), cy_.data(), cz_.data(), dp_.data(), dp_.size()};

        std::vector<double> wire(candidates.size());
        std::vector<double> heat(candidates.size());
        double wire_max = 0.0;
        double heat_max = 0.0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const Position& p = candidates[c];
            const double z = p.layer * t;
            double w = 0.0;
            for (const auto& nb : neighbors) {
                if (!placed_[nb.index]) continue;
                const Corner& q = corner_[nb.index];
                w += nb.weight * (std::abs(p.x_mm - q.x) + std::abs(p.y_mm - q.y) + std::abs(z - q.z));
            }
            const double h = dp * kernels::inverse_distance_sum(centers, p.x_mm + e.length / 2,
                                                                 p.y_mm + e.width / 2, z + t / 2,
                                                                 kMinCenterDistance);
            wire[c] = w;
            heat[c] = h;
            wire_max = std::max(wire_max, w);
            heat_max = std::max(heat_max, h);
        }

        std::size_t best = 0;
        double best_score = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const double score = (wire_max > 0.0 ? wire[c] / wire_max : 0.0) +
                                 (heat_max > 0.0 ? heat[c] / heat_max : 0.0);
            if (score < best_score) {
                best_score = score;
                best = c;
            }
        }
        return candidates[best];
    }

    void place(const ComponentSpec& spec, std::size_t index, bool rotated) {
        const Extent e = effective_extent(spec, rotated);
        const auto candidates = corners(e, true);
        if (!candidates.empty()) {
            commit(spec, e.length, e.width, select(candidates, spec, index, e), 0);
            return;
        }
        // No overlap-free corner: least-overlap in-bounds corner instead.
        const auto fallback = corners(e, false);
        Position best = fallback.front();
        kernels::OverlapTally best_tally{std::numeric_limits<double>::infinity(), 0};
        for (const Position& p : fallback) {
            const auto tally = kernels::overlap_tally(
                layers_[static_cast<std::size_t>(p.layer)].view(),
                {p.x_mm, p.y_mm, p.x_mm + e.length, p.y_mm + e.width}, kGeometryTolerance);
            if (tally.area < best_tally.area) {
                best_tally = tally;
                best = p;
            }
        }
        commit(spec, e.length, e.width, best, static_cast<std::int64_t>(best_tally.count));
    }

    Floorplan take() && { return std::move(floorplan_); }
    const Floorplan& floorplan() const { return floorplan_; }

  private:
    struct LayerRects {
        std::vector<double> x0, y0, x1, y1;
        kernels::RectsView view() const { return {x0.data(), y0.data(), x1.data(), y1.data(), x0.size()}; }
    };
    struct Corner {
        double x = 0.0, y = 0.0, z = 0.0;
    };

    void commit(const ComponentSpec& spec, double length, double width, Position p,
                std::int64_t violations) {
        const std::size_t index = problem_.index_of(spec.id);
        if (placed_[index]) throw std::invalid_argument("component placed twice: " + std::to_string(spec.id));
        if (p.layer < 0 || static_cast<std::size_t>(p.layer) >= layers_.size())
            throw std::invalid_argument("layer out of range for component " + std::to_string(spec.id));
        const double t = problem_.chip().layer_thickness_mm;
        LayerRects& rects = layers_[static_cast<std::size_t>(p.layer)];
        rects.x0.push_back(p.x_mm);
        rects.y0.push_back(p.y_mm);
        rects.x1.push_back(p.x_mm + length);
        rects.y1.push_back(p.y_mm + width);
        cx_.push_back(p.x_mm + length / 2);
        cy_.push_back(p.y_mm + width / 2);
        cz_.push_back(p.layer * t + t / 2);
        dp_.push_back(power_density(spec));
        corner_[index] = {p.x_mm, p.y_mm, p.layer * t};
        placed_[index] = true;
        floorplan_.blocks.push_back({spec.id, p.x_mm, p.y_mm, p.layer, length, width});
        floorplan_.violations += violations;
    }

    const Problem& problem_;
    std::vector<LayerRects> layers_;
    std::vector<double> cx_, cy_, cz_, dp_;
    std::vector<Corner> corner_;
    std::vector<bool> placed_;
    Floorplan floorplan_;
};

}  // namespace

std::vector<Position> candidate_positions(const Floorplan& partial, const ComponentSpec& block,
                                          bool rotated, const Problem& problem) {
    const PlacementState state(problem, partial);
    return state.corners(effective_extent(block, rotated), true);
}

Position select_position(std::span<const Position> candidates, const ComponentSpec& block,
                         bool rotated, const Floorplan& partial, const Problem& problem) {
    if (candidates.empty()) throw std::invalid_argument("select_position needs at least one candidate");
    const PlacementState state(problem, partial);
    return state.select(candidates, block, problem.index_of(block.id), effective_extent(block, rotated));
}

Floorplan decode(const Chromosome& chromosome, const Problem& problem) {
    if (!is_valid_chromosome(chromosome, problem.components()))
        throw std::invalid_argument("chromosome is not a permutation of the scenario's component ids");
    PlacementState state(problem);
    for (std::size_t g = 0; g < chromosome.size(); ++g) {
        const std::size_t index = problem.index_of(chromosome.order[g]);
        state.place(problem.components()[index], index, chromosome.rotated[g]);
    }
    return std::move(state).take();
}

}  // namespace stackplan
