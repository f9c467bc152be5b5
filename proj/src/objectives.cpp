#include "stackplan/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "stackplan/kernels.hpp"

namespace stackplan {

std::int64_t violations_j1(const Floorplan& floorplan) { return floorplan.violations; }

std::int64_t count_overlapping_pairs(const Floorplan& fp) {
    std::int64_t count = 0;
    for (std::size_t i = 0; i < fp.blocks.size(); ++i) {
        const PlacedBlock& a = fp.blocks[i];
        for (std::size_t j = 0; j < i; ++j) {
            const PlacedBlock& b = fp.blocks[j];
            if (a.layer != b.layer) continue;
            const double ox = std::min(a.x_mm + a.eff_length_mm, b.x_mm + b.eff_length_mm) -
                              std::max(a.x_mm, b.x_mm);
            const double oy = std::min(a.y_mm + a.eff_width_mm, b.y_mm + b.eff_width_mm) -
                              std::max(a.y_mm, b.y_mm);
            if (ox > kGeometryTolerance && oy > kGeometryTolerance) ++count;
        }
    }
    return count;
}

double wirelength_j2(const Floorplan& fp, const Netlist& netlist, const ChipSpec& chip) {
    std::unordered_map<ComponentId, const PlacedBlock*> by_id;
    by_id.reserve(fp.blocks.size());
    for (const auto& b : fp.blocks) by_id.emplace(b.id, &b);
    auto lookup = [&](ComponentId id) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw std::invalid_argument("netlist references unplaced component " + std::to_string(id));
        return it->second;
    };
    const double t = chip.layer_thickness_mm;
    double total = 0.0;
    for (const auto& e : netlist.edges) {
        const PlacedBlock* a = lookup(e.a);
        const PlacedBlock* b = lookup(e.b);
        total += e.weight * (std::abs(a->x_mm - b->x_mm) + std::abs(a->y_mm - b->y_mm) +
                             std::abs(a->layer * t - b->layer * t));
    }
    return total;
}

double thermal_j3(const Floorplan& fp, std::span<const ComponentSpec> components,
                  const ChipSpec& chip) {
    std::unordered_map<ComponentId, double> power;
    power.reserve(components.size());
    for (const auto& c : components) power.emplace(c.id, c.power_w);

    const std::size_t n = fp.blocks.size();
    std::vector<double> cx(n), cy(n), cz(n), dp(n);
    const double t = chip.layer_thickness_mm;
    for (std::size_t i = 0; i < n; ++i) {
        const PlacedBlock& b = fp.blocks[i];
        const double area = b.eff_length_mm * b.eff_width_mm;
        if (!(area > 0.0)) throw std::invalid_argument("zero-area block " + std::to_string(b.id));
        auto it = power.find(b.id);
        if (it == power.end()) throw std::invalid_argument("unknown block id " + std::to_string(b.id));
        cx[i] = b.x_mm + b.eff_length_mm / 2;
        cy[i] = b.y_mm + b.eff_width_mm / 2;
        cz[i] = b.layer * t + t / 2;
        dp[i] = it->second / area;
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t k = i + 1;
        const kernels::PointsView rest{cx.data() + k, cy.data() + k, cz.data() + k, dp.data() + k, n - k};
        total += dp[i] * kernels::inverse_distance_sum(rest, cx[i], cy[i], cz[i], kMinCenterDistance);
    }
    return total;
}

ObjectiveVector evaluate(const Chromosome& chromosome, const Problem& problem) {
    const Floorplan fp = decode(chromosome, problem);
    return {violations_j1(fp), wirelength_j2(fp, problem.scenario().netlist, problem.chip()),
            thermal_j3(fp, problem.components(), problem.chip())};
}

double PowerGrid::total() const {
    double sum = 0.0;
    for (const auto& layer : layers)
        for (double v : layer) sum += v;
    return sum;
}

namespace {

std::size_t cells_along(double side, double cell) {
    const double ratio = side / cell;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(rounded * cell - side) > 1e-9)
        throw std::invalid_argument("cell size " + std::to_string(cell) + " mm does not divide " +
                                    std::to_string(side) + " mm");
    return static_cast<std::size_t>(rounded);
}

}  // namespace

PowerGrid power_density_map(const Floorplan& fp, const Problem& problem, double cell_mm) {
    if (!(cell_mm > 0.0) || !std::isfinite(cell_mm))
        throw std::invalid_argument("cell size must be positive");
    const ChipSpec& chip = problem.chip();
    PowerGrid grid;
    grid.cell_mm = cell_mm;
    grid.cells_x = cells_along(chip.length_mm, cell_mm);
    grid.cells_y = cells_along(chip.width_mm, cell_mm);
    grid.layers.assign(static_cast<std::size_t>(chip.layers),
                       std::vector<double>(grid.cells_x * grid.cells_y, 0.0));

    for (const auto& b : fp.blocks) {
        const auto& spec = problem.components()[problem.index_of(b.id)];
        const double area = b.eff_length_mm * b.eff_width_mm;
        const double x1 = b.x_mm + b.eff_length_mm;
        const double y1 = b.y_mm + b.eff_width_mm;
        const auto clamp_cell = [](double v, std::size_t cells) {
            return std::min(static_cast<std::size_t>(std::max(0.0, v)), cells - 1);
        };
        const std::size_t ix0 = clamp_cell(std::floor(b.x_mm / cell_mm), grid.cells_x);
        const std::size_t ix1 = clamp_cell(std::ceil(x1 / cell_mm) - 1.0, grid.cells_x);
        const std::size_t iy0 = clamp_cell(std::floor(b.y_mm / cell_mm), grid.cells_y);
        const std::size_t iy1 = clamp_cell(std::ceil(y1 / cell_mm) - 1.0, grid.cells_y);

        // Raw covered areas first, then renormalise so the block's power is
        // conserved exactly up to rounding even when cell edges round.
        std::vector<double> share;
        share.reserve((ix1 - ix0 + 1) * (iy1 - iy0 + 1));
        double covered = 0.0;
        for (std::size_t iy = iy0; iy <= iy1; ++iy) {
            const double cy0 = iy * cell_mm, cy1 = (iy + 1) * cell_mm;
            const double oy = std::max(0.0, std::min(y1, cy1) - std::max(b.y_mm, cy0));
            for (std::size_t ix = ix0; ix <= ix1; ++ix) {
                const double cx0 = ix * cell_mm, cx1 = (ix + 1) * cell_mm;
                const double ox = std::max(0.0, std::min(x1, cx1) - std::max(b.x_mm, cx0));
                share.push_back(ox * oy);
                covered += ox * oy;
            }
        }
        if (!(covered > 0.0)) covered = area;
        auto& layer = grid.layers[static_cast<std::size_t>(b.layer)];
        std::size_t k = 0;
        for (std::size_t iy = iy0; iy <= iy1; ++iy)
            for (std::size_t ix = ix0; ix <= ix1; ++ix)
                layer[iy * grid.cells_x + ix] += spec.power_w * (share[k++] / covered);
    }
    return grid;
}

}  // namespace stackplan
