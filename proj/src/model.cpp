#include "stackplan/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "stackplan/rng.hpp"

namespace stackplan {

std::string_view to_string(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::core_a: return "core_a";
        case ComponentKind::core_b: return "core_b";
        case ComponentKind::memory: return "memory";
        case ComponentKind::crossbar: return "crossbar";
    }
    return "unknown";
}

ComponentKind parse_component_kind(std::string_view name) {
    if (name == "core_a") return ComponentKind::core_a;
    if (name == "core_b") return ComponentKind::core_b;
    if (name == "memory") return ComponentKind::memory;
    if (name == "crossbar") return ComponentKind::crossbar;
    throw std::invalid_argument("unknown component kind '" + std::string(name) + "'");
}

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

bool probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

std::string describe(const ComponentSpec& c) {
    std::ostringstream os;
    os << "component id=" << c.id << " kind=" << to_string(c.kind) << " length_mm=" << c.length_mm
       << " width_mm=" << c.width_mm << " power_w=" << c.power_w;
    return os.str();
}

std::string describe(const NetEdge& e) {
    std::ostringstream os;
    os << "netlist edge (" << e.a << "," << e.b << "," << e.weight << ")";
    return os.str();
}

}  // namespace

Scenario validate_scenario(Scenario raw) {
    const ChipSpec& chip = raw.chip;
    if (!positive_finite(chip.length_mm) || !positive_finite(chip.width_mm) ||
        !positive_finite(chip.layer_thickness_mm)) {
        std::ostringstream os;
        os << "non-positive dimension in chip (length_mm=" << chip.length_mm
           << ", width_mm=" << chip.width_mm << ", layer_thickness_mm=" << chip.layer_thickness_mm
           << ")";
        fail(os.str());
    }
    if (chip.layers < 1) fail("chip must have at least one layer, got " + std::to_string(chip.layers));

    if (raw.components.empty()) fail("scenario has no components");

    std::set<ComponentId> ids;
    double footprint = 0.0;
    const double min_side = std::min(chip.length_mm, chip.width_mm);
    for (const auto& c : raw.components) {
        if (!positive_finite(c.length_mm) || !positive_finite(c.width_mm))
            fail("non-positive dimension in " + describe(c));
        if (!std::isfinite(c.power_w) || c.power_w < 0.0)
            fail("negative power in " + describe(c));
        if (!ids.insert(c.id).second) fail("duplicate id in " + describe(c));
        // Blocks must fit in either orientation so every rotation flag decodes in bounds.
        if (std::max(c.length_mm, c.width_mm) > min_side)
            fail("component exceeds chip footprint: " + describe(c));
        footprint += c.area_mm2();
    }
    const double capacity = chip.layers * chip.layer_area_mm2();
    if (footprint > capacity * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "area overflow: components need " << footprint << " mm^2 but " << chip.layers
           << " layer(s) of " << chip.length_mm << "x" << chip.width_mm << " provide " << capacity;
        fail(os.str());
    }

    std::set<std::pair<ComponentId, ComponentId>> pairs;
    for (auto& e : raw.netlist.edges) {
        if (e.a == e.b) fail("self-loop " + describe(e));
        if (!ids.contains(e.a) || !ids.contains(e.b)) fail("dangling id in " + describe(e));
        if (!positive_finite(e.weight)) fail("non-positive weight in " + describe(e));
        if (e.a > e.b) std::swap(e.a, e.b);
        if (!pairs.emplace(e.a, e.b).second) fail("duplicate pair " + describe(e));
    }

    const EvolutionParams& p = raw.params;
    if (p.population_size < 2 || p.population_size % 2 != 0)
        fail("population_size must be a positive even number, got " +
             std::to_string(p.population_size));
    if (p.generations < 0) fail("generations must be non-negative");
    if (!probability(p.crossover_prob) || !probability(p.mutation_prob) ||
        !probability(p.rotation_prob))
        fail("operator probabilities must lie in [0,1]");
    if (p.workers < 1) fail("workers must be >= 1, got " + std::to_string(p.workers));
    return raw;
}

bool is_valid_chromosome(const Chromosome& c, std::span<const ComponentSpec> components) {
    if (c.order.size() != components.size() || c.rotated.size() != c.order.size()) return false;
    std::vector<ComponentId> a(c.order);
    std::vector<ComponentId> b;
    b.reserve(components.size());
    for (const auto& comp : components) b.push_back(comp.id);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

Chromosome random_chromosome(const Scenario& scenario, Rng& rng) {
    Chromosome c;
    c.order.reserve(scenario.components.size());
    for (const auto& comp : scenario.components) c.order.push_back(comp.id);
    for (std::size_t i = c.order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(c.order[i - 1], c.order[j]);
    }
    c.rotated.resize(c.order.size());
    for (std::size_t i = 0; i < c.rotated.size(); ++i) c.rotated[i] = (rng.next_u64() >> 63) != 0;
    return c;
}

Problem::Problem(Scenario scenario) : scenario_(std::move(scenario)) {
    index_.reserve(scenario_.components.size());
    for (std::size_t i = 0; i < scenario_.components.size(); ++i)
        index_.emplace(scenario_.components[i].id, i);
    adjacency_.resize(scenario_.components.size());
    for (const auto& e : scenario_.netlist.edges) {
        const auto ia = index_of(e.a);
        const auto ib = index_of(e.b);
        adjacency_[ia].push_back({ib, e.weight});
        adjacency_[ib].push_back({ia, e.weight});
    }
}

std::size_t Problem::index_of(ComponentId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown component id " + std::to_string(id));
    return it->second;
}

}  // namespace stackplan
