#include "stackplan/benchmark.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace stackplan {

std::string_view to_string(BenchmarkKind kind) {
    return kind == BenchmarkKind::cores48 ? "cores48" : "cores128";
}

BenchmarkKind parse_benchmark_kind(std::string_view name) {
    if (name == "cores48") return BenchmarkKind::cores48;
    if (name == "cores128") return BenchmarkKind::cores128;
    throw std::invalid_argument("unknown benchmark '" + std::string(name) + "'");
}

namespace {

struct Counts {
    int core_a, core_b, memory, crossbar, layers;
};

Counts counts_for(BenchmarkKind kind, const BenchmarkOptions& o) {
    const Counts base = kind == BenchmarkKind::cores48 ? Counts{36, 12, 72, 6, 4} : Counts{96, 32, 192, 16, 9};
    return {o.core_a_count.value_or(base.core_a), o.core_b_count.value_or(base.core_b),
            o.memory_count.value_or(base.memory), o.crossbar_count.value_or(base.crossbar),
            o.layers.value_or(base.layers)};
}

EvolutionParams default_params(BenchmarkKind kind) {
    EvolutionParams p;
    p.population_size = 100;
    // 128-core runs scale generations with the component count.
    p.generations = kind == BenchmarkKind::cores48 ? 250 : 336;
    return p;
}

}  // namespace

Scenario generate_benchmark(BenchmarkKind kind, const BenchmarkOptions& o) {
    const Counts n = counts_for(kind, o);
    if (n.core_a < 0 || n.core_b < 0 || n.memory < 0 || n.crossbar < 0)
        throw ValidationError("benchmark component counts must be non-negative");
    if (o.cores_per_crossbar < 1) throw ValidationError("cores_per_crossbar must be >= 1");

    Scenario s;
    s.params = o.params.value_or(default_params(kind));

    ComponentId next = 0;
    auto add = [&](ComponentKind k, const BlockTemplate& t, int count) {
        ComponentId first = next;
        for (int i = 0; i < count; ++i) s.components.push_back({next++, k, t.length_mm, t.width_mm, t.power_w});
        return first;
    };
    const ComponentId core0 = add(ComponentKind::core_a, o.core_a, n.core_a);
    add(ComponentKind::core_b, o.core_b, n.core_b);
    const ComponentId mem0 = add(ComponentKind::memory, o.memory, n.memory);
    const ComponentId xbar0 = add(ComponentKind::crossbar, o.crossbar, n.crossbar);
    const int cores = n.core_a + n.core_b;

    std::set<std::pair<ComponentId, ComponentId>> seen;
    auto connect = [&](ComponentId a, ComponentId b) {
        if (a == b) return;
        const auto key = std::minmax(a, b);
        if (seen.insert(key).second) s.netlist.edges.push_back({key.first, key.second, 1.0});
    };
    for (int k = 0; k < cores; ++k) {
        if (n.crossbar > 0) connect(core0 + k, xbar0 + (k / o.cores_per_crossbar) % n.crossbar);
        if (n.memory > 0) connect(core0 + k, mem0 + k % n.memory);
    }
    if (n.crossbar > 0)
        for (int m = cores; m < n.memory; ++m) connect(mem0 + m, xbar0 + (m - cores) % n.crossbar);
    if (n.crossbar > 1)
        for (int x = 0; x < n.crossbar; ++x) connect(xbar0 + x, xbar0 + (x + 1) % n.crossbar);

    double footprint = 0.0;
    for (const auto& c : s.components) footprint += c.area_mm2();
    s.chip.layers = n.layers;
    s.chip.layer_thickness_mm = o.layer_thickness_mm;
    if (n.layers >= 1) {
        // Each layer alone could hold every block with the requested slack.
        const double side = std::sqrt(footprint * o.area_slack);
        // Round up to 0.1 mm so the slack never drops below the requested one.
        const double side_tenths = std::ceil(side * 10.0 - 1e-9);
        s.chip.length_mm = s.chip.width_mm = side_tenths / 10.0;
    }
    return validate_scenario(std::move(s));
}

nlohmann::json benchmark_metadata(BenchmarkKind kind, const BenchmarkOptions& o) {
    const Counts n = counts_for(kind, o);
    nlohmann::json block = {
        {"core_a", {{"length_mm", o.core_a.length_mm}, {"width_mm", o.core_a.width_mm}, {"power_w", o.core_a.power_w}}},
        {"core_b", {{"length_mm", o.core_b.length_mm}, {"width_mm", o.core_b.width_mm}, {"power_w", o.core_b.power_w}}},
        {"memory", {{"length_mm", o.memory.length_mm}, {"width_mm", o.memory.width_mm}, {"power_w", o.memory.power_w}}},
        {"crossbar",
         {{"length_mm", o.crossbar.length_mm}, {"width_mm", o.crossbar.width_mm}, {"power_w", o.crossbar.power_w}}}};
    return {
        {"generator", "stackplan generate"},
        {"benchmark", std::string(to_string(kind))},
        {"counts",
         {{"core_a", n.core_a}, {"core_b", n.core_b}, {"memory", n.memory}, {"crossbar", n.crossbar}, {"layers", n.layers}}},
        {"blocks", block},
        {"placeholder_values",
         {"memory area and power", "crossbar area and power", "block aspect ratios (only core areas are published)",
          "layer_thickness_mm", "netlist topology"}},
        {"published_values", {"core_a area 3.24 mm^2 and power 4 W", "core_b area 1.5 mm^2 and power 2.6 W",
                               "component and layer counts"}},
        {"notes",
         {"The published 48-core core split (32 + 12) does not sum to 48; default split is 36 + 12.",
          "The published 128-core generation count appears as both 336 and 366; default is 336 (one per component)."}},
        {"area_slack", o.area_slack}};
}

}  // namespace stackplan
