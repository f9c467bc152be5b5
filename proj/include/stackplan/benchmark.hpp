#pragma once

// Generators for the two heterogeneous many-core stacks used as benchmarks:
// 48 cores on 4 layers (126 units) and 128 cores on 9 layers (336 units).
//
// Core figures are the published ones (SPARC-class core_a: 3.24 mm^2, 4 W;
// Power6-class core_b: 1.5 mm^2, 2.6 W). Memory and crossbar figures, the
// block aspect ratios and the layer thickness are placeholders; generated
// files say so in their metadata.
//
// The published 48-core description lists 32 + 12 cores, which does not add
// up to 48; only 48 cores balance the 126-unit total, so the default split
// is 36 + 12 and both counts are overridable.

#include <optional>
#include <string_view>

#include <json.hpp>

#include "stackplan/model.hpp"

namespace stackplan {

enum class BenchmarkKind { cores48, cores128 };

std::string_view to_string(BenchmarkKind kind);
BenchmarkKind parse_benchmark_kind(std::string_view name);

struct BlockTemplate {
    double length_mm;
    double width_mm;
    double power_w;
};

struct BenchmarkOptions {
    std::optional<int> core_a_count;
    std::optional<int> core_b_count;
    std::optional<int> memory_count;
    std::optional<int> crossbar_count;
    std::optional<int> layers;

    BlockTemplate core_a{1.8, 1.8, 4.0};
    BlockTemplate core_b{1.5, 1.0, 2.6};
    BlockTemplate memory{1.5, 1.0, 1.0};    // placeholder
    BlockTemplate crossbar{2.0, 1.0, 1.5};  // placeholder
    double layer_thickness_mm = 0.1;        // placeholder
    double area_slack = 1.15;               // one layer's area / total footprint
    int cores_per_crossbar = 8;

    std::optional<EvolutionParams> params;  // defaults depend on the kind
};

/// Builds and validates the scenario. Throws ValidationError when overrides
/// make it infeasible.
Scenario generate_benchmark(BenchmarkKind kind, const BenchmarkOptions& options = {});

/// Provenance notes stored next to a generated scenario.
nlohmann::json benchmark_metadata(BenchmarkKind kind, const BenchmarkOptions& options);

}  // namespace stackplan
