#pragma once

// Domain types shared by every stage of the floorplanner: components, chip
// geometry, netlists, evolution parameters, chromosomes and individuals.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stackplan {

using ComponentId = std::int64_t;

enum class ComponentKind { core_a, core_b, memory, crossbar };

std::string_view to_string(ComponentKind kind);
/// Throws std::invalid_argument on an unknown name.
ComponentKind parse_component_kind(std::string_view name);

struct ComponentSpec {
    ComponentId id = 0;
    ComponentKind kind = ComponentKind::memory;
    double length_mm = 0.0;
    double width_mm = 0.0;
    double power_w = 0.0;

    double area_mm2() const { return length_mm * width_mm; }
    bool operator==(const ComponentSpec&) const = default;
};

struct ChipSpec {
    double length_mm = 0.0;
    double width_mm = 0.0;
    int layers = 1;
    double layer_thickness_mm = 1.0;

    double height_mm() const { return layers * layer_thickness_mm; }
    double layer_area_mm2() const { return length_mm * width_mm; }
    bool operator==(const ChipSpec&) const = default;
};

struct NetEdge {
    ComponentId a = 0;
    ComponentId b = 0;
    double weight = 1.0;
    bool operator==(const NetEdge&) const = default;
};

struct Netlist {
    std::vector<NetEdge> edges;
    bool operator==(const Netlist&) const = default;
};

struct EvolutionParams {
    int population_size = 100;
    int generations = 250;
    double crossover_prob = 0.9;
    double mutation_prob = 0.1;
    double rotation_prob = 0.1;
    std::uint64_t seed = 1;
    int workers = 1;
    bool operator==(const EvolutionParams&) const = default;
};

struct Scenario {
    ChipSpec chip;
    std::vector<ComponentSpec> components;
    Netlist netlist;
    EvolutionParams params;
    bool operator==(const Scenario&) const = default;
};

/// Raised for any scenario that breaks a model invariant. The message names
/// the offending record.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Checks every invariant and returns the scenario with netlist pairs in
/// canonical (min_id, max_id) order. Idempotent.
Scenario validate_scenario(Scenario raw);

/// Order in which components are placed, plus one rotation flag per gene.
/// rotated[i] annotates order[i] and travels with it.
struct Chromosome {
    std::vector<ComponentId> order;
    std::vector<bool> rotated;

    std::size_t size() const { return order.size(); }
    bool operator==(const Chromosome&) const = default;
};

/// True when order holds exactly the ids of `components`, each once, and the
/// flag vector has matching length.
bool is_valid_chromosome(const Chromosome& c, std::span<const ComponentSpec> components);

struct ObjectiveVector {
    std::int64_t j1 = 0;  // violated topological constraints
    double j2 = 0.0;      // weighted Manhattan wirelength, mm
    double j3 = 0.0;      // thermal interaction proxy

    bool feasible() const { return j1 == 0; }
    bool operator==(const ObjectiveVector&) const = default;
};

struct Individual {
    Chromosome chromosome;
    std::optional<ObjectiveVector> objectives;
    std::optional<int> rank;
    std::optional<double> crowding;
};

class Rng;

/// Fisher-Yates shuffle of the component ids followed by independent fair
/// rotation flags, all drawn from `rng`.
Chromosome random_chromosome(const Scenario& scenario, Rng& rng);

/// Read-only lookup structure derived from a validated scenario: id to index
/// mapping and per-component weighted adjacency. Shared by evaluation workers.
class Problem {
  public:
    struct Neighbor {
        std::size_t index;
        double weight;
    };

    explicit Problem(Scenario scenario);

    const Scenario& scenario() const { return scenario_; }
    const ChipSpec& chip() const { return scenario_.chip; }
    std::span<const ComponentSpec> components() const { return scenario_.components; }
    std::size_t size() const { return scenario_.components.size(); }

    /// Throws std::out_of_range for an unknown id.
    std::size_t index_of(ComponentId id) const;
    std::span<const Neighbor> neighbors(std::size_t index) const { return adjacency_[index]; }

  private:
    Scenario scenario_;
    std::unordered_map<ComponentId, std::size_t> index_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

}  // namespace stackplan
