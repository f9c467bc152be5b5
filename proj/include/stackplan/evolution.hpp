#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stackplan/model.hpp"
#include "stackplan/rng.hpp"

namespace stackplan {

using Population = std::vector<Individual>;

/// Pareto dominance, every objective minimised.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Deb's fast non-dominated sort. Returns fronts as index lists (indices in
/// ascending order within each front) and writes rank = front index into
/// every individual. All individuals must be evaluated.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(Population& population);

/// Crowding distance of each member of `front` (indices into population),
/// written into Individual::crowding. Boundary members get +infinity.
void crowding_distance(Population& population, std::span<const std::size_t> front);

/// Binary tournament over two distinct uniform draws (the second drawn from
/// the n-1 remaining positions): lower rank wins, then larger crowding, then
/// the first draw.
const Individual& tournament_select(const Population& population, Rng& rng);

/// Cycle crossover from position 0. With probability `probability` returns
/// the two children, otherwise copies of the parents. Rotation flags follow
/// their genes.
std::pair<Chromosome, Chromosome> cycle_crossover(const Chromosome& p1, const Chromosome& p2,
                                                  double probability, Rng& rng);

/// With probability `probability`, exchanges the genes (id and flag) at two
/// distinct uniform positions, drawn as in tournament_select.
void swap_mutation(Chromosome& c, double probability, Rng& rng);

/// With probability `probability`, toggles the rotation flag of one uniform
/// position.
void rotation_mutation(Chromosome& c, double probability, Rng& rng);

/// Elitist (mu + lambda) reduction: merges both populations, keeps whole
/// fronts while they fit and truncates the last by descending crowding
/// (lower merged index first on ties). Result has parents.size() members,
/// each carrying the rank and crowding computed on the merged set.
Population environmental_reduce(Population parents, Population offspring);

/// Wall-clock cost of one generation, seconds.
struct PhaseTimings {
    double evaluation = 0.0;
    double evaluation_max_worker = 0.0;  // busiest worker during evaluation
    double selection = 0.0;
    double crossover = 0.0;
    double mutation = 0.0;
    double reduction = 0.0;
    double total = 0.0;  // whole generation, including bookkeeping
};

struct GenerationRecord {
    int generation = 0;  // 0 is the initial population
    std::vector<ObjectiveVector> feasible;  // j1 == 0 members, population order
    PhaseTimings timings;
};

struct RunArchive {
    GenerationRecord initial;
    std::vector<GenerationRecord> generations;  // one per completed generation, 1..G
};

/// Busy-time figures an evaluator reports for one batch call.
struct EvaluationTimings {
    double wall_seconds = 0.0;
    std::vector<double> worker_busy_seconds;
};

/// Batch fitness capability used by the engine. Implementations fill in
/// `objectives` for every individual or throw without touching any.
class PopulationEvaluator {
  public:
    virtual ~PopulationEvaluator() = default;
    virtual EvaluationTimings evaluate(std::span<Individual> individuals) = 0;
};

/// Thrown when evaluation fails during run(); carries the generations that
/// completed before the failure.
class RunAborted : public std::runtime_error {
  public:
    RunAborted(const std::string& what, RunArchive archive)
        : std::runtime_error(what), archive_(std::move(archive)) {}
    const RunArchive& archive() const { return archive_; }

  private:
    RunArchive archive_;
};

struct RunResult {
    Population population;
    RunArchive archive;
};

/// NSGA-II generation loop. All randomness comes from one generator seeded
/// with params.seed and is consumed only on the calling thread.
RunResult run(const Scenario& scenario, PopulationEvaluator& evaluator);

}  // namespace stackplan
