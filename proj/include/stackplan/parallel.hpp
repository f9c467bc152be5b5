#pragma once

// Master-worker fitness evaluation. The calling thread is the master: it
// splits the population into contiguous slices, hands one slice to each
// worker thread, and blocks until every worker is done. Workers only read
// the shared problem and write disjoint result slots, so objective values do
// not depend on the worker count or on scheduling.

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "stackplan/evolution.hpp"
#include "stackplan/model.hpp"

namespace stackplan {

struct EvalBatch {
    std::size_t start = 0;
    std::size_t count = 0;
    int worker = 0;

    bool operator==(const EvalBatch&) const = default;
};

/// One contiguous batch per worker, sizes ceil(N/W) then floor(N/W), so that
/// exactly min(W, N) batches are non-empty.
std::vector<EvalBatch> partition(std::size_t n_individuals, int n_workers);

/// A failed evaluation, tagged with the population index that failed.
class EvaluationError : public std::runtime_error {
  public:
    EvaluationError(std::size_t index, const std::string& what)
        : std::runtime_error("evaluation of individual " + std::to_string(index) + " failed: " + what),
          index_(index) {}
    std::size_t index() const { return index_; }

  private:
    std::size_t index_;
};

class MasterWorkerEvaluator final : public PopulationEvaluator {
  public:
    using Objective = std::function<ObjectiveVector(const Chromosome&)>;

    /// Evaluates with decode + objectives on `problem`.
    MasterWorkerEvaluator(std::shared_ptr<const Problem> problem, int workers);
    /// Evaluates with an arbitrary pure objective; used for fault injection.
    MasterWorkerEvaluator(Objective objective, int workers);
    ~MasterWorkerEvaluator() override;

    MasterWorkerEvaluator(const MasterWorkerEvaluator&) = delete;
    MasterWorkerEvaluator& operator=(const MasterWorkerEvaluator&) = delete;

    int workers() const { return static_cast<int>(threads_.size()); }

    /// Blocking batch call; not reentrant. On failure no individual is
    /// modified and the lowest failing index is reported.
    EvaluationTimings evaluate(std::span<Individual> individuals) override;

  private:
    void worker_loop(int id);

    std::shared_ptr<const Problem> problem_;
    Objective objective_;

    std::mutex mutex_;
    std::condition_variable work_ready_;
    std::condition_variable work_done_;
    std::uint64_t epoch_ = 0;
    int pending_ = 0;
    bool stopping_ = false;

    // Per-dispatch state, written by the master before the epoch bump.
    std::span<Individual> job_;
    std::vector<EvalBatch> batches_;
    std::vector<std::optional<ObjectiveVector>> results_;
    std::vector<double> busy_;
    std::vector<std::optional<std::pair<std::size_t, std::string>>> failures_;

    std::vector<std::thread> threads_;
};

struct EvaluatedPopulation {
    Population population;
    EvaluationTimings timings;
};

/// One-shot helper: evaluates every individual with `n_workers` workers.
EvaluatedPopulation evaluate_population(Population population, std::shared_ptr<const Problem> problem,
                                        int n_workers);

struct SweepRow {
    int workers = 1;
    int run = 0;
    double wall_seconds = 0.0;
    double speedup = 1.0;  // mean wall at W=1 over mean wall at this W
};

struct SweepSummary {
    int workers = 1;
    double mean_wall_seconds = 0.0;
    double speedup = 1.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::vector<SweepSummary> summary;
};

/// Runs the whole optimisation `repeats` times per worker count. The W=1
/// baseline is always measured and reported first, even when absent from
/// `worker_counts`.
SweepTable speedup_sweep(const Scenario& scenario, std::span<const int> worker_counts, int repeats);

}  // namespace stackplan
