#include "stackplan/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "stackplan/objectives.hpp"

namespace stackplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::vector<EvalBatch> partition(std::size_t n, int n_workers) {
    if (n_workers < 1) throw std::invalid_argument("partition needs at least one worker");
    const auto w = static_cast<std::size_t>(n_workers);
    const std::size_t base = n / w;
    const std::size_t extra = n % w;
    std::vector<EvalBatch> batches;
    batches.reserve(w);
    std::size_t start = 0;
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t count = base + (k < extra ? 1 : 0);
        batches.push_back({start, count, static_cast<int>(k)});
        start += count;
    }
    return batches;
}

MasterWorkerEvaluator::MasterWorkerEvaluator(std::shared_ptr<const Problem> problem, int workers)
    : MasterWorkerEvaluator(
          [p = problem.get()](const Chromosome& c) { return stackplan::evaluate(c, *p); }, workers) {
    problem_ = std::move(problem);
}

MasterWorkerEvaluator::MasterWorkerEvaluator(Objective objective, int workers)
    : objective_(std::move(objective)) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    busy_.assign(static_cast<std::size_t>(workers), 0.0);
    failures_.resize(static_cast<std::size_t>(workers));
    threads_.reserve(static_cast<std::size_t>(workers));
    for (int id = 0; id < workers; ++id) threads_.emplace_back([this, id] { worker_loop(id); });
}

MasterWorkerEvaluator::~MasterWorkerEvaluator() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    work_ready_.notify_all();
    for (auto& t : threads_) t.join();
}

void MasterWorkerEvaluator::worker_loop(int id) {
    std::uint64_t seen = 0;
    const auto slot = static_cast<std::size_t>(id);
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            work_ready_.wait(lock, [&] { return stopping_ || epoch_ != seen; });
            if (stopping_) return;
            seen = epoch_;
        }
        const auto start = Clock::now();
        const EvalBatch batch = batches_[slot];
        for (std::size_t i = batch.start; i < batch.start + batch.count; ++i) {
            try {
                results_[i] = objective_(job_[i].chromosome);
            } catch (const std::exception& e) {
                failures_[slot] = std::pair{i, std::string(e.what())};
                break;
            } catch (...) {
                failures_[slot] = std::pair{i, std::string("unknown error")};
                break;
            }
        }
        busy_[slot] = seconds_since(start);
        {
            std::lock_guard lock(mutex_);
            --pending_;
        }
        work_done_.notify_one();
    }
}

EvaluationTimings MasterWorkerEvaluator::evaluate(std::span<Individual> individuals) {
    const auto start = Clock::now();
    {
        std::lock_guard lock(mutex_);
        job_ = individuals;
        batches_ = partition(individuals.size(), workers());
        results_.assign(individuals.size(), std::nullopt);
        std::fill(busy_.begin(), busy_.end(), 0.0);
        std::fill(failures_.begin(), failures_.end(), std::nullopt);
        pending_ = workers();
        ++epoch_;
    }
    work_ready_.notify_all();
    {
        std::unique_lock lock(mutex_);
        work_done_.wait(lock, [&] { return pending_ == 0; });
    }

    std::optional<std::pair<std::size_t, std::string>> first;
    for (const auto& f : failures_)
        if (f && (!first || f->first < first->first)) first = f;
    if (first) throw EvaluationError(first->first, first->second);

    for (std::size_t i = 0; i < individuals.size(); ++i) individuals[i].objectives = results_[i];
    job_ = {};
    return {seconds_since(start), busy_};
}

EvaluatedPopulation evaluate_population(Population population, std::shared_ptr<const Problem> problem,
                                        int n_workers) {
    MasterWorkerEvaluator evaluator(std::move(problem), n_workers);
    EvaluationTimings timings = evaluator.evaluate(population);
    return {std::move(population), std::move(timings)};
}

SweepTable speedup_sweep(const Scenario& scenario, std::span<const int> worker_counts, int repeats) {
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    for (int w : worker_counts)
        if (w < 1) throw std::invalid_argument("worker counts must be >= 1");
    auto problem = std::make_shared<const Problem>(scenario);

    std::map<int, std::vector<double>> walls;
    auto measure = [&](int w) {
        auto& times = walls[w];
        if (!times.empty()) return;
        Scenario s = scenario;
        s.params.workers = w;
        for (int r = 0; r < repeats; ++r) {
            MasterWorkerEvaluator evaluator(problem, w);
            const auto start = Clock::now();
            (void)run(s, evaluator);
            times.push_back(seconds_since(start));
        }
    };
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };

    measure(1);
    for (int w : worker_counts) measure(w);
    const double baseline = mean(walls.at(1));

    // The baseline is reported first even when it was not requested.
    std::vector<int> reported{1};
    for (int w : worker_counts)
        if (std::find(reported.begin(), reported.end(), w) == reported.end()) reported.push_back(w);

    SweepTable table;
    for (int w : reported) {
        const auto& times = walls.at(w);
        const double m = mean(times);
        const double speedup = w == 1 ? 1.0 : baseline / m;
        table.summary.push_back({w, m, speedup});
        for (int r = 0; r < repeats; ++r)
            table.rows.push_back({w, r + 1, times[static_cast<std::size_t>(r)], speedup});
    }
    return table;
}

}  // namespace stackplan
