#include "stackplan/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace stackplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double objective(const ObjectiveVector& v, int m) {
    switch (m) {
        case 0: return static_cast<double>(v.j1);
        case 1: return v.j2;
        default: return v.j3;
    }
}

const ObjectiveVector& objectives_of(const Individual& ind) {
    if (!ind.objectives) throw std::logic_error("individual has not been evaluated");
    return *ind.objectives;
}

}  // namespace

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.j1 > b.j1 || a.j2 > b.j2 || a.j3 > b.j3) return false;
    return a.j1 < b.j1 || a.j2 < b.j2 || a.j3 < b.j3;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(Population& population) {
    const std::size_t n = population.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0) return fronts;

    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        const ObjectiveVector& a = objectives_of(population[p]);
        for (std::size_t q = p + 1; q < n; ++q) {
            const ObjectiveVector& b = objectives_of(population[q]);
            if (dominates(a, b)) {
                dominated_by[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(b, a)) {
                dominated_by[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p)
        if (domination_count[p] == 0) current.push_back(p);

    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : current) {
            population[p].rank = static_cast<int>(fronts.size());
            for (std::size_t q : dominated_by[p])
                if (--domination_count[q] == 0) next.push_back(q);
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

void crowding_distance(Population& population, std::span<const std::size_t> front) {
    for (std::size_t i : front) population[i].crowding = 0.0;
    if (front.size() <= 2) {
        for (std::size_t i : front) population[i].crowding = std::numeric_limits<double>::infinity();
        return;
    }
    std::vector<std::size_t> sorted(front.begin(), front.end());
    for (int m = 0; m < 3; ++m) {
        std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
            return objective(objectives_of(population[a]), m) < objective(objectives_of(population[b]), m);
        });
        const double lo = objective(*population[sorted.front()].objectives, m);
        const double hi = objective(*population[sorted.back()].objectives, m);
        const double inf = std::numeric_limits<double>::infinity();
        population[sorted.front()].crowding = inf;
        population[sorted.back()].crowding = inf;
        if (!(hi > lo)) continue;
        for (std::size_t k = 1; k + 1 < sorted.size(); ++k) {
            double& d = *population[sorted[k]].crowding;
            if (d == inf) continue;
            d += (objective(*population[sorted[k + 1]].objectives, m) -
                  objective(*population[sorted[k - 1]].objectives, m)) /
                 (hi - lo);
        }
    }
}

const Individual& tournament_select(const Population& population, Rng& rng) {
    if (population.size() < 2) throw std::invalid_argument("tournament needs at least two individuals");
    const auto i = static_cast<std::size_t>(rng.uniform_index(population.size()));
    auto j = static_cast<std::size_t>(rng.uniform_index(population.size() - 1));
    if (j >= i) ++j;
    const Individual& a = population[i];
    const Individual& b = population[j];
    if (!a.rank || !b.rank || !a.crowding || !b.crowding)
        throw std::logic_error("tournament on an unsorted population");
    if (*a.rank != *b.rank) return *a.rank < *b.rank ? a : b;
    if (*b.crowding > *a.crowding) return b;
    return a;
}

std::pair<Chromosome, Chromosome> cycle_crossover(const Chromosome& p1, const Chromosome& p2,
                                                  double probability, Rng& rng) {
    const std::size_t n = p1.order.size();
    if (p2.order.size() != n || p1.rotated.size() != n || p2.rotated.size() != n)
        throw std::invalid_argument("cycle crossover on parents of different length");
    std::unordered_map<ComponentId, std::size_t> where;
    where.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!where.emplace(p1.order[i], i).second)
            throw std::invalid_argument("cycle crossover parent is not a permutation");
    std::vector<bool> seen(n, false);
    for (ComponentId id : p2.order) {
        auto it = where.find(id);
        if (it == where.end() || seen[it->second])
            throw std::invalid_argument("cycle crossover parents are not permutations of each other");
        seen[it->second] = true;
    }

    if (!rng.bernoulli(probability) || n == 0) return {p1, p2};

    std::vector<bool> in_cycle(n, false);
    std::size_t i = 0;
    do {
        in_cycle[i] = true;
        i = where.at(p2.order[i]);
    } while (i != 0);

    Chromosome c1 = p2;
    Chromosome c2 = p1;
    for (std::size_t k = 0; k < n; ++k) {
        if (!in_cycle[k]) continue;
        c1.order[k] = p1.order[k];
        c1.rotated[k] = p1.rotated[k];
        c2.order[k] = p2.order[k];
        c2.rotated[k] = p2.rotated[k];
    }
    return {std::move(c1), std::move(c2)};
}

void swap_mutation(Chromosome& c, double probability, Rng& rng) {
    if (c.order.size() < 2 || !rng.bernoulli(probability)) return;
    const auto i = static_cast<std::size_t>(rng.uniform_index(c.order.size()));
    auto j = static_cast<std::size_t>(rng.uniform_index(c.order.size() - 1));
    if (j >= i) ++j;
    std::swap(c.order[i], c.order[j]);
    const bool flag = c.rotated[i];
    c.rotated[i] = c.rotated[j];
    c.rotated[j] = flag;
}

void rotation_mutation(Chromosome& c, double probability, Rng& rng) {
    if (c.order.empty() || !rng.bernoulli(probability)) return;
    const auto i = static_cast<std::size_t>(rng.uniform_index(c.order.size()));
    c.rotated[i] = !c.rotated[i];
}

namespace {

void sort_and_crowd(Population& population) {
    for (const auto& front : fast_nondominated_sort(population)) crowding_distance(population, front);
}

}  // namespace

Population environmental_reduce(Population parents, Population offspring) {
    const std::size_t target = parents.size();
    Population merged = std::move(parents);
    merged.reserve(merged.size() + offspring.size());
    for (auto& ind : offspring) merged.push_back(std::move(ind));

    Population next;
    next.reserve(target);
    for (const auto& front : fast_nondominated_sort(merged)) {
        if (next.size() == target) break;
        crowding_distance(merged, front);
        if (next.size() + front.size() <= target) {
            for (std::size_t i : front) next.push_back(merged[i]);
            continue;
        }
        std::vector<std::size_t> order(front.begin(), front.end());
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return *merged[a].crowding > *merged[b].crowding;
        });
        for (std::size_t k = 0; next.size() < target; ++k) next.push_back(merged[order[k]]);
    }
    return next;
}

namespace {

GenerationRecord snapshot(int generation, const Population& population, const PhaseTimings& t) {
    GenerationRecord rec;
    rec.generation = generation;
    rec.timings = t;
    for (const auto& ind : population)
        if (ind.objectives && ind.objectives->feasible()) rec.feasible.push_back(*ind.objectives);
    return rec;
}

double busiest(const EvaluationTimings& t) {
    double m = 0.0;
    for (double b : t.worker_busy_seconds) m = std::max(m, b);
    return m;
}

}  // namespace

RunResult run(const Scenario& scenario, PopulationEvaluator& evaluator) {
    const EvolutionParams& params = scenario.params;
    const auto n = static_cast<std::size_t>(params.population_size);
    Rng rng(params.seed);
    RunArchive archive;

    auto evaluate = [&](std::span<Individual> batch, PhaseTimings& t) {
        const auto start = Clock::now();
        EvaluationTimings et;
        try {
            et = evaluator.evaluate(batch);
        } catch (const std::exception& e) {
            throw RunAborted(e.what(), archive);
        }
        t.evaluation = seconds_since(start);
        t.evaluation_max_worker = busiest(et);
    };

    const auto run_start = Clock::now();
    PhaseTimings t0;
    Population population(n);
    for (auto& ind : population) ind.chromosome = random_chromosome(scenario, rng);
    evaluate(population, t0);
    {
        const auto start = Clock::now();
        sort_and_crowd(population);
        t0.reduction = seconds_since(start);
    }
    t0.total = seconds_since(run_start);
    archive.initial = snapshot(0, population, t0);

    for (int g = 1; g <= params.generations; ++g) {
        const auto gen_start = Clock::now();
        PhaseTimings t;

        auto start = Clock::now();
        std::vector<const Individual*> mates(n);
        for (auto& m : mates) m = &tournament_select(population, rng);
        t.selection = seconds_since(start);

        start = Clock::now();
        Population offspring(n);
        for (std::size_t k = 0; k + 1 < n; k += 2) {
            auto [c1, c2] = cycle_crossover(mates[k]->chromosome, mates[k + 1]->chromosome,
                                            params.crossover_prob, rng);
            offspring[k].chromosome = std::move(c1);
            offspring[k + 1].chromosome = std::move(c2);
        }
        t.crossover = seconds_since(start);

        start = Clock::now();
        for (auto& child : offspring) {
            swap_mutation(child.chromosome, params.mutation_prob, rng);
            rotation_mutation(child.chromosome, params.rotation_prob, rng);
        }
        t.mutation = seconds_since(start);

        evaluate(offspring, t);

        start = Clock::now();
        population = environmental_reduce(std::move(population), std::move(offspring));
        t.reduction = seconds_since(start);

        t.total = seconds_since(gen_start);
        archive.generations.push_back(snapshot(g, population, t));
    }
    return {std::move(population), std::move(archive)};
}

}  // namespace stackplan
