// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. Criteria that need hardware this
// machine lacks print N/A with the reason.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "oracle.hpp"
#include "stackplan/benchmark.hpp"
#include "stackplan/cli.hpp"
#include "stackplan/evolution.hpp"
#include "stackplan/io.hpp"
#include "stackplan/metrics.hpp"
#include "stackplan/objectives.hpp"
#include "stackplan/parallel.hpp"

using namespace stackplan;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

void not_applicable(int id, const char* name, const std::string& detail) {
    std::printf("[N/A ] %d %s: %s\n", id, name, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double mean_of(const std::vector<ObjectiveVector>& v, double ObjectiveVector::*field) {
    double s = 0;
    for (const auto& x : v) s += x.*field;
    return v.empty() ? NAN : s / static_cast<double>(v.size());
}

fs::path scratch() {
    const fs::path p = fs::temp_directory_path() / ("stackplan_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// 3 reuses the sequential run written here.
void parallel_determinism(const fs::path& dir) {
    Scenario s = generate_benchmark(BenchmarkKind::cores48);
    s.params.seed = 42;
    s.params.population_size = 100;
    s.params.generations = 25;
    io::save_scenario(dir / "c48.json", s);

    std::string reference;
    bool identical = true;
    std::string sizes;
    const auto start = std::chrono::steady_clock::now();
    for (int w : {1, 2, 4, 8}) {
        cli::RunOptions o;
        o.scenario = dir / "c48.json";
        o.out_dir = dir / ("w" + std::to_string(w));
        o.overrides.workers = w;
        std::ostringstream err;
        if (cli::run_command(o, err) != cli::kExitOk) {
            report(1, "parallel determinism", false, "run failed: " + err.str());
            return;
        }
        const std::string text = io::read_text(o.out_dir / "front.csv");
        if (reference.empty())
            reference = text;
        else
            identical = identical && text == reference;
        sizes += " W" + std::to_string(w) + "=" + std::to_string(text.size()) + "B";
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(1, "parallel determinism", identical && !reference.empty(),
           "front.csv byte-identical for W in {1,2,4,8}:" + sizes + fmt(", %.1f s total", wall));
}

void evaluation_dominance(const fs::path& dir) {
    if (!fs::exists(dir / "w1" / "archive.csv")) {
        report(3, "evaluation dominance", false, "sequential run missing");
        return;
    }
    const auto timings = io::parse_archive_timings(io::read_text(dir / "w1" / "archive.csv"));
    const std::vector<std::vector<PhaseTimings>> runs{timings};
    const auto shares = cli::profile(runs);
    double share = 0;
    for (const auto& p : shares)
        if (p.phase == "evaluation") share = p.share;
    report(3, "evaluation dominance", share >= 0.80, fmt("evaluation share %.4f of total (threshold 0.80)", share));
}

void speedup() {
    const unsigned m = std::thread::hardware_concurrency();
    Scenario s = generate_benchmark(BenchmarkKind::cores48);
    s.params.population_size = 100;
    if (m < 4) {
        // The definitional part still holds on any machine.
        s.params.generations = 2;
        const std::vector<int> one{1};
        const SweepTable t = speedup_sweep(s, one, 1);
        const bool unit = t.summary.size() == 1 && t.summary[0].speedup == 1.0;
        if (!unit) {
            report(2, "speedup", false, "W=1 speedup is not exactly 1.0");
            return;
        }
        not_applicable(2, "speedup",
                       "needs >= 4 cores, machine reports " + std::to_string(m) + "; W=1 speedup = 1.0 verified");
        return;
    }
    s.params.generations = 50;
    const std::vector<int> counts{1, static_cast<int>(m)};
    const SweepTable t = speedup_sweep(s, counts, 3);
    const double at_m = t.summary.back().speedup;
    const bool pass = t.summary.front().speedup == 1.0 && at_m >= 0.6 * m;
    report(2, "speedup", pass, fmt("speedup %.3f at W=%.0f (threshold %.2f)", at_m, m, 0.6 * m));
}

void efficacy() {
    Scenario s = generate_benchmark(BenchmarkKind::cores48);
    s.params.population_size = 100;
    s.params.generations = 250;
    auto problem = std::make_shared<const Problem>(s);
    bool feasible_front = true, j3_ok = true, j2_ok = true;
    std::string j3_detail, j2_detail, front_detail;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        s.params.seed = seed;
        MasterWorkerEvaluator e(problem, 1);
        const RunResult r = run(s, e);
        const Front front = extract_front(r.population);
        const bool has = std::any_of(front.begin(), front.end(), [](const auto& v) { return v.feasible(); });
        feasible_front = feasible_front && has;
        const auto& g0 = r.archive.initial.feasible;
        const auto& gl = r.archive.generations.back().feasible;
        const double q3 = mean_of(gl, &ObjectiveVector::j3) / mean_of(g0, &ObjectiveVector::j3);
        const double q2 = mean_of(gl, &ObjectiveVector::j2) / mean_of(g0, &ObjectiveVector::j2);
        j3_ok = j3_ok && q3 <= 0.5;
        j2_ok = j2_ok && q2 <= 0.7;
        j3_detail += fmt(" %.3f", q3);
        j2_detail += fmt(" %.3f", q2);
        front_detail += " " + std::to_string(std::count_if(front.begin(), front.end(),
                                                           [](const auto& v) { return v.feasible(); }));
    }
    report(4, "efficacy (a) feasible final front", feasible_front, "feasible front members per seed:" + front_detail);
    report(4, "efficacy (b) J3 final/initial mean", j3_ok, "ratios per seed:" + j3_detail + " (threshold 0.5)");
    report(4, "efficacy (b) J2 final/initial mean", j2_ok, "ratios per seed:" + j2_detail + " (threshold 0.7)");
}

void hypervolume_oracle() {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> size(1, 20);
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
        std::vector<Point> pts;
        const int n = size(g);
        for (int i = 0; i < n; ++i) {
            const double a = u(g), b = u(g), c = u(g);
            const double norm = std::sqrt(a * a + b * b + c * c) + 1e-12;
            pts.push_back({a / norm, b / norm, c / norm});  // spread on the unit-sphere octant
        }
        const Point ref{1.1, 1.1, 1.1};
        Point lo{1.1, 1.1, 1.1};
        for (const auto& p : pts)
            for (int k = 0; k < 3; ++k) lo[k] = std::min(lo[k], p[k]);
        const double exact = hypervolume(pts, ref);
        const double mc = oracle::mc_hypervolume(pts, lo, ref, 1000000, 1000 + t);
        worst = std::max(worst, std::abs(exact - mc) / exact);
    }
    const std::vector<Point> l{{1, 2}, {2, 1}};
    const double two = hypervolume(l, Point{3, 3});
    report(5, "hypervolume oracle", worst <= 0.01 && two == 3.0,
           fmt("max relative MC error %.5f over 50 fronts (threshold 0.01); 2-D example = %.17g", worst, two));
}

void sorting_oracle() {
    std::mt19937_64 g(6);
    std::uniform_int_distribution<int> size(1, 200), j1(0, 3), coarse(0, 15);
    std::uniform_real_distribution<double> fine(0, 1);
    int mismatches = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = size(g);
        Population pop(n);
        std::vector<ObjectiveVector> v;
        for (auto& ind : pop) {
            // Alternate coarse grids (many ties) and continuous values.
            ind.objectives = t % 2 ? ObjectiveVector{j1(g), double(coarse(g)), double(coarse(g))}
                                   : ObjectiveVector{j1(g), fine(g), fine(g)};
            v.push_back(*ind.objectives);
        }
        const auto want = oracle::fronts(v);
        const auto got = fast_nondominated_sort(pop);
        bool same = got.size() == want.size();
        for (std::size_t k = 0; same && k < got.size(); ++k)
            same = std::set<std::size_t>(got[k].begin(), got[k].end()) == want[k];
        const Front f = extract_front(v);
        std::set<std::tuple<std::int64_t, double, double>> fs_;
        for (const auto& x : f) fs_.insert({x.j1, x.j2, x.j3});
        same = same && fs_.size() == f.size() && fs_ == oracle::nondominated_set(v);
        mismatches += !same;
    }
    report(6, "sorting oracle", mismatches == 0,
           std::to_string(mismatches) + " mismatching populations out of 100 (sizes 1..200)");
}

void operator_properties() {
    Rng rng(7);
    Scenario s;
    std::vector<ComponentId> ids;
    for (int i = 0; i < 30; ++i) {
        s.components.push_back(oracle::block(i * 3 + 1, 1, 1, 1));
        ids.push_back(i * 3 + 1);
    }
    int bad = 0;
    for (int t = 0; t < 10000; ++t) {
        const Chromosome a = random_chromosome(s, rng), b = random_chromosome(s, rng);
        auto [c1, c2] = cycle_crossover(a, b, 1.0, rng);
        bad += !oracle::is_permutation_of(c1, ids) || !oracle::is_permutation_of(c2, ids);
        Chromosome m = a;
        swap_mutation(m, 1.0, rng);
        rotation_mutation(m, 1.0, rng);
        bad += !oracle::is_permutation_of(m, ids);
    }
    auto make = [](std::vector<ComponentId> o) {
        Chromosome c{o, {}};
        c.rotated.assign(o.size(), false);
        return c;
    };
    const auto [w1, w2] = cycle_crossover(make({1, 2, 3, 4, 5, 6}), make({3, 1, 2, 5, 6, 4}), 1.0, rng);
    const bool worked = w1.order == std::vector<ComponentId>{1, 2, 3, 5, 6, 4} &&
                        w2.order == std::vector<ComponentId>{3, 1, 2, 4, 5, 6};
    report(7, "operator properties", bad == 0 && worked,
           std::to_string(bad) + " invalid children in 10^4 trials; worked example " + (worked ? "exact" : "wrong"));
}

void decode_soundness() {
    std::mt19937_64 g(8);
    int disagreements = 0, feasible = 0, total = 0;
    for (int sc = 0; sc < 50; ++sc) {
        const Scenario s = oracle::random_scenario(g, 25);
        Problem p(s);
        Rng rng(sc);
        for (int k = 0; k < 20; ++k, ++total) {
            const Floorplan fp = decode(random_chromosome(s, rng), p);
            const auto b = oracle::check_floorplan(fp, s.chip);
            disagreements += b.overlapping_pairs != fp.violations || b.out_of_bounds != 0;
            feasible += fp.violations == 0;
        }
    }
    // Overfull chips (deliberately unvalidated) exercise non-zero counts.
    int crowded = 0;
    for (int sc = 0; sc < 20; ++sc) {
        Scenario s = oracle::random_scenario(g, 25);
        double area = 0, longest = 0;
        for (const auto& c : s.components) area += c.area_mm2(), longest = std::max({longest, c.length_mm, c.width_mm});
        s.chip.length_mm = s.chip.width_mm = std::max(longest, std::sqrt(0.8 * area / s.chip.layers));
        Problem p(s);
        Rng rng(500 + sc);
        for (int k = 0; k < 10; ++k, ++crowded) {
            const Floorplan fp = decode(random_chromosome(s, rng), p);
            const auto b = oracle::check_floorplan(fp, s.chip);
            disagreements += b.overlapping_pairs != fp.violations || b.out_of_bounds != 0;
        }
    }
    report(8, "decode soundness", disagreements == 0,
           std::to_string(disagreements) + " disagreements with the O(n^2) checker over " + std::to_string(total) +
               " decodes on valid scenarios (" + std::to_string(feasible) + " feasible) and " +
               std::to_string(crowded) + " on overfull chips");
}

void grid_conservation() {
    std::mt19937_64 g(9);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        const Scenario s = oracle::random_scenario(g, 25);
        Problem p(s);
        Rng rng(t);
        const Floorplan fp = decode(random_chromosome(s, rng), p);
        double total = 0;
        for (const auto& c : s.components) total += c.power_w;
        const double cell = t % 2 ? 0.5 : 0.25;
        const double sum = power_density_map(fp, p, cell).total();
        worst = std::max(worst, total > 0 ? std::abs(sum - total) / total : std::abs(sum));
    }
    report(9, "power-grid conservation", worst <= 1e-9, fmt("max relative error %.3g (threshold 1e-9)", worst));
}

void benchmark_fidelity() {
    const Scenario a = generate_benchmark(BenchmarkKind::cores48);
    const Scenario b = generate_benchmark(BenchmarkKind::cores128);
    bool cores = true;
    for (const auto* s : {&a, &b})
        for (const auto& c : s->components) {
            if (c.kind == ComponentKind::core_a)
                cores = cores && c.power_w == 4.0 && std::abs(c.area_mm2() - 3.24) < 1e-12;
            if (c.kind == ComponentKind::core_b)
                cores = cores && c.power_w == 2.6 && std::abs(c.area_mm2() - 1.5) < 1e-12;
        }
    const bool pass = a.components.size() == 126 && a.chip.layers == 4 && b.components.size() == 336 &&
                      b.chip.layers == 9 && cores;
    report(10, "benchmark fidelity", pass,
           "cores48 " + std::to_string(a.components.size()) + " on " + std::to_string(a.chip.layers) +
               " layers; cores128 " + std::to_string(b.components.size()) + " on " + std::to_string(b.chip.layers) +
               " layers; core figures " + (cores ? "match" : "differ"));
}

}  // namespace

int main() {
    const fs::path dir = scratch();
    parallel_determinism(dir);
    speedup();
    evaluation_dominance(dir);
    efficacy();
    hypervolume_oracle();
    sorting_oracle();
    operator_properties();
    decode_soundness();
    grid_conservation();
    benchmark_fidelity();
    fs::remove_all(dir);
    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
