#include "stackplan/cli.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <ostream>
#include <tuple>

#include "stackplan/kernels.hpp"
#include "stackplan/metrics.hpp"
#include "stackplan/objectives.hpp"
#include "stackplan/parallel.hpp"

namespace stackplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void ParamOverrides::apply(EvolutionParams& p) const {
    if (seed) p.seed = *seed;
    if (population) p.population_size = *population;
    if (generations) p.generations = *generations;
    if (workers) p.workers = *workers;
}

std::pair<int, int> parse_range(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) throw std::invalid_argument("bad range '" + text + "'");
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int v = to_int(text);
        return {v, v};
    }
    const int a = to_int(text.substr(0, dots));
    const int b = to_int(text.substr(dots + 2));
    if (a < 1 || b < a) throw std::invalid_argument("bad range '" + text + "'");
    return {a, b};
}

AnalyzeMode parse_analyze_mode(const std::string& text) {
    if (text == "hv") return AnalyzeMode::hv;
    if (text == "convergence") return AnalyzeMode::convergence;
    if (text == "profile") return AnalyzeMode::profile;
    throw std::invalid_argument("unknown analyze mode '" + text + "'");
}

std::vector<io::FrontRow> front_rows(const Population& population) {
    std::vector<std::size_t> kept;
    extract_front(population, &kept);
    std::vector<std::pair<io::FrontRow, std::string>> rows;
    rows.reserve(kept.size());
    for (std::size_t i : kept)
        rows.push_back({{*population[i].objectives, population[i].chromosome},
                        io::encode_chromosome(population[i].chromosome)});
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        const auto& x = a.first.objectives;
        const auto& y = b.first.objectives;
        return std::tie(x.j1, x.j2, x.j3, a.second) < std::tie(y.j1, y.j2, y.j3, b.second);
    });
    std::vector<io::FrontRow> out;
    out.reserve(rows.size());
    for (auto& r : rows) out.push_back(std::move(r.first));
    return out;
}

std::vector<PhaseShare> profile(std::span<const std::vector<PhaseTimings>> archives) {
    double eval = 0, sel = 0, cx = 0, mut = 0, red = 0, total = 0;
    for (const auto& a : archives)
        for (const auto& t : a) {
            eval += t.evaluation;
            sel += t.selection;
            cx += t.crossover;
            mut += t.mutation;
            red += t.reduction;
            total += t.total;
        }
    const double other = std::max(0.0, total - (eval + sel + cx + mut + red));
    auto share = [&](double v) { return total > 0.0 ? v / total : 0.0; };
    return {{"evaluation", eval, share(eval)}, {"selection", sel, share(sel)},
            {"crossover", cx, share(cx)},      {"mutation", mut, share(mut)},
            {"reduction", red, share(red)},    {"other", other, share(other)},
            {"total", total, total > 0.0 ? 1.0 : 0.0}};
}

namespace {

// Maps exceptions onto exit codes in one place.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const io::IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const RunAborted& e) {
        err << "optimisation aborted: " << e.what() << '\n';
        return kExitAborted;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    }
}

Scenario load_validated(const fs::path& path, const ParamOverrides& overrides) {
    Scenario s = io::load_scenario(path);
    overrides.apply(s.params);
    return validate_scenario(std::move(s));
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw io::IoError("cannot create directory " + dir.string());
}

std::string phase_csv(const std::vector<PhaseShare>& shares) {
    std::string out = "phase,seconds,share\n";
    for (const auto& s : shares) out += s.phase + ',' + io::format_real(s.seconds) + ',' + io::format_real(s.share) + '\n';
    return out;
}

}  // namespace

int generate_command(const GenerateOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        BenchmarkOptions bench = o.benchmark;
        EvolutionParams params = generate_benchmark(o.kind, bench).params;
        o.overrides.apply(params);
        bench.params = params;
        const Scenario s = generate_benchmark(o.kind, bench);
        io::save_scenario(o.out, s, benchmark_metadata(o.kind, bench));
        return kExitOk;
    });
}

int run_command(const RunOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario scenario = load_validated(o.scenario, o.overrides);
        if (o.emit_grids < 0) throw ValidationError("--emit-grids must be >= 0");
        auto problem = std::make_shared<const Problem>(scenario);
        if (o.emit_grids > 0) power_density_map(Floorplan{}, *problem, o.cell_mm);  // checks cell size

        ensure_dir(o.out_dir);
        MasterWorkerEvaluator evaluator(problem, scenario.params.workers);
        const auto start = std::chrono::steady_clock::now();
        RunResult result;
        try {
            result = run(scenario, evaluator);
        } catch (const RunAborted& e) {
            io::write_text(o.out_dir / "archive.csv", io::archive_csv(e.archive()));
            throw;
        }
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const auto rows = front_rows(result.population);
        io::write_text(o.out_dir / "front.csv", io::front_csv(rows));
        io::write_text(o.out_dir / "archive.csv", io::archive_csv(result.archive));
        const std::size_t grids = std::min(rows.size(), static_cast<std::size_t>(o.emit_grids));
        for (std::size_t i = 0; i < grids; ++i) {
            const Floorplan fp = decode(rows[i].chromosome, *problem);
            io::write_text(o.out_dir / ("powergrid_" + std::to_string(i) + ".csv"),
                           io::power_grid_csv(power_density_map(fp, *problem, o.cell_mm)));
        }

        const json meta = {{"version", STACKPLAN_VERSION},
                           {"scenario", o.scenario.string()},
                           {"seed", scenario.params.seed},
                           {"workers", scenario.params.workers},
                           {"population_size", scenario.params.population_size},
                           {"generations", scenario.params.generations},
                           {"kernel_backend", std::string(kernels::to_string(kernels::active_backend()))},
                           {"front_size", rows.size()},
                           {"power_grids", grids},
                           {"cell_mm", o.cell_mm},
                           {"wall_seconds", wall}};
        io::write_text(o.out_dir / "run_meta.json", meta.dump(2) + "\n");
        return kExitOk;
    });
}

int sweep_command(const SweepOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario scenario = load_validated(o.scenario, o.overrides);
        if (o.workers_from < 1 || o.workers_to < o.workers_from) throw ValidationError("invalid worker range");
        if (o.repeats < 1) throw ValidationError("--repeats must be >= 1");
        ensure_dir(o.out_dir);
        std::vector<int> workers;
        for (int w = o.workers_from; w <= o.workers_to; ++w) workers.push_back(w);
        const SweepTable table = speedup_sweep(scenario, workers, o.repeats);
        io::write_text(o.out_dir / "sweep.csv", io::sweep_csv(table));
        io::write_text(o.out_dir / "sweep_summary.csv", io::sweep_summary_csv(table));
        return kExitOk;
    });
}

namespace {

int analyze_hv(const AnalyzeOptions& o) {
    std::map<std::string, std::vector<Front>> fronts;
    std::map<std::string, std::vector<std::string>> sources;
    for (const auto& input : o.inputs) {
        const auto eq = input.find('=');
        const std::string label = eq == std::string::npos ? "default" : input.substr(0, eq);
        const std::string path = eq == std::string::npos ? input : input.substr(eq + 1);
        Front f;
        for (const auto& row : io::parse_front_csv(io::read_text(path))) f.push_back(row.objectives);
        fronts[label].push_back(extract_front(f));
        sources[label].push_back(path);
    }
    if (fronts.empty()) throw ValidationError("hv mode needs at least one front file");
    std::vector<Front> all;
    for (const auto& [label, list] : fronts) all.insert(all.end(), list.begin(), list.end());
    const ObjectiveVector ref = o.reference.value_or(default_reference(all));
    const auto summary = hypervolume_comparison(fronts, ref);

    ensure_dir(o.out_dir);
    std::string values = "config,index,source,hypervolume\n";
    std::string stats = "config,count,median,q25,q75,whisker_low,whisker_high,outliers\n";
    for (const auto& [label, s] : summary) {
        for (std::size_t i = 0; i < s.volumes.size(); ++i)
            values += label + ',' + std::to_string(i) + ',' + sources[label][i] + ',' + io::format_real(s.volumes[i]) + '\n';
        std::string outliers;
        for (double v : s.stats.outliers) outliers += (outliers.empty() ? "" : ";") + io::format_real(v);
        stats += label + ',' + std::to_string(s.stats.count) + ',' + io::format_real(s.stats.median) + ',' +
                 io::format_real(s.stats.q25) + ',' + io::format_real(s.stats.q75) + ',' +
                 io::format_real(s.stats.whisker_low) + ',' + io::format_real(s.stats.whisker_high) + ',' + outliers +
                 '\n';
    }
    io::write_text(o.out_dir / "hv_values.csv", values);
    io::write_text(o.out_dir / "hv_summary.csv", stats);
    io::write_text(o.out_dir / "hv_reference.csv", "j1,j2,j3\n" + std::to_string(ref.j1) + ',' +
                                                        io::format_real(ref.j2) + ',' + io::format_real(ref.j3) + '\n');
    return kExitOk;
}

int analyze_convergence(const AnalyzeOptions& o) {
    std::vector<std::vector<GenerationStats>> runs;
    for (const auto& path : o.inputs) {
        auto stats = io::parse_archive_stats(io::read_text(path));
        // Generation 0 is the random initial population, not an evolved one.
        std::erase_if(stats, [](const GenerationStats& s) { return s.generation == 0; });
        runs.push_back(std::move(stats));
    }
    if (runs.empty()) throw ValidationError("convergence mode needs at least one archive");
    ConvergenceMatrices m;
    try {
        m = convergence_matrices(runs);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    ensure_dir(o.out_dir);
    io::write_text(o.out_dir / "wire_min.csv", io::matrix_csv(m.wire_min));
    io::write_text(o.out_dir / "wire_mean.csv", io::matrix_csv(m.wire_mean));
    io::write_text(o.out_dir / "wire_max.csv", io::matrix_csv(m.wire_max));
    io::write_text(o.out_dir / "thermal_min.csv", io::matrix_csv(m.thermal_min));
    io::write_text(o.out_dir / "thermal_mean.csv", io::matrix_csv(m.thermal_mean));
    io::write_text(o.out_dir / "thermal_max.csv", io::matrix_csv(m.thermal_max));
    const json meta = {{"runs", m.wire_min.rows},
                       {"generations", m.wire_min.cols},
                       {"scaling", "global min-max per objective over all runs, generations and min/mean/max"},
                       {"wire_bounds", {m.wire_lo, m.wire_hi}},
                       {"thermal_bounds", {m.thermal_lo, m.thermal_hi}},
                       {"empty_cells", m.empty_cells},
                       {"empty_cell_rule", "cells without feasible members carry the objective's worst raw value"},
                       {"inputs", o.inputs}};
    io::write_text(o.out_dir / "convergence_meta.json", meta.dump(2) + "\n");
    return kExitOk;
}

int analyze_profile(const AnalyzeOptions& o) {
    std::vector<std::vector<PhaseTimings>> archives;
    for (const auto& path : o.inputs) archives.push_back(io::parse_archive_timings(io::read_text(path)));
    if (archives.empty()) throw ValidationError("profile mode needs at least one archive");
    ensure_dir(o.out_dir);
    io::write_text(o.out_dir / "profile.csv", phase_csv(profile(archives)));
    return kExitOk;
}

}  // namespace

int analyze_command(const AnalyzeOptions& o, std::ostream& err) {
    return guarded(err, [&] {
        switch (o.mode) {
            case AnalyzeMode::hv: return analyze_hv(o);
            case AnalyzeMode::convergence: return analyze_convergence(o);
            case AnalyzeMode::profile: return analyze_profile(o);
        }
        return kExitInvalid;
    });
}

}  // namespace stackplan::cli
