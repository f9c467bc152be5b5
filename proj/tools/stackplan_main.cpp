#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stackplan/cli.hpp"

namespace {

void add_overrides(CLI::App* cmd, stackplan::cli::ParamOverrides& o) {
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--pop", o.population, "Population size (even)");
    cmd->add_option("--gens", o.generations, "Number of generations");
    cmd->add_option("--workers", o.workers, "Evaluation worker threads");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace stackplan;
    CLI::App app{"Thermal-aware 3D floorplanner (NSGA-II with master-worker evaluation)"};
    app.require_subcommand(1);

    cli::GenerateOptions gen;
    std::string kind = "cores48";
    auto* generate = app.add_subcommand("generate", "Write a benchmark scenario file");
    generate->add_option("--kind", kind, "cores48 or cores128")->check(CLI::IsMember({"cores48", "cores128"}));
    generate->add_option("--out,-o", gen.out, "Output scenario JSON")->required();
    generate->add_option("--core-a", gen.benchmark.core_a_count, "Number of core_a (SPARC-class) cores");
    generate->add_option("--core-b", gen.benchmark.core_b_count, "Number of core_b (Power6-class) cores");
    generate->add_option("--memories", gen.benchmark.memory_count, "Number of memories");
    generate->add_option("--crossbars", gen.benchmark.crossbar_count, "Number of crossbars");
    generate->add_option("--layers", gen.benchmark.layers, "Number of layers");
    generate->add_option("--layer-thickness", gen.benchmark.layer_thickness_mm, "Layer thickness (mm)");
    generate->add_option("--slack", gen.benchmark.area_slack, "Chip area over total footprint");
    add_overrides(generate, gen.overrides);

    cli::RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Optimise a scenario");
    run_cmd->add_option("scenario", run.scenario, "Scenario JSON")->required();
    run_cmd->add_option("--out,-o", run.out_dir, "Output directory")->required();
    run_cmd->add_option("--emit-grids", run.emit_grids, "Power grids for the first k front rows");
    run_cmd->add_option("--cell-mm", run.cell_mm, "Power grid cell size (mm)");
    add_overrides(run_cmd, run.overrides);

    cli::SweepOptions sweep;
    std::string range = "1..1";
    auto* sweep_cmd = app.add_subcommand("sweep", "Measure speedup over a range of worker counts");
    sweep_cmd->add_option("scenario", sweep.scenario, "Scenario JSON")->required();
    sweep_cmd->add_option("--out,-o", sweep.out_dir, "Output directory")->required();
    sweep_cmd->add_option("--workers-range", range, "Worker counts a..b");
    sweep_cmd->add_option("--repeats", sweep.repeats, "Runs per worker count");
    sweep_cmd->add_option("--seed", sweep.overrides.seed, "RNG seed");
    sweep_cmd->add_option("--pop", sweep.overrides.population, "Population size (even)");
    sweep_cmd->add_option("--gens", sweep.overrides.generations, "Number of generations");

    cli::AnalyzeOptions analyze;
    std::string mode = "hv";
    std::string reference;
    auto* analyze_cmd = app.add_subcommand("analyze", "Hypervolume, convergence or profile analysis");
    analyze_cmd->add_option("--mode", mode, "hv, convergence or profile")
        ->check(CLI::IsMember({"hv", "convergence", "profile"}));
    analyze_cmd->add_option("inputs", analyze.inputs, "Front files ([label=]path) or archive files")->required();
    analyze_cmd->add_option("--out,-o", analyze.out_dir, "Output directory")->required();
    analyze_cmd->add_option("--reference", reference, "Hypervolume reference j1,j2,j3");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            gen.kind = parse_benchmark_kind(kind);
            return cli::generate_command(gen, std::cerr);
        }
        if (*run_cmd) return cli::run_command(run, std::cerr);
        if (*sweep_cmd) {
            std::tie(sweep.workers_from, sweep.workers_to) = cli::parse_range(range);
            return cli::sweep_command(sweep, std::cerr);
        }
        if (*analyze_cmd) {
            analyze.mode = cli::parse_analyze_mode(mode);
            if (!reference.empty()) {
                ObjectiveVector ref;
                char c1 = 0, c2 = 0;
                std::istringstream is(reference);
                if (!(is >> ref.j1 >> c1 >> ref.j2 >> c2 >> ref.j3) || c1 != ',' || c2 != ',')
                    throw std::invalid_argument("--reference expects j1,j2,j3");
                analyze.reference = ref;
            }
            return cli::analyze_command(analyze, std::cerr);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return cli::kExitInvalid;
    }
    return cli::kExitInvalid;
}
