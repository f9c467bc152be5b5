#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "oracle.hpp"
#include "stackplan/benchmark.hpp"
#include "stackplan/cli.hpp"
#include "stackplan/io.hpp"

using namespace stackplan;
using oracle::block;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("stackplan_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Scenario tiny(int generations = 10) {
    std::vector<ComponentSpec> cs{block(1, 1, 1, 2), block(2, 1.5, 1, 1), block(3, 1, 0.5, 0.5),
                                  block(4, 2, 1, 3),  block(5, 1, 1, 0),   block(6, 0.5, 0.5, 1)};
    cs[0].kind = ComponentKind::core_a;
    cs[3].kind = ComponentKind::crossbar;
    Scenario s = oracle::make_scenario(3, 3, 2, 0.2, cs, {{1, 4, 1}, {2, 4, 1}, {3, 4, 2}, {5, 6, 0.5}});
    s.params.population_size = 12;
    s.params.generations = generations;
    s.params.seed = 5;
    return validate_scenario(s);
}

}  // namespace

TEST_CASE("reals round-trip") {
    for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 123456.789})
        CHECK(io::parse_real(io::format_real(v)) == v);
    CHECK_THROWS_AS(io::parse_real("1.5x"), io::FormatError);
}

TEST_CASE("scenario json round-trip") {
    const Scenario s = tiny();
    CHECK(validate_scenario(io::scenario_from_json(io::scenario_to_json(s))) == s);
    TempDir d;
    io::save_scenario(d.path / "s.json", s, {{"note", "x"}});
    CHECK(io::load_scenario(d.path / "s.json") == s);

    auto j = io::scenario_to_json(s);
    j.erase("chip");
    CHECK_THROWS_AS(io::scenario_from_json(j), io::FormatError);
    CHECK_THROWS_AS(io::load_scenario(d.path / "missing.json"), io::IoError);
}

TEST_CASE("chromosome text") {
    const Chromosome c{{3, 1, 2}, {true, false, false}};
    CHECK(io::encode_chromosome(c) == "3r-1-2");
    CHECK(io::decode_chromosome("3r-1-2") == c);
    CHECK_THROWS(io::decode_chromosome("3-x"));
}

TEST_CASE("front and archive csv round-trip") {
    const std::vector<io::FrontRow> rows{{{0, 1.5, 2.25}, {{2, 1}, {false, true}}}, {{1, 0.1, 3}, {{1, 2}, {true, true}}}};
    const std::string text = io::front_csv(rows);
    CHECK(text.rfind("j1,j2,j3,chromosome\n", 0) == 0);
    const auto back = io::parse_front_csv(text);
    REQUIRE(back.size() == 2);
    CHECK(back[0].objectives == rows[0].objectives);
    CHECK(back[1].chromosome == rows[1].chromosome);

    RunArchive a;
    a.initial.feasible = {{0, 4, 5}, {0, 2, 1}};
    a.generations.push_back({1, {}, {}});
    a.generations.push_back({2, {{0, 3, 3}}, {}});
    const auto stats = io::parse_archive_stats(io::archive_csv(a));
    REQUIRE(stats.size() == 3);
    CHECK(stats[0].feasible == 2);
    CHECK(stats[0].j2_mean == 3.0);
    CHECK(stats[0].j3_max == 5.0);
    CHECK(stats[1].feasible == 0);
    CHECK(stats[2].j3_min == 3.0);
    CHECK(io::parse_archive_timings(io::archive_csv(a)).size() == 3);
}

TEST_CASE("run writes a verifiable front") {
    TempDir d;
    io::save_scenario(d.path / "s.json", tiny());
    cli::RunOptions o;
    o.scenario = d.path / "s.json";
    o.out_dir = d.path / "out";
    o.emit_grids = 1;
    o.cell_mm = 0.5;
    std::ostringstream err;
    REQUIRE(cli::run_command(o, err) == cli::kExitOk);
    const auto rows = io::parse_front_csv(io::read_text(o.out_dir / "front.csv"));
    REQUIRE_FALSE(rows.empty());
    Problem p(tiny());
    for (const auto& r : rows) CHECK(evaluate(r.chromosome, p) == r.objectives);
    CHECK(fs::exists(o.out_dir / "archive.csv"));
    CHECK(fs::exists(o.out_dir / "run_meta.json"));
    CHECK(fs::exists(o.out_dir / "powergrid_0.csv"));
    CHECK(io::parse_archive_stats(io::read_text(o.out_dir / "archive.csv")).size() == 11);
}

TEST_CASE("front.csv is identical across worker counts") {
    TempDir d;
    io::save_scenario(d.path / "s.json", tiny(6));
    std::string first;
    for (int w : {1, 4}) {
        cli::RunOptions o;
        o.scenario = d.path / "s.json";
        o.out_dir = d.path / ("w" + std::to_string(w));
        o.overrides.workers = w;
        std::ostringstream err;
        REQUIRE(cli::run_command(o, err) == cli::kExitOk);
        const std::string text = io::read_text(o.out_dir / "front.csv");
        if (first.empty())
            first = text;
        else
            CHECK(text == first);
    }
}

TEST_CASE("exit codes") {
    TempDir d;
    std::ostringstream err;
    cli::RunOptions o;
    o.out_dir = d.path / "out";

    o.scenario = d.path / "absent.json";
    CHECK(cli::run_command(o, err) == cli::kExitIo);

    // Repeated netlist pair: invalid, and nothing is written.
    auto j = io::scenario_to_json(tiny());
    j["netlist"].push_back({4, 1, 1.0});
    io::write_text(d.path / "bad.json", j.dump());
    o.scenario = d.path / "bad.json";
    err.str("");
    CHECK(cli::run_command(o, err) == cli::kExitInvalid);
    CHECK(err.str().find("duplicate pair") != std::string::npos);
    CHECK_FALSE(fs::exists(o.out_dir));

    io::write_text(d.path / "garbage.json", "{ not json");
    o.scenario = d.path / "garbage.json";
    CHECK(cli::run_command(o, err) == cli::kExitInvalid);

    io::save_scenario(d.path / "s.json", tiny(2));
    o.scenario = d.path / "s.json";
    o.overrides.population = 7;
    CHECK(cli::run_command(o, err) == cli::kExitInvalid);
    CHECK_FALSE(fs::exists(o.out_dir));

    cli::AnalyzeOptions a;
    a.mode = cli::AnalyzeMode::hv;
    a.inputs = {(d.path / "nope.csv").string()};
    a.out_dir = d.path / "hv";
    CHECK(cli::analyze_command(a, err) == cli::kExitIo);
    io::write_text(d.path / "broken.csv", "j1,j2,j3,chromosome\n0,abc,1,1-2\n");
    a.inputs = {(d.path / "broken.csv").string()};
    CHECK(cli::analyze_command(a, err) == cli::kExitInvalid);
}

TEST_CASE("analyze modes on real runs") {
    TempDir d;
    io::save_scenario(d.path / "s.json", tiny(4));
    std::vector<std::string> fronts, archives;
    for (std::uint64_t seed : {1, 2, 3}) {
        cli::RunOptions o;
        o.scenario = d.path / "s.json";
        o.out_dir = d.path / ("r" + std::to_string(seed));
        o.overrides.seed = seed;
        std::ostringstream err;
        REQUIRE(cli::run_command(o, err) == cli::kExitOk);
        fronts.push_back((seed < 3 ? "a=" : "b=") + (o.out_dir / "front.csv").string());
        archives.push_back((o.out_dir / "archive.csv").string());
    }
    std::ostringstream err;
    cli::AnalyzeOptions hv{cli::AnalyzeMode::hv, fronts, d.path / "hv", std::nullopt};
    REQUIRE(cli::analyze_command(hv, err) == cli::kExitOk);
    CHECK(fs::exists(d.path / "hv" / "hv_summary.csv"));

    cli::AnalyzeOptions conv{cli::AnalyzeMode::convergence, archives, d.path / "conv", std::nullopt};
    REQUIRE(cli::analyze_command(conv, err) == cli::kExitOk);
    const std::string m = io::read_text(d.path / "conv" / "wire_min.csv");
    CHECK(m.rfind("run,g1,g2,g3,g4\n", 0) == 0);

    cli::AnalyzeOptions prof{cli::AnalyzeMode::profile, archives, d.path / "prof", std::nullopt};
    REQUIRE(cli::analyze_command(prof, err) == cli::kExitOk);
    CHECK(io::read_text(d.path / "prof" / "profile.csv").find("evaluation") != std::string::npos);
}

TEST_CASE("range parsing") {
    CHECK(cli::parse_range("1..8") == std::pair{1, 8});
    CHECK(cli::parse_range("3") == std::pair{3, 3});
    CHECK_THROWS_AS(cli::parse_range("8..1x"), std::invalid_argument);
}

TEST_CASE("benchmark generator") {
    const Scenario c48 = generate_benchmark(BenchmarkKind::cores48);
    CHECK(c48.components.size() == 126);
    CHECK(c48.chip.layers == 4);
    CHECK(c48.params.generations == 250);
    const Scenario c128 = generate_benchmark(BenchmarkKind::cores128);
    CHECK(c128.components.size() == 336);
    CHECK(c128.chip.layers == 9);
    CHECK(c128.params.generations == 336);
    for (const auto& c : c48.components) {
        if (c.kind == ComponentKind::core_a) {
            CHECK(c.power_w == 4.0);
            CHECK(c.area_mm2() == doctest::Approx(3.24));
        }
        if (c.kind == ComponentKind::core_b) {
            CHECK(c.power_w == 2.6);
            CHECK(c.area_mm2() == doctest::Approx(1.5));
        }
    }
    double footprint = 0;
    for (const auto& c : c48.components) footprint += c.area_mm2();
    CHECK(c48.chip.layer_area_mm2() >= 1.15 * footprint);

    BenchmarkOptions o;
    o.core_a_count = 32;
    CHECK(generate_benchmark(BenchmarkKind::cores48, o).components.size() == 122);
    o.layers = 0;
    CHECK_THROWS_AS(generate_benchmark(BenchmarkKind::cores48, o), ValidationError);
}
