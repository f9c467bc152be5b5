#pragma once

// Subcommand drivers behind the `stackplan` executable. Each returns the
// process exit code and reports problems on `err`:
//   0 success, 1 invalid input (scenario or file content), 2 I/O failure,
//   3 optimisation aborted by an evaluation failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stackplan/benchmark.hpp"
#include "stackplan/evolution.hpp"
#include "stackplan/io.hpp"

namespace stackplan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitAborted = 3;

struct ParamOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> population;
    std::optional<int> generations;
    std::optional<int> workers;

    void apply(EvolutionParams& p) const;
};

struct GenerateOptions {
    BenchmarkKind kind = BenchmarkKind::cores48;
    std::filesystem::path out;
    BenchmarkOptions benchmark;
    ParamOverrides overrides;
};

struct RunOptions {
    std::filesystem::path scenario;
    std::filesystem::path out_dir;
    ParamOverrides overrides;
    int emit_grids = 0;
    double cell_mm = 0.1;
};

struct SweepOptions {
    std::filesystem::path scenario;
    std::filesystem::path out_dir;
    int workers_from = 1;
    int workers_to = 1;
    int repeats = 5;
    ParamOverrides overrides;
};

enum class AnalyzeMode { hv, convergence, profile };

struct AnalyzeOptions {
    AnalyzeMode mode = AnalyzeMode::hv;
    /// hv: "label=path" or "path" front files; other modes: archive files.
    std::vector<std::string> inputs;
    std::filesystem::path out_dir;
    std::optional<ObjectiveVector> reference;
};

int generate_command(const GenerateOptions& options, std::ostream& err);
int run_command(const RunOptions& options, std::ostream& err);
int sweep_command(const SweepOptions& options, std::ostream& err);
int analyze_command(const AnalyzeOptions& options, std::ostream& err);

/// "a..b" or a single number; throws std::invalid_argument.
std::pair<int, int> parse_range(const std::string& text);
AnalyzeMode parse_analyze_mode(const std::string& text);

/// Rows of the final non-dominated front in a canonical order (objectives,
/// then chromosome text), one row per distinct objective vector.
std::vector<io::FrontRow> front_rows(const Population& population);

struct PhaseShare {
    std::string phase;
    double seconds = 0.0;
    double share = 0.0;
};

/// Totals per phase over every generation of every archive. The last two
/// entries are "other" (bookkeeping outside the named phases) and "total".
std::vector<PhaseShare> profile(std::span<const std::vector<PhaseTimings>> archives);

}  // namespace stackplan::cli
