#pragma once

// File formats: scenario JSON, front/archive/grid/sweep/analysis CSV.
// CSV files are UTF-8 with LF line endings and '.' decimals; real numbers
// are written in shortest round-trip form so re-reading is exact.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stackplan/evolution.hpp"
#include "stackplan/metrics.hpp"
#include "stackplan/model.hpp"
#include "stackplan/objectives.hpp"
#include "stackplan/parallel.hpp"

namespace stackplan::io {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed content (bad JSON, missing keys, unparsable CSV). Reported as a
/// validation failure by the CLI.
class FormatError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

std::string format_real(double v);
double parse_real(std::string_view text);

nlohmann::json scenario_to_json(const Scenario& s);
/// Structural parse only; call validate_scenario on the result.
Scenario scenario_from_json(const nlohmann::json& j);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& s, const nlohmann::json& metadata = {});

/// Hyphen-separated ids, "r" suffix on rotated genes: "3r-1-2".
std::string encode_chromosome(const Chromosome& c);
Chromosome decode_chromosome(std::string_view text);

struct FrontRow {
    ObjectiveVector objectives;
    Chromosome chromosome;
};

/// Header "j1,j2,j3,chromosome".
std::string front_csv(const std::vector<FrontRow>& rows);
std::vector<FrontRow> parse_front_csv(std::string_view text);

std::string archive_csv(const RunArchive& archive);
/// Rows in file order, generation 0 first.
std::vector<GenerationStats> parse_archive_stats(std::string_view text);
std::vector<PhaseTimings> parse_archive_timings(std::string_view text);

std::string power_grid_csv(const PowerGrid& grid);

std::string sweep_csv(const SweepTable& table);
std::string sweep_summary_csv(const SweepTable& table);

/// Header "run,g1,...,gG"; one row per run.
std::string matrix_csv(const Matrix& m);

}  // namespace stackplan::io
