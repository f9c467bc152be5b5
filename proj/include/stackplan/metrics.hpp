#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "stackplan/evolution.hpp"
#include "stackplan/model.hpp"

namespace stackplan {

using Front = std::vector<ObjectiveVector>;

/// Maximal mutually non-dominated subset, duplicates collapsed, first
/// occurrence order preserved. Indices into the input are returned through
/// `kept` when non-null.
Front extract_front(std::span<const ObjectiveVector> vectors, std::vector<std::size_t>* kept = nullptr);
Front extract_front(const Population& population, std::vector<std::size_t>* kept = nullptr);

/// Objective-space point of arbitrary dimension, for hypervolume.
using Point = std::vector<double>;

/// Exact measure of the union of boxes [p, reference] over `points`.
/// Every point must weakly dominate the reference (p <= reference
/// componentwise); otherwise std::invalid_argument. Dominated and duplicate
/// points are allowed and do not change the result.
double hypervolume(std::span<const Point> points, const Point& reference);
double hypervolume(std::span<const ObjectiveVector> front, const ObjectiveVector& reference);

/// Componentwise maximum over all fronts times 1.1. A component whose maximum
/// is not positive (J1 over feasible fronts is 0) gets 1.0 so it contributes a
/// unit factor instead of collapsing every volume to zero.
ObjectiveVector default_reference(std::span<const Front> fronts);

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Rows are runs, columns generations 1..G. Wire and thermal matrices are each
/// min-max scaled to [0,1] jointly over their three matrices and all runs;
/// a degenerate range scales to 0. Generations without feasible members are
/// filled with that objective's worst raw value before scaling.
struct ConvergenceMatrices {
    Matrix wire_min, wire_mean, wire_max;
    Matrix thermal_min, thermal_mean, thermal_max;
    double wire_lo = 0.0, wire_hi = 0.0;        // raw scaling bounds
    double thermal_lo = 0.0, thermal_hi = 0.0;
    std::size_t empty_cells = 0;                // (run, generation) cells filled by the sentinel
};

/// Per-generation summary of feasible objective values, as stored in
/// archive files. Absent statistics mean no feasible member.
struct GenerationStats {
    int generation = 0;
    std::size_t feasible = 0;
    double j2_min = 0.0, j2_mean = 0.0, j2_max = 0.0;
    double j3_min = 0.0, j3_mean = 0.0, j3_max = 0.0;
};

GenerationStats summarize(const GenerationRecord& record);

/// Each inner vector is one run's generations 1..G.
ConvergenceMatrices convergence_matrices(std::span<const std::vector<GenerationStats>> runs);
ConvergenceMatrices convergence_matrices(std::span<const RunArchive> archives);

struct BoxplotStats {
    std::size_t count = 0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double whisker_low = 0.0;   // most extreme values inside 1.5 IQR of the box
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

/// Percentiles use linear interpolation between order statistics.
BoxplotStats boxplot(std::vector<double> values);

struct HypervolumeSummary {
    std::vector<double> volumes;
    BoxplotStats stats;
};

std::map<std::string, HypervolumeSummary> hypervolume_comparison(
    const std::map<std::string, std::vector<Front>>& fronts_by_config, const ObjectiveVector& reference);

}  // namespace stackplan
