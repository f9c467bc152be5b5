#include "stackplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace stackplan {

Front extract_front(std::span<const ObjectiveVector> vectors, std::vector<std::size_t>* kept) {
    // Any dominator of v precedes v lexicographically, so one sweep in
    // lexicographic order only needs to test against members kept so far.
    std::vector<std::size_t> order(vectors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) { return std::tuple(vectors[i].j1, vectors[i].j2, vectors[i].j3); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

    std::vector<std::size_t> members;
    for (std::size_t i : order) {
        const ObjectiveVector& v = vectors[i];
        const bool covered = std::any_of(members.begin(), members.end(), [&](std::size_t m) {
            return vectors[m] == v || dominates(vectors[m], v);
        });
        if (!covered) members.push_back(i);
    }
    std::sort(members.begin(), members.end());

    Front front;
    front.reserve(members.size());
    for (std::size_t i : members) front.push_back(vectors[i]);
    if (kept) *kept = std::move(members);
    return front;
}

Front extract_front(const Population& population, std::vector<std::size_t>* kept) {
    std::vector<ObjectiveVector> vectors;
    vectors.reserve(population.size());
    for (const auto& ind : population) {
        if (!ind.objectives) throw std::invalid_argument("extract_front on an unevaluated individual");
        vectors.push_back(*ind.objectives);
    }
    return extract_front(vectors, kept);
}

namespace {

double hv_2d(std::vector<const Point*> pts, double rx, double ry) {
    std::sort(pts.begin(), pts.end(), [](const Point* a, const Point* b) { return (*a)[0] < (*b)[0]; });
    double area = 0.0;
    double best_y = ry;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        best_y = std::min(best_y, (*pts[i])[1]);
        const double next_x = i + 1 < pts.size() ? (*pts[i + 1])[0] : rx;
        area += (next_x - (*pts[i])[0]) * (ry - best_y);
    }
    return area;
}

// Slices along the last objective; each slab is the (d-1)-dimensional
// volume of the points at or below it.
double hv_recursive(std::vector<const Point*> pts, const Point& ref, std::size_t dims) {
    if (pts.empty()) return 0.0;
    if (dims == 1) {
        double lo = ref[0];
        for (const Point* p : pts) lo = std::min(lo, (*p)[0]);
        return ref[0] - lo;
    }
    if (dims == 2) return hv_2d(std::move(pts), ref[0], ref[1]);
    const std::size_t k = dims - 1;
    std::sort(pts.begin(), pts.end(), [k](const Point* a, const Point* b) { return (*a)[k] < (*b)[k]; });
    double volume = 0.0;
    std::vector<const Point*> prefix;
    prefix.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        prefix.push_back(pts[i]);
        const double next = i + 1 < pts.size() ? (*pts[i + 1])[k] : ref[k];
        const double depth = next - (*pts[i])[k];
        if (depth > 0.0) volume += depth * hv_recursive(prefix, ref, dims - 1);
    }
    return volume;
}

}  // namespace

double hypervolume(std::span<const Point> points, const Point& reference) {
    const std::size_t dims = reference.size();
    if (dims == 0) throw std::invalid_argument("hypervolume needs at least one objective");
    std::vector<const Point*> pts;
    pts.reserve(points.size());
    for (const Point& p : points) {
        if (p.size() != dims) throw std::invalid_argument("hypervolume point has wrong dimension");
        for (std::size_t k = 0; k < dims; ++k)
            if (!(p[k] <= reference[k]))
                throw std::invalid_argument("reference point is not weakly dominated by every front member");
        pts.push_back(&p);
    }
    return hv_recursive(std::move(pts), reference, dims);
}

double hypervolume(std::span<const ObjectiveVector> front, const ObjectiveVector& reference) {
    std::vector<Point> pts;
    pts.reserve(front.size());
    for (const auto& v : front) pts.push_back({static_cast<double>(v.j1), v.j2, v.j3});
    return hypervolume(pts, Point{static_cast<double>(reference.j1), reference.j2, reference.j3});
}

ObjectiveVector default_reference(std::span<const Front> fronts) {
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (const auto& f : fronts)
        for (const auto& v : f) {
            m1 = std::max(m1, static_cast<double>(v.j1));
            m2 = std::max(m2, v.j2);
            m3 = std::max(m3, v.j3);
        }
    auto scale = [](double m) { return m > 0.0 ? 1.1 * m : 1.0; };
    // J1 is integral; round the scaled bound up so it still covers every member.
    return {static_cast<std::int64_t>(std::ceil(scale(m1))), scale(m2), scale(m3)};
}

GenerationStats summarize(const GenerationRecord& record) {
    GenerationStats s;
    s.generation = record.generation;
    s.feasible = record.feasible.size();
    if (record.feasible.empty()) return s;
    s.j2_min = s.j3_min = std::numeric_limits<double>::infinity();
    s.j2_max = s.j3_max = -std::numeric_limits<double>::infinity();
    double sum2 = 0.0, sum3 = 0.0;
    for (const auto& v : record.feasible) {
        s.j2_min = std::min(s.j2_min, v.j2);
        s.j2_max = std::max(s.j2_max, v.j2);
        s.j3_min = std::min(s.j3_min, v.j3);
        s.j3_max = std::max(s.j3_max, v.j3);
        sum2 += v.j2;
        sum3 += v.j3;
    }
    const auto n = static_cast<double>(record.feasible.size());
    s.j2_mean = sum2 / n;
    s.j3_mean = sum3 / n;
    return s;
}

namespace {

Matrix make_matrix(std::size_t rows, std::size_t cols) { return {rows, cols, std::vector<double>(rows * cols, 0.0)}; }

void fill_and_scale(Matrix& mn, Matrix& mean, Matrix& mx, const std::vector<bool>& empty, double& lo,
                    double& hi) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < mx.data.size(); ++i)
        if (!empty[i]) worst = std::max(worst, mx.data[i]);
    if (!std::isfinite(worst)) worst = 0.0;
    for (Matrix* m : {&mn, &mean, &mx})
        for (std::size_t i = 0; i < m->data.size(); ++i)
            if (empty[i]) m->data[i] = worst;

    lo = std::numeric_limits<double>::infinity();
    hi = -std::numeric_limits<double>::infinity();
    for (const Matrix* m : {&mn, &mean, &mx})
        for (double v : m->data) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (mn.data.empty()) lo = hi = 0.0;
    const double range = hi - lo;
    for (Matrix* m : {&mn, &mean, &mx})
        for (double& v : m->data) v = range > 0.0 ? std::clamp((v - lo) / range, 0.0, 1.0) : 0.0;
}

}  // namespace

ConvergenceMatrices convergence_matrices(std::span<const std::vector<GenerationStats>> runs) {
    const std::size_t rows = runs.size();
    const std::size_t cols = rows ? runs.front().size() : 0;
    for (const auto& r : runs)
        if (r.size() != cols) throw std::invalid_argument("archives have inconsistent generation counts");

    ConvergenceMatrices out;
    for (Matrix* m : {&out.wire_min, &out.wire_mean, &out.wire_max, &out.thermal_min, &out.thermal_mean,
                      &out.thermal_max})
        *m = make_matrix(rows, cols);
    std::vector<bool> empty(rows * cols, false);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t g = 0; g < cols; ++g) {
            const GenerationStats& s = runs[r][g];
            if (s.feasible == 0) {
                empty[r * cols + g] = true;
                ++out.empty_cells;
                continue;
            }
            out.wire_min(r, g) = s.j2_min;
            out.wire_mean(r, g) = s.j2_mean;
            out.wire_max(r, g) = s.j2_max;
            out.thermal_min(r, g) = s.j3_min;
            out.thermal_mean(r, g) = s.j3_mean;
            out.thermal_max(r, g) = s.j3_max;
        }
    fill_and_scale(out.wire_min, out.wire_mean, out.wire_max, empty, out.wire_lo, out.wire_hi);
    fill_and_scale(out.thermal_min, out.thermal_mean, out.thermal_max, empty, out.thermal_lo,
                   out.thermal_hi);
    return out;
}

ConvergenceMatrices convergence_matrices(std::span<const RunArchive> archives) {
    std::vector<std::vector<GenerationStats>> runs;
    runs.reserve(archives.size());
    for (const auto& a : archives) {
        auto& stats = runs.emplace_back();
        for (const auto& g : a.generations) stats.push_back(summarize(g));
    }
    return convergence_matrices(runs);
}

namespace {

double percentile(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

BoxplotStats boxplot(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("boxplot of an empty sample");
    std::sort(values.begin(), values.end());
    BoxplotStats s;
    s.count = values.size();
    s.median = percentile(values, 0.5);
    s.q25 = percentile(values, 0.25);
    s.q75 = percentile(values, 0.75);
    const double iqr = s.q75 - s.q25;
    const double low_fence = s.q25 - 1.5 * iqr;
    const double high_fence = s.q75 + 1.5 * iqr;
    s.whisker_low = s.q25;
    s.whisker_high = s.q75;
    bool low_set = false;
    for (double v : values) {
        if (v < low_fence || v > high_fence) {
            s.outliers.push_back(v);
            continue;
        }
        if (!low_set) {
            s.whisker_low = v;
            low_set = true;
        }
        s.whisker_high = v;
    }
    return s;
}

std::map<std::string, HypervolumeSummary> hypervolume_comparison(
    const std::map<std::string, std::vector<Front>>& fronts_by_config, const ObjectiveVector& reference) {
    std::map<std::string, HypervolumeSummary> out;
    for (const auto& [config, fronts] : fronts_by_config) {
        if (fronts.empty()) throw std::invalid_argument("configuration '" + config + "' has no fronts");
        HypervolumeSummary summary;
        for (const auto& f : fronts) summary.volumes.push_back(hypervolume(f, reference));
        summary.stats = boxplot(summary.volumes);
        out.emplace(config, std::move(summary));
    }
    return out;
}

}  // namespace stackplan
