#pragma once

// Deliberately naive reference implementations. Nothing here calls into the
// library beyond its plain data types, so tests compare two independent
// computations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "stackplan/decoder.hpp"
#include "stackplan/model.hpp"

namespace oracle {

using namespace stackplan;

inline Scenario make_scenario(double length, double width, int layers, double thickness,
                              std::vector<ComponentSpec> components, std::vector<NetEdge> edges = {}) {
    Scenario s;
    s.chip = {length, width, layers, thickness};
    s.components = std::move(components);
    s.netlist.edges = std::move(edges);
    s.params.population_size = 4;
    s.params.generations = 1;
    return validate_scenario(std::move(s));
}

inline ComponentSpec block(ComponentId id, double l, double w, double p) {
    return {id, ComponentKind::memory, l, w, p};
}

struct Breaches {
    std::int64_t overlapping_pairs = 0;
    std::int64_t out_of_bounds = 0;
};

inline Breaches check_floorplan(const Floorplan& fp, const ChipSpec& chip, double tol = 1e-9) {
    Breaches b;
    for (std::size_t i = 0; i < fp.blocks.size(); ++i) {
        const auto& p = fp.blocks[i];
        if (p.x_mm < -tol || p.y_mm < -tol || p.x_mm + p.eff_length_mm > chip.length_mm + tol ||
            p.y_mm + p.eff_width_mm > chip.width_mm + tol || p.layer < 0 || p.layer >= chip.layers)
            ++b.out_of_bounds;
        for (std::size_t j = 0; j < i; ++j) {
            const auto& q = fp.blocks[j];
            if (p.layer != q.layer) continue;
            const double ox = std::min(p.x_mm + p.eff_length_mm, q.x_mm + q.eff_length_mm) - std::max(p.x_mm, q.x_mm);
            const double oy = std::min(p.y_mm + p.eff_width_mm, q.y_mm + q.eff_width_mm) - std::max(p.y_mm, q.y_mm);
            if (ox > tol && oy > tol) ++b.overlapping_pairs;
        }
    }
    return b;
}

inline const PlacedBlock* find(const Floorplan& fp, ComponentId id) {
    for (const auto& b : fp.blocks)
        if (b.id == id) return &b;
    return nullptr;
}

inline const ComponentSpec* find(const std::vector<ComponentSpec>& cs, ComponentId id) {
    for (const auto& c : cs)
        if (c.id == id) return &c;
    return nullptr;
}

// Edges whose endpoints are not both placed are skipped, which lets the
// same function score partial floorplans.
inline double j2(const Floorplan& fp, const Netlist& net, const ChipSpec& chip) {
    double sum = 0.0;
    for (const auto& e : net.edges) {
        const auto* a = find(fp, e.a);
        const auto* b = find(fp, e.b);
        if (!a || !b) continue;
        sum += e.weight * (std::abs(a->x_mm - b->x_mm) + std::abs(a->y_mm - b->y_mm) +
                           std::abs(a->layer - b->layer) * chip.layer_thickness_mm);
    }
    return sum;
}

inline double j3(const Floorplan& fp, const std::vector<ComponentSpec>& cs, const ChipSpec& chip) {
    double sum = 0.0;
    const double t = chip.layer_thickness_mm;
    for (std::size_t i = 0; i < fp.blocks.size(); ++i)
        for (std::size_t j = i + 1; j < fp.blocks.size(); ++j) {
            const auto& a = fp.blocks[i];
            const auto& b = fp.blocks[j];
            const double dpa = find(cs, a.id)->power_w / (a.eff_length_mm * a.eff_width_mm);
            const double dpb = find(cs, b.id)->power_w / (b.eff_length_mm * b.eff_width_mm);
            const double dx = (a.x_mm + a.eff_length_mm / 2) - (b.x_mm + b.eff_length_mm / 2);
            const double dy = (a.y_mm + a.eff_width_mm / 2) - (b.y_mm + b.eff_width_mm / 2);
            const double dz = (a.layer * t + t / 2) - (b.layer * t + t / 2);
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            sum += dpa * dpb / (d < 1e-9 ? 1e-9 : d);
        }
    return sum;
}

inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    const bool le = a.j1 <= b.j1 && a.j2 <= b.j2 && a.j3 <= b.j3;
    const bool lt = a.j1 < b.j1 || a.j2 < b.j2 || a.j3 < b.j3;
    return le && lt;
}

/// Fronts by repeated filtering: peel off everything not dominated by a
/// remaining member.
inline std::vector<std::set<std::size_t>> fronts(const std::vector<ObjectiveVector>& v) {
    std::set<std::size_t> left;
    for (std::size_t i = 0; i < v.size(); ++i) left.insert(i);
    std::vector<std::set<std::size_t>> out;
    while (!left.empty()) {
        std::set<std::size_t> f;
        for (auto i : left) {
            bool dominated = false;
            for (auto j : left)
                if (dominates(v[j], v[i])) dominated = true;
            if (!dominated) f.insert(i);
        }
        for (auto i : f) left.erase(i);
        out.push_back(f);
    }
    return out;
}

/// Distinct non-dominated vectors, as a sorted set of tuples.
inline std::set<std::tuple<std::int64_t, double, double>> nondominated_set(const std::vector<ObjectiveVector>& v) {
    std::set<std::tuple<std::int64_t, double, double>> s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (dominates(v[j], v[i])) dominated = true;
        if (!dominated) s.insert({v[i].j1, v[i].j2, v[i].j3});
    }
    return s;
}

/// Crowding distance written out directly from the definition.
inline std::vector<double> crowding(const std::vector<ObjectiveVector>& v) {
    const std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    auto obj = [&](std::size_t i, int m) {
        return m == 0 ? static_cast<double>(v[i].j1) : m == 1 ? v[i].j2 : v[i].j3;
    };
    for (int m = 0; m < 3; ++m) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return obj(a, m) < obj(b, m); });
        d[idx.front()] = d[idx.back()] = INFINITY;
        const double lo = obj(idx.front(), m), hi = obj(idx.back(), m);
        if (hi == lo) continue;
        for (std::size_t k = 1; k + 1 < n; ++k) d[idx[k]] += (obj(idx[k + 1], m) - obj(idx[k - 1], m)) / (hi - lo);
    }
    return d;
}

/// Monte-Carlo estimate of the dominated volume inside [lower, ref].
inline double mc_hypervolume(const std::vector<std::vector<double>>& pts, const std::vector<double>& lower,
                             const std::vector<double>& ref, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t m = ref.size();
    double box = 1.0;
    for (std::size_t k = 0; k < m; ++k) box *= ref[k] - lower[k];
    std::size_t hits = 0;
    std::vector<double> s(m);
    for (std::size_t i = 0; i < samples; ++i) {
        for (std::size_t k = 0; k < m; ++k) s[k] = lower[k] + u(g) * (ref[k] - lower[k]);
        for (const auto& p : pts) {
            bool in = true;
            for (std::size_t k = 0; k < m && in; ++k) in = p[k] <= s[k];
            if (in) {
                ++hits;
                break;
            }
        }
    }
    return box * static_cast<double>(hits) / static_cast<double>(samples);
}

inline bool is_permutation_of(const Chromosome& c, std::vector<ComponentId> ids) {
    if (c.order.size() != ids.size() || c.rotated.size() != ids.size()) return false;
    std::vector<ComponentId> o = c.order;
    std::sort(o.begin(), o.end());
    std::sort(ids.begin(), ids.end());
    return o == ids;
}

/// Random scenario with integer-ish block sizes that fits with room to spare.
inline Scenario random_scenario(std::mt19937_64& g, int max_blocks = 12) {
    std::uniform_int_distribution<int> nb(1, max_blocks), side(1, 4), layers(1, 3), pw(0, 5);
    const int n = nb(g);
    std::vector<ComponentSpec> cs;
    double area = 0.0;
    for (int i = 0; i < n; ++i) {
        cs.push_back(block(i + 1, side(g) * 0.5, side(g) * 0.5, pw(g) * 0.7));
        area += cs.back().area_mm2();
    }
    const int nl = layers(g);
    const double chip_side = std::ceil(std::sqrt(area * 1.3 / nl) + 2.0);
    std::vector<NetEdge> edges;
    std::uniform_int_distribution<int> pick(1, n);
    std::set<std::pair<int, int>> seen;
    for (int k = 0; k < n; ++k) {
        int a = pick(g), b = pick(g);
        if (a == b) continue;
        if (!seen.insert(std::minmax(a, b)).second) continue;
        edges.push_back({a, b, 1.0 + (k % 3)});
    }
    return make_scenario(chip_side, chip_side, nl, 0.5, cs, edges);
}

}  // namespace oracle
