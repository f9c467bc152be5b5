#pragma once

// Data-parallel inner loops of the decoder and of the thermal objective.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant selected at runtime. Reductions accumulate in four interleaved
// lanes (element i feeds lane i % 4, lanes combined as (l0+l1)+(l2+l3), tail
// added last) in every backend, and only IEEE-exact operations are used, so
// all backends return bit-identical results. A run's output therefore does
// not depend on which CPU executed it.

#include <cstddef>
#include <string_view>

namespace stackplan::kernels {

/// Structure-of-arrays view over axis-aligned rectangles [x0,x1) x [y0,y1).
struct RectsView {
    const double* x0 = nullptr;
    const double* y0 = nullptr;
    const double* x1 = nullptr;
    const double* y1 = nullptr;
    std::size_t size = 0;
};

/// Structure-of-arrays view over weighted 3D points.
struct PointsView {
    const double* x = nullptr;
    const double* y = nullptr;
    const double* z = nullptr;
    const double* weight = nullptr;
    std::size_t size = 0;
};

struct Rect {
    double x0, y0, x1, y1;
};

struct OverlapTally {
    double area = 0.0;
    std::size_t count = 0;
};

// Two rectangles overlap when their intersection exceeds `tol` along both
// axes. Touching edges never overlap.

/// True if `query` overlaps any rectangle in `rects`.
bool any_overlap(const RectsView& rects, const Rect& query, double tol);
/// Number of rectangles overlapping `query` and the summed intersection area.
OverlapTally overlap_tally(const RectsView& rects, const Rect& query, double tol);
/// Sum over points of weight / max(distance(point, q), min_distance).
double inverse_distance_sum(const PointsView& points, double qx, double qy, double qz,
                            double min_distance);

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend backend);
bool backend_available(Backend backend);
/// Backend used by the dispatching entry points above. Defaults to the best
/// available one; the STACKPLAN_SIMD environment variable ("scalar" or
/// "avx2") overrides the default at startup.
Backend active_backend();
/// Throws std::invalid_argument if the backend is unavailable on this CPU.
void set_backend(Backend backend);

namespace scalar {
bool any_overlap(const RectsView& rects, const Rect& query, double tol);
OverlapTally overlap_tally(const RectsView& rects, const Rect& query, double tol);
double inverse_distance_sum(const PointsView& points, double qx, double qy, double qz,
                            double min_distance);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define STACKPLAN_HAVE_AVX2_KERNELS 1
namespace avx2 {
bool any_overlap(const RectsView& rects, const Rect& query, double tol);
OverlapTally overlap_tally(const RectsView& rects, const Rect& query, double tol);
double inverse_distance_sum(const PointsView& points, double qx, double qy, double qz,
                            double min_distance);
}  // namespace avx2
#endif

}  // namespace stackplan::kernels
