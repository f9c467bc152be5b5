#include "stackplan/kernels.hpp"

#if defined(STACKPLAN_HAVE_AVX2_KERNELS)

#include <immintrin.h>

// Only this translation unit contains AVX2 code, and only inside functions
// carrying the target attribute; nothing here may be inlined into generic
// code paths.

#define STACKPLAN_AVX2 __attribute__((target("avx2")))

namespace stackplan::kernels::avx2 {

namespace {

STACKPLAN_AVX2 inline __m256d overlap_mask(const RectsView& r, std::size_t i, __m256d qx0,
                                           __m256d qy0, __m256d qx1, __m256d qy1,
                                           __m256d tol, __m256d* area) {
    const __m256d ox = _mm256_sub_pd(_mm256_min_pd(qx1, _mm256_loadu_pd(r.x1 + i)),
                                     _mm256_max_pd(qx0, _mm256_loadu_pd(r.x0 + i)));
    const __m256d oy = _mm256_sub_pd(_mm256_min_pd(qy1, _mm256_loadu_pd(r.y1 + i)),
                                     _mm256_max_pd(qy0, _mm256_loadu_pd(r.y0 + i)));
    const __m256d mask = _mm256_and_pd(_mm256_cmp_pd(ox, tol, _CMP_GT_OQ),
                                       _mm256_cmp_pd(oy, tol, _CMP_GT_OQ));
    if (area) *area = _mm256_and_pd(mask, _mm256_mul_pd(ox, oy));
    return mask;
}

STACKPLAN_AVX2 inline double lane_sum(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

STACKPLAN_AVX2 inline double scalar_intersection(double a0, double a1, double b0, double b1) {
    const double hi = b1 < a1 ? b1 : a1;
    const double lo = a0 < b0 ? b0 : a0;
    return hi - lo;
}

}  // namespace

STACKPLAN_AVX2 bool any_overlap(const RectsView& r, const Rect& q, double tol) {
    const __m256d qx0 = _mm256_set1_pd(q.x0), qy0 = _mm256_set1_pd(q.y0);
    const __m256d qx1 = _mm256_set1_pd(q.x1), qy1 = _mm256_set1_pd(q.y1);
    const __m256d vtol = _mm256_set1_pd(tol);
    const std::size_t body = r.size - r.size % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        if (_mm256_movemask_pd(overlap_mask(r, i, qx0, qy0, qx1, qy1, vtol, nullptr)) != 0)
            return true;
    }
    for (std::size_t i = body; i < r.size; ++i) {
        if (scalar_intersection(q.x0, q.x1, r.x0[i], r.x1[i]) > tol &&
            scalar_intersection(q.y0, q.y1, r.y0[i], r.y1[i]) > tol)
            return true;
    }
    return false;
}

STACKPLAN_AVX2 OverlapTally overlap_tally(const RectsView& r, const Rect& q, double tol) {
    const __m256d qx0 = _mm256_set1_pd(q.x0), qy0 = _mm256_set1_pd(q.y0);
    const __m256d qx1 = _mm256_set1_pd(q.x1), qy1 = _mm256_set1_pd(q.y1);
    const __m256d vtol = _mm256_set1_pd(tol);
    __m256d acc = _mm256_setzero_pd();
    std::size_t count = 0;
    const std::size_t body = r.size - r.size % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        __m256d area;
        const int bits =
            _mm256_movemask_pd(overlap_mask(r, i, qx0, qy0, qx1, qy1, vtol, &area));
        if (bits != 0) {
            acc = _mm256_add_pd(acc, area);
            count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(bits)));
        }
    }
    double total = lane_sum(acc);
    for (std::size_t i = body; i < r.size; ++i) {
        const double ox = scalar_intersection(q.x0, q.x1, r.x0[i], r.x1[i]);
        const double oy = scalar_intersection(q.y0, q.y1, r.y0[i], r.y1[i]);
        if (ox > tol && oy > tol) {
            total += ox * oy;
            ++count;
        }
    }
    return {total, count};
}

STACKPLAN_AVX2 double inverse_distance_sum(const PointsView& p, double qx, double qy, double qz,
                                           double min_distance) {
    const __m256d vx = _mm256_set1_pd(qx), vy = _mm256_set1_pd(qy), vz = _mm256_set1_pd(qz);
    const __m256d floor = _mm256_set1_pd(min_distance);
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = p.size - p.size % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        const __m256d dx = _mm256_sub_pd(vx, _mm256_loadu_pd(p.x + i));
        const __m256d dy = _mm256_sub_pd(vy, _mm256_loadu_pd(p.y + i));
        const __m256d dz = _mm256_sub_pd(vz, _mm256_loadu_pd(p.z + i));
        const __m256d d2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                         _mm256_mul_pd(dz, dz));
        // max(d, floor) with d below floor replaced; d is never NaN here.
        const __m256d d = _mm256_max_pd(_mm256_sqrt_pd(d2), floor);
        acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_loadu_pd(p.weight + i), d));
    }
    double sum = lane_sum(acc);
    for (std::size_t i = body; i < p.size; ++i) {
        const double dx = qx - p.x[i];
        const double dy = qy - p.y[i];
        const double dz = qz - p.z[i];
        const __m128d d2 = _mm_set_sd(dx * dx + dy * dy + dz * dz);
        double d = _mm_cvtsd_f64(_mm_sqrt_sd(d2, d2));
        if (d < min_distance) d = min_distance;
        sum += p.weight[i] / d;
    }
    return sum;
}

}  // namespace stackplan::kernels::avx2

#endif
