#include <algorithm>
#include <cmath>

#include "stackplan/kernels.hpp"

namespace stackplan::kernels::scalar {

namespace {

inline double intersection(double a0, double a1, double b0, double b1) {
    return std::min(a1, b1) - std::max(a0, b0);
}

}  // namespace

bool any_overlap(const RectsView& r, const Rect& q, double tol) {
    for (std::size_t i = 0; i < r.size; ++i) {
        if (intersection(q.x0, q.x1, r.x0[i], r.x1[i]) > tol &&
            intersection(q.y0, q.y1, r.y0[i], r.y1[i]) > tol)
            return true;
    }
    return false;
}

OverlapTally overlap_tally(const RectsView& r, const Rect& q, double tol) {
    double lanes[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t count = 0;
    const std::size_t body = r.size - r.size % 4;
    for (std::size_t i = 0; i < body; ++i) {
        const double ox = intersection(q.x0, q.x1, r.x0[i], r.x1[i]);
        const double oy = intersection(q.y0, q.y1, r.y0[i], r.y1[i]);
        if (ox > tol && oy > tol) {
            lanes[i % 4] += ox * oy;
            ++count;
        }
    }
    double area = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (std::size_t i = body; i < r.size; ++i) {
        const double ox = intersection(q.x0, q.x1, r.x0[i], r.x1[i]);
        const double oy = intersection(q.y0, q.y1, r.y0[i], r.y1[i]);
        if (ox > tol && oy > tol) {
            area += ox * oy;
            ++count;
        }
    }
    return {area, count};
}

double inverse_distance_sum(const PointsView& p, double qx, double qy, double qz,
                            double min_distance) {
    auto term = [&](std::size_t i) {
        const double dx = qx - p.x[i];
        const double dy = qy - p.y[i];
        const double dz = qz - p.z[i];
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        return p.weight[i] / (d < min_distance ? min_distance : d);
    };
    double lanes[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = p.size - p.size % 4;
    for (std::size_t i = 0; i < body; ++i) lanes[i % 4] += term(i);
    double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (std::size_t i = body; i < p.size; ++i) sum += term(i);
    return sum;
}

}  // namespace stackplan::kernels::scalar
