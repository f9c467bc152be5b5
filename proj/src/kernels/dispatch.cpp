#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "stackplan/kernels.hpp"

namespace stackplan::kernels {

namespace {

struct KernelTable {
    Backend backend;
    bool (*any_overlap)(const RectsView&, const Rect&, double);
    OverlapTally (*overlap_tally)(const RectsView&, const Rect&, double);
    double (*inverse_distance_sum)(const PointsView&, double, double, double, double);
};

constexpr KernelTable kScalarTable{Backend::scalar, &scalar::any_overlap, &scalar::overlap_tally,
                                   &scalar::inverse_distance_sum};
#if defined(STACKPLAN_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2Table{Backend::avx2, &avx2::any_overlap, &avx2::overlap_tally,
                                 &avx2::inverse_distance_sum};
#endif

const KernelTable* table_for(Backend backend) {
#if defined(STACKPLAN_HAVE_AVX2_KERNELS)
    if (backend == Backend::avx2) return &kAvx2Table;
#endif
    return &kScalarTable;
}

const KernelTable* initial_table() {
    if (const char* env = std::getenv("STACKPLAN_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return &kScalarTable;
        if (want == "avx2" && backend_available(Backend::avx2)) return table_for(Backend::avx2);
    }
    return backend_available(Backend::avx2) ? table_for(Backend::avx2) : &kScalarTable;
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

}  // namespace

std::string_view to_string(Backend backend) {
    switch (backend) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend backend) {
    switch (backend) {
        case Backend::scalar: return true;
        case Backend::avx2:
#if defined(STACKPLAN_HAVE_AVX2_KERNELS)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

Backend active_backend() { return active().backend; }

void set_backend(Backend backend) {
    if (!backend_available(backend))
        throw std::invalid_argument("kernel backend " + std::string(to_string(backend)) +
                                    " is not available on this CPU");
    current().store(table_for(backend), std::memory_order_release);
}

bool any_overlap(const RectsView& rects, const Rect& query, double tol) {
    return active().any_overlap(rects, query, tol);
}

OverlapTally overlap_tally(const RectsView& rects, const Rect& query, double tol) {
    return active().overlap_tally(rects, query, tol);
}

double inverse_distance_sum(const PointsView& points, double qx, double qy, double qz,
                            double min_distance) {
    return active().inverse_distance_sum(points, qx, qy, qz, min_distance);
}

}  // namespace stackplan::kernels
