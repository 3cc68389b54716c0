// Timing comparison of the OpenMP estimator kernels against the serial
// reference implementations. Build with the normal toolchain and run:
//   ./build/bench/cocycle_bench [orbit_length] [samples]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "cocycle/heisenberg.hpp"
#include "cocycle/parallel.hpp"
#include "cocycle/reference.hpp"

using namespace cocycle;

namespace {

template <class F>
double time_ms(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms, double a, double b) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   |diff| %.3e\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms, std::abs(a - b));
}

} // namespace

int main(int argc, char** argv) {
    const long n = argc > 1 ? std::atol(argv[1]) : 50000;
    const int samples = argc > 2 ? std::atoi(argv[2]) : 32;
    std::printf("orbit length %ld, samples %d, threads %d\n", n, samples, par::max_threads());

    const HeisenbergModel model = heisenberg_model();
    const CocycleSpec ecu = ecu_cocycle(model);
    LyapOptions lopt;
    lopt.orbit_length = n;
    lopt.samples = samples;

    double a = 0, b = 0;
    const double s1 = time_ms([&] { a = ref::lyap_plus_direct(ecu, model.base, lopt); });
    const double p1 = time_ms([&] { b = lyap_plus_direct(ecu, model.base, lopt); });
    row("lyap_plus_direct", s1, p1, a, b);

    const double s2 = time_ms([&] { a = ref::lyap_sum_via_det(ecu, model.base, lopt); });
    const double p2 = time_ms([&] { b = lyap_sum_via_det(ecu, model.base, lopt); });
    row("lyap_sum_via_det", s2, p2, a, b);

    const TriangularCocycle tri = build_triangular(ecu, model.base);
    LyapThetaOptions topt;
    topt.orbit_length = n;
    topt.samples = samples;
    const double s3 = time_ms([&] { a = ref::lyap_plus_theta(tri, 0.05, topt); });
    const double p3 = time_ms([&] { b = lyap_plus_theta(tri, 0.05, topt).lambda_plus; });
    row("lyap_plus_theta", s3, p3, a, b);

    return 0;
}
