// Timing harness for the data-parallel kernels against their serial
// references. Prints one row per (kernel, size): serial and dispatched
// wall time per call plus the speedup, and cross-checks the results so a
// broken dispatch cannot look fast.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "dkg/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using dkg::cplx;
using clock_type = std::chrono::steady_clock;

std::vector<cplx> random_cplx(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (cplx& z : v) z = cplx(u(rng), u(rng));
  return v;
}

std::vector<double> random_real(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

template <class F>
double time_per_call(int reps, F&& f) {
  f();  // warm up, and let the dispatched path build its thread pool
  auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) f();
  auto t1 = clock_type::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void row(const char* name, std::size_t n, double serial, double dispatched,
         double diff) {
  std::printf("%-22s %9zu  %11.3e s  %11.3e s  %6.2fx  diff %.3e\n", name, n,
              serial, dispatched, serial / dispatched, diff);
}

void bench_size(std::size_t n, int reps) {
  std::mt19937_64 rng(12345 + n);
  std::vector<cplx> src = random_cplx(n, rng);
  std::vector<cplx> fac = random_cplx(n, rng);
  std::vector<double> w = random_real(n, rng);
  std::vector<cplx> out_s(n), out_p(n);

  double ts = time_per_call(reps, [&] {
    dkg::kernels::scale_pointwise_serial(src, fac, out_s);
  });
  double tp = time_per_call(reps, [&] {
    dkg::kernels::scale_pointwise(src, fac, out_p);
  });
  row("scale_pointwise", n, ts, tp, max_abs_diff(out_s, out_p));

  ts = time_per_call(reps, [&] {
    dkg::kernels::scale_pointwise_real_serial(src, w, out_s);
  });
  tp = time_per_call(reps, [&] {
    dkg::kernels::scale_pointwise_real(src, w, out_p);
  });
  row("scale_pointwise_real", n, ts, tp, max_abs_diff(out_s, out_p));

  double acc_s = 0.0, acc_p = 0.0;
  ts = time_per_call(reps, [&] {
    acc_s = dkg::kernels::weighted_sumsq_serial(src, w);
  });
  tp = time_per_call(reps, [&] {
    acc_p = dkg::kernels::weighted_sumsq(src, w);
  });
  row("weighted_sumsq", n, ts, tp, std::abs(acc_s - acc_p));
}

void bench_convolution(std::size_t n, int reps) {
  std::mt19937_64 rng(777 + n);
  std::vector<cplx> f = random_cplx(n, rng);
  std::vector<cplx> g = random_cplx(n, rng);
  std::vector<cplx> out_s(n), out_p(n);
  double ts = time_per_call(reps, [&] {
    dkg::kernels::convolve_truncated_serial(f, g, out_s, 0.5);
  });
  double tp = time_per_call(reps, [&] {
    dkg::kernels::convolve_truncated(f, g, out_p, 0.5);
  });
  row("convolve_truncated", n, ts, tp, max_abs_diff(out_s, out_p));
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp: %d thread(s)\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled at build time\n");
#endif
  std::printf("%-22s %9s  %13s  %13s  %7s\n", "kernel", "n", "serial",
              "dispatched", "speedup");
  for (std::size_t n : {1024u, 8192u, 65536u, 1048576u})
    bench_size(n, n >= 1048576 ? 20 : 200);
  for (std::size_t n : {256u, 1024u, 4096u}) bench_convolution(n, n >= 4096 ? 3 : 30);
  return 0;
}
