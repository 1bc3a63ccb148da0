#include "dkg/kernels.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace dkg::kernels {

namespace {
constexpr std::size_t kPointwiseGrain = 1u << 15;
constexpr std::size_t kReduceGrain = 1u << 15;
constexpr std::size_t kReduceChunks = 64;
}  // namespace

void scale_pointwise_serial(std::span<const cplx> src, std::span<const cplx> factors,
                            std::span<cplx> dst) {
  const std::size_t n = src.size();
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] * factors[i];
}

void scale_pointwise(std::span<const cplx> src, std::span<const cplx> factors,
                     std::span<cplx> dst) {
  const std::int64_t n = static_cast<std::int64_t>(src.size());
  if (static_cast<std::size_t>(n) < kPointwiseGrain) {
    scale_pointwise_serial(src, factors, dst);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i] * factors[i];
}

void scale_pointwise_real_serial(std::span<const cplx> src, std::span<const double> factors,
                                 std::span<cplx> dst) {
  const std::size_t n = src.size();
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] * factors[i];
}

void scale_pointwise_real(std::span<const cplx> src, std::span<const double> factors,
                          std::span<cplx> dst) {
  const std::int64_t n = static_cast<std::int64_t>(src.size());
  if (static_cast<std::size_t>(n) < kPointwiseGrain) {
    scale_pointwise_real_serial(src, factors, dst);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i] * factors[i];
}

double weighted_sumsq_serial(std::span<const cplx> c, std::span<const double> w) {
  double acc = 0.0;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double re = c[i].real(), im = c[i].imag();
    acc += w[i] * w[i] * (re * re + im * im);
  }
  return acc;
}

double weighted_sumsq(std::span<const cplx> c, std::span<const double> w) {
  const std::size_t n = c.size();
  if (n < kReduceGrain) return weighted_sumsq_serial(c, w);
  std::array<double, kReduceChunks> partial{};
  const std::size_t chunk = (n + kReduceChunks - 1) / kReduceChunks;
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < static_cast<std::int64_t>(kReduceChunks); ++s) {
    const std::size_t lo = static_cast<std::size_t>(s) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi) partial[s] = weighted_sumsq_serial(c.subspan(lo, hi - lo), w.subspan(lo, hi - lo));
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

void convolve_truncated_serial(std::span<const cplx> f, std::span<const cplx> g,
                               std::span<cplx> out, double scale) {
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  const std::int64_t half = n / 2;
  for (std::int64_t m = 0; m < n; ++m) {
    cplx acc{0.0, 0.0};
    // frequency indices: km = m - half, kk = k - half, need km - kk + half in range
    for (std::int64_t k = 0; k < n; ++k) {
      const std::int64_t j = m - k + half;
      if (j >= 0 && j < n) acc += f[k] * g[j];
    }
    out[m] = scale * acc;
  }
}

void convolve_truncated(std::span<const cplx> f, std::span<const cplx> g,
                        std::span<cplx> out, double scale) {
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  const std::int64_t half = n / 2;
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < n; ++m) {
    cplx acc{0.0, 0.0};
    const std::int64_t klo = std::max<std::int64_t>(0, m + half - n + 1);
    const std::int64_t khi = std::min(n, m + half + 1);
    for (std::int64_t k = klo; k < khi; ++k) acc += f[k] * g[m - k + half];
    out[m] = scale * acc;
  }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace dkg::kernels
