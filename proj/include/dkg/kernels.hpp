#pragma once

// Data-parallel inner loops used by the spectral layer. Every kernel has a
// serial reference implementation; the unsuffixed entry points dispatch to
// OpenMP above a size threshold. Reductions accumulate into a fixed number
// of chunk slots that are summed serially, so results do not depend on the
// number of threads.

#include <cstddef>
#include <functional>
#include <span>

#include "dkg/types.hpp"

namespace dkg::kernels {

// dst[i] = src[i] * factors[i]
void scale_pointwise_serial(std::span<const cplx> src, std::span<const cplx> factors,
                            std::span<cplx> dst);
void scale_pointwise(std::span<const cplx> src, std::span<const cplx> factors,
                     std::span<cplx> dst);

// dst[i] = src[i] * factors[i], real factors
void scale_pointwise_real_serial(std::span<const cplx> src, std::span<const double> factors,
                                 std::span<cplx> dst);
void scale_pointwise_real(std::span<const cplx> src, std::span<const double> factors,
                          std::span<cplx> dst);

// sum_i w[i]^2 |c[i]|^2
double weighted_sumsq_serial(std::span<const cplx> c, std::span<const double> w);
double weighted_sumsq(std::span<const cplx> c, std::span<const double> w);

// Truncated discrete convolution: out[m] = scale * sum_k f[k] g[m-k], all
// indices offset so that position i carries frequency index i - n/2. Entries
// of the sum with m-k outside [0, n) are dropped. O(n^2); this is the direct
// reference for the padded-FFT product.
void convolve_truncated_serial(std::span<const cplx> f, std::span<const cplx> g,
                               std::span<cplx> out, double scale);
void convolve_truncated(std::span<const cplx> f, std::span<const cplx> g,
                        std::span<cplx> out, double scale);

// Runs fn(i) for i in [0, n); items must be independent.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace dkg::kernels
