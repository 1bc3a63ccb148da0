#include <atomic>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"

#include "dkg/kernels.hpp"

using dkg::cplx;
namespace k = dkg::kernels;

namespace {

std::vector<cplx> random_cplx(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (cplx& z : v) z = cplx(u(rng), u(rng));
  return v;
}

std::vector<double> random_real(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("pointwise scaling matches the serial reference bit for bit") {
  // sizes straddling the dispatch threshold
  for (std::size_t n : {7u, 1024u, 8192u, 100000u}) {
    std::vector<cplx> src = random_cplx(n, 1);
    std::vector<cplx> fac = random_cplx(n, 2);
    std::vector<double> rfac = random_real(n, 3);
    std::vector<cplx> a(n), b(n);

    k::scale_pointwise_serial(src, fac, a);
    k::scale_pointwise(src, fac, b);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(a[i] == b[i]);

    k::scale_pointwise_real_serial(src, rfac, a);
    k::scale_pointwise_real(src, rfac, b);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(a[i] == b[i]);
  }
}

TEST_CASE("pointwise scaling against hand values") {
  std::vector<cplx> src{{1.0, 2.0}, {0.0, -1.0}};
  std::vector<cplx> fac{{2.0, 0.0}, {0.0, 1.0}};
  std::vector<cplx> dst(2);
  k::scale_pointwise(src, fac, dst);
  CHECK(dst[0] == cplx(2.0, 4.0));
  CHECK(dst[1] == cplx(1.0, 0.0));
}

TEST_CASE("weighted sum of squares: exact small case and determinism") {
  std::vector<cplx> ones(10, cplx(1.0, 0.0));
  std::vector<double> w(10, 1.0);
  CHECK(k::weighted_sumsq(ones, w) == 10.0);
  CHECK(k::weighted_sumsq_serial(ones, w) == 10.0);

  std::vector<cplx> c = random_cplx(50000, 4);
  std::vector<double> wr = random_real(50000, 5);
  double s1 = k::weighted_sumsq(c, wr);
  double s2 = k::weighted_sumsq(c, wr);
  CHECK(s1 == s2);  // chunked accumulation is order-fixed
  CHECK(s1 == doctest::Approx(k::weighted_sumsq_serial(c, wr)).epsilon(1e-13));
}

TEST_CASE("truncated convolution matches a direct triple loop") {
  const int n = 32;
  std::vector<cplx> f = random_cplx(n, 6);
  std::vector<cplx> g = random_cplx(n, 7);
  std::vector<cplx> out(n), ref(n);
  const double scale = 0.37;

  for (int m = 0; m < n; ++m) {
    cplx acc = 0.0;
    // position p carries frequency index p - n/2
    for (int p = 0; p < n; ++p) {
      int q = (m - n / 2) - (p - n / 2) + n / 2;
      if (q < 0 || q >= n) continue;
      acc += f[p] * g[q];
    }
    ref[m] = scale * acc;
  }
  k::convolve_truncated(f, g, out, scale);
  for (int m = 0; m < n; ++m) {
    CHECK(out[m].real() == doctest::Approx(ref[m].real()).epsilon(1e-12));
    CHECK(out[m].imag() == doctest::Approx(ref[m].imag()).epsilon(1e-12));
  }

  std::vector<cplx> out_ser(n);
  k::convolve_truncated_serial(f, g, out_ser, scale);
  for (int m = 0; m < n; ++m) CHECK(out[m] == out_ser[m]);
}

TEST_CASE("convolution of deltas lands on the sum frequency") {
  const int n = 16;
  std::vector<cplx> f(n, 0.0), g(n, 0.0), out(n);
  f[n / 2 + 2] = 3.0;  // frequency index +2
  g[n / 2 - 5] = 2.0;  // frequency index -5
  k::convolve_truncated(f, g, out, 1.0);
  for (int m = 0; m < n; ++m) {
    if (m == n / 2 - 3)
      CHECK(out[m] == cplx(6.0, 0.0));
    else
      CHECK(out[m] == cplx(0.0, 0.0));
  }
}

TEST_CASE("parallel_for covers every index exactly once") {
  const std::size_t n = 10000;
  std::vector<std::atomic<int>> hits(n);
  for (auto& h : hits) h.store(0);
  k::parallel_for(n, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (std::size_t i = 0; i < n; ++i) REQUIRE(hits[i].load() == 1);
  k::parallel_for(0, [&](std::size_t) { REQUIRE(false); });
}

}  // TEST_SUITE
