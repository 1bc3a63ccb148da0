#include "dkg/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace dkg {

namespace {

// FFTW's planner is not thread-safe; executing plans on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx>& scratch(int which, std::size_t n) {
  thread_local std::unordered_map<long long, std::vector<cplx>> pool;
  auto& buf = pool[(static_cast<long long>(which) << 32) | static_cast<long long>(n)];
  if (buf.size() != n) buf.resize(n);
  return buf;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

Grid::Grid(double L, int N) : L_(L), n_(N) {
  freqs_.resize(n_);
  for (int i = 0; i < n_; ++i) freqs_[i] = std::numbers::pi * (i - n_ / 2) / L_;
  std::scoped_lock lk(planner_mutex());
  std::vector<cplx> a(2 * n_), b(2 * n_);
  // FFTW_UNALIGNED keeps the plans usable with any buffer and the executed
  // algorithm independent of runtime measurements, so results are reproducible.
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plan_fwd_ = fftw_plan_dft_1d(n_, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  plan_bwd_ = fftw_plan_dft_1d(n_, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  plan_fwd_pad_ =
      fftw_plan_dft_1d(2 * n_, as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
  plan_bwd_pad_ =
      fftw_plan_dft_1d(2 * n_, as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
}

Grid::~Grid() {
  std::scoped_lock lk(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_pad_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_pad_));
}

namespace {

// samples -> coeffs at one size; half = n/2 in mode index terms
void forward_impl(fftw_plan plan, std::span<const cplx> samples, std::span<cplx> coeffs,
                  double dx, int n) {
  auto& in = scratch(0, n);
  auto& out = scratch(1, n);
  std::copy(samples.begin(), samples.end(), in.begin());
  fftw_execute_dft(plan, as_fftw(in.data()), as_fftw(out.data()));
  const int half = n / 2;
  for (int i = 0; i < n; ++i) {
    const int k = i - half;
    const int m = i < half ? i + half : i - half;  // k mod n
    const double sgn = (k & 1) ? -1.0 : 1.0;       // e^{i pi k}
    coeffs[i] = dx * sgn * out[m];
  }
}

void backward_impl(fftw_plan plan, std::span<const cplx> coeffs, std::span<cplx> samples,
                   double inv_period, int n) {
  auto& in = scratch(0, n);
  auto& out = scratch(1, n);
  const int half = n / 2;
  for (int i = 0; i < n; ++i) {
    const int k = i - half;
    const int m = i < half ? i + half : i - half;
    const double sgn = (k & 1) ? -1.0 : 1.0;
    in[m] = sgn * coeffs[i];
  }
  fftw_execute_dft(plan, as_fftw(in.data()), as_fftw(out.data()));
  for (int j = 0; j < n; ++j) samples[j] = inv_period * out[j];
}

}  // namespace

void Grid::transform(std::span<const cplx> samples, std::span<cplx> coeffs) const {
  if (static_cast<int>(samples.size()) != n_ || static_cast<int>(coeffs.size()) != n_)
    throw ValidationError("transform: span size mismatch");
  forward_impl(static_cast<fftw_plan>(plan_fwd_), samples, coeffs, dx(), n_);
}

void Grid::inverse_transform(std::span<const cplx> coeffs, std::span<cplx> samples) const {
  if (static_cast<int>(samples.size()) != n_ || static_cast<int>(coeffs.size()) != n_)
    throw ValidationError("inverse_transform: span size mismatch");
  backward_impl(static_cast<fftw_plan>(plan_bwd_), coeffs, samples, 0.5 / L_, n_);
}

void Grid::transform_padded(std::span<const cplx> samples, std::span<cplx> coeffs) const {
  if (static_cast<int>(samples.size()) != 2 * n_ || static_cast<int>(coeffs.size()) != 2 * n_)
    throw ValidationError("transform_padded: span size mismatch");
  forward_impl(static_cast<fftw_plan>(plan_fwd_pad_), samples, coeffs, dx() / 2.0, 2 * n_);
}

void Grid::inverse_transform_padded(std::span<const cplx> coeffs, std::span<cplx> samples) const {
  if (static_cast<int>(samples.size()) != 2 * n_ || static_cast<int>(coeffs.size()) != 2 * n_)
    throw ValidationError("inverse_transform_padded: span size mismatch");
  backward_impl(static_cast<fftw_plan>(plan_bwd_pad_), coeffs, samples, 0.5 / L_, 2 * n_);
}

GridPtr make_grid(double L, int N) {
  if (!(L > 0.0)) throw ValidationError("make_grid: L must be positive");
  if (N < 8 || (N % 2) != 0) throw ValidationError("make_grid: N must be even and >= 8");
  return std::shared_ptr<const Grid>(new Grid(L, N));
}

}  // namespace dkg
