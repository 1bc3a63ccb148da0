#pragma once

// Uniform periodic grid on [-L, L) with N points and the discrete realization
// of the line Fourier transform f^(xi) = \int e^{-i x xi} f(x) dx.
//
// Frequencies are xi_k = pi k / L for k in {-N/2, ..., N/2 - 1}, stored in
// increasing order: array position i carries k = i - N/2. The forward
// transform is the trapezoid rule, coeff_k = dx * sum_j e^{-i x_j xi_k} f_j,
// so a constant 1 has coeff 2L at k = 0 and cos(xi_1 x) has coeff L at
// k = +-1. The inverse is f_j = (2L)^{-1} sum_k e^{i x_j xi_k} coeff_k; the
// pair is an exact round trip.
//
// A 2N-point version of the same transform (position i <-> k = i - N) serves
// the padded products used for dealiasing.
//
// Transform plans are created once per grid under a global planner lock and
// are safe to execute concurrently.

#include <memory>
#include <span>
#include <vector>

#include "dkg/types.hpp"

namespace dkg {

class Grid {
 public:
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  double domain_half_length() const { return L_; }
  int size() const { return n_; }
  double dx() const { return 2.0 * L_ / n_; }
  double dxi() const { return freqs_[1] - freqs_[0]; }
  // magnitude of the unmatched band-edge frequency pi (N/2) / L
  double xi_max() const { return -freqs_[0]; }
  double x(int j) const { return -L_ + j * dx(); }
  const std::vector<double>& freqs() const { return freqs_; }
  double freq(int i) const { return freqs_[i]; }
  int index_of_mode(int k) const { return k + n_ / 2; }

  void transform(std::span<const cplx> samples, std::span<cplx> coeffs) const;
  void inverse_transform(std::span<const cplx> coeffs, std::span<cplx> samples) const;

  // 2N-point transforms on the same period; arrays have size 2N
  void transform_padded(std::span<const cplx> samples, std::span<cplx> coeffs) const;
  void inverse_transform_padded(std::span<const cplx> coeffs, std::span<cplx> samples) const;

 private:
  friend std::shared_ptr<const Grid> make_grid(double L, int N);
  Grid(double L, int N);

  double L_;
  int n_;
  std::vector<double> freqs_;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  void* plan_fwd_pad_ = nullptr;
  void* plan_bwd_pad_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

// Requires L > 0 and N even, N >= 8.
GridPtr make_grid(double L, int N);

}  // namespace dkg
