#pragma once

// Exponentially weighted norms and the measured radius of analyticity.
//
// All norms are frequency-side Riemann sums: for weight w(xi),
//   norm = ( sum_k (w(xi_k) |c_k|)^2 * dxi )^{1/2},  dxi = pi / L,
// which discretizes || w(xi) f^(xi) ||_{L^2(dxi)} in the transform convention
// of grid.hpp. With w = e^{sigma |xi|} <xi>^s this is the analytic-smoothing
// norm; sigma = 0, s = 0 gives the frequency-side L^2 norm (the real-space
// sum-of-squares norm times sqrt(2 pi); see the transform tests).

#include <climits>

#include "dkg/field.hpp"

namespace dkg {

struct GevreyParams {
  double sigma = 0.0;
  double s = 0.0;
};

constexpr int kNoMode = INT_MIN;

// value is +infinity when a weighted term overflows, and also when the
// weighted spectrum does not decay across the top of the band, so that the
// sum is resolution-limited rather than convergent (the discrete shadow of a
// norm that diverges at the strip boundary). offending_mode is the frequency
// index k where this was detected.
struct NormValue {
  double value = 0.0;
  int offending_mode = kNoMode;
  bool finite() const { return offending_mode == kNoMode; }
};

NormValue gevrey_norm(const Field& f, GevreyParams p);

// Measurement-resolution variant: coefficients with |c| < abs_floor are
// treated as zero. Transform round-off leaves a flat noise floor near
// 1e-16 of the working scale on any computed product; at large sigma the
// weight amplifies that floor past the true tail, so norms of computed
// fields are only meaningful above a floor tied to the solution scale.
// No tail diagnosis is applied (flooring already removes the noise band).
NormValue gevrey_norm_floored(const Field& f, GevreyParams p, double abs_floor);

// floored at 1e-13 of the field's own largest coefficient
double measured_norm(const Field& f, GevreyParams p);

// gevrey_norm at sigma = s = 0 (always finite)
double l2_norm(const Field& f);

// dxi * sum_k a_k conj(b_k); the pairing under which l2_norm is the length
cplx inner(const Field& a, const Field& b);

// || psi_+ ||^2 + || psi_- ||^2 at sigma = s = 0
double charge(const Field& psi_p, const Field& psi_m);

// Spinor bookkeeping at strip width sigma: components for eps = -1, +1 of
// sum_pm || e^{eps sigma D} psi_pm ||^2, and their sum.
struct MSigma {
  double minus = 0.0;
  double plus = 0.0;
  double total = 0.0;
};

MSigma m_sigma(const Field& psi_p, const Field& psi_m, double sigma);

// sum_pm || psi_pm ||^2 in the e^{sigma |xi|} weight; satisfies
// m_prime <= m_sigma.total <= 2 m_prime
double m_prime(const Field& psi_p, const Field& psi_m, double sigma);

// sum_pm || wave_pm || in the (sigma, s = 1) weight
double n_sigma(const Field& wave_p, const Field& wave_m, double sigma);

// sum_pm || |D| wave_pm || in the (sigma, s = 0) weight (massless bookkeeping)
double n_prime(const Field& wave_p, const Field& wave_m, double sigma);

// Least-squares fit of log |c_k| against -sigma |xi_k| over a frequency
// window, skipping coefficients below a relative floor.
struct RadiusFitOptions {
  double window_lo_frac = 0.125;  // of xi_max
  double window_hi_frac = 0.5;
  double floor_rel = 1e-13;
  int min_modes = 8;
};

struct RadiusFit {
  double sigma_hat = 0.0;
  double residual = 0.0;  // rms of log-residuals over the fitted modes
  int n_modes = 0;
  // steepest decay the window can distinguish from no decay at the floor
  double grid_max_sigma = 0.0;
  bool entire = false;  // sigma_hat >= grid_max_sigma
};

RadiusFit estimate_radius(const Field& f, const RadiusFitOptions& opts = {});

}  // namespace dkg
