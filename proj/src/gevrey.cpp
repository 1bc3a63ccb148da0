#include "dkg/gevrey.hpp"

#include <cmath>
#include <limits>

namespace dkg {

namespace {

// Decide whether the weighted squared terms t_k fail to decay across the top
// of the band. The top quarter of |xi| is compared with the quarter below it;
// if it carries at least half as much mass, and that mass is a visible
// fraction of the total, the Riemann sum is still growing with resolution.
constexpr double kTailRatio = 0.5;
constexpr double kTailVisible = 1e-8;

}  // namespace

NormValue gevrey_norm(const Field& f, GevreyParams p) {
  const auto& xs = f.grid->freqs();
  const double xi_max = f.grid->xi_max();
  const double dxi = f.grid->dxi();
  // flush threshold: coefficients below 1e-300 / e^{sigma xi_max} are noise
  // that the weight could amplify past the exponent range
  const double log_flush = -300.0 * std::log(10.0) - p.sigma * xi_max;

  double total = 0.0, band_hi = 0.0, band_mid = 0.0;
  int first_bad = kNoMode;
  int first_hi = kNoMode;
  for (int i = 0; i < f.size(); ++i) {
    const double mag = std::abs(f.c[i]);
    if (mag == 0.0) continue;
    if (p.sigma > 0.0 && std::log(mag) < log_flush) continue;
    const double axi = std::abs(xs[i]);
    const double w = std::exp(p.sigma * axi) * std::pow(1.0 + axi * axi, 0.5 * p.s);
    const double term = (w * mag) * (w * mag);
    if (!std::isfinite(term)) {
      if (first_bad == kNoMode) first_bad = i - f.size() / 2;
      total = term;
      break;
    }
    total += term;
    if (axi > 0.75 * xi_max) {
      band_hi += term;
      if (first_hi == kNoMode) first_hi = i - f.size() / 2;
    } else if (axi > 0.5 * xi_max) {
      band_mid += term;
    }
  }

  if (first_bad != kNoMode)
    return NormValue{std::numeric_limits<double>::infinity(), first_bad};
  if (p.sigma > 0.0 && total > 0.0 && band_hi >= kTailRatio * band_mid &&
      band_hi + band_mid >= kTailVisible * total)
    return NormValue{std::numeric_limits<double>::infinity(), first_hi};
  return NormValue{std::sqrt(total * dxi), kNoMode};
}

NormValue gevrey_norm_floored(const Field& f, GevreyParams p, double abs_floor) {
  const auto& xs = f.grid->freqs();
  const double dxi = f.grid->dxi();
  double total = 0.0;
  int first_bad = kNoMode;
  for (int i = 0; i < f.size(); ++i) {
    const double mag = std::abs(f.c[i]);
    if (mag < abs_floor || mag == 0.0) continue;
    const double axi = std::abs(xs[i]);
    const double w = std::exp(p.sigma * axi) * std::pow(1.0 + axi * axi, 0.5 * p.s);
    const double term = (w * mag) * (w * mag);
    if (!std::isfinite(term)) {
      if (first_bad == kNoMode) first_bad = i - f.size() / 2;
      return NormValue{std::numeric_limits<double>::infinity(), first_bad};
    }
    total += term;
  }
  return NormValue{std::sqrt(total * dxi), kNoMode};
}

double measured_norm(const Field& f, GevreyParams p) {
  return gevrey_norm_floored(f, p, 1e-13 * max_abs_coeff(f)).value;
}

double l2_norm(const Field& f) { return gevrey_norm(f, GevreyParams{0.0, 0.0}).value; }

cplx inner(const Field& a, const Field& b) {
  check_same_grid(a, b);
  cplx acc{0.0, 0.0};
  for (int i = 0; i < a.size(); ++i) acc += a.c[i] * std::conj(b.c[i]);
  return acc * a.grid->dxi();
}

double charge(const Field& psi_p, const Field& psi_m) {
  check_same_grid(psi_p, psi_m);
  double acc = 0.0;
  for (int i = 0; i < psi_p.size(); ++i)
    acc += std::norm(psi_p.c[i]) + std::norm(psi_m.c[i]);
  return acc * psi_p.grid->dxi();
}

MSigma m_sigma(const Field& psi_p, const Field& psi_m, double sigma) {
  check_same_grid(psi_p, psi_m);
  const auto& xs = psi_p.grid->freqs();
  double minus = 0.0, plus = 0.0;
  for (int i = 0; i < psi_p.size(); ++i) {
    const double dens = std::norm(psi_p.c[i]) + std::norm(psi_m.c[i]);
    if (dens == 0.0) continue;
    minus += std::exp(-2.0 * sigma * xs[i]) * dens;
    plus += std::exp(2.0 * sigma * xs[i]) * dens;
  }
  const double dxi = psi_p.grid->dxi();
  minus *= dxi;
  plus *= dxi;
  return MSigma{minus, plus, minus + plus};
}

double m_prime(const Field& psi_p, const Field& psi_m, double sigma) {
  check_same_grid(psi_p, psi_m);
  const auto& xs = psi_p.grid->freqs();
  double acc = 0.0;
  for (int i = 0; i < psi_p.size(); ++i) {
    const double dens = std::norm(psi_p.c[i]) + std::norm(psi_m.c[i]);
    if (dens == 0.0) continue;
    acc += std::exp(2.0 * sigma * std::abs(xs[i])) * dens;
  }
  return acc * psi_p.grid->dxi();
}

double n_sigma(const Field& wave_p, const Field& wave_m, double sigma) {
  return gevrey_norm(wave_p, GevreyParams{sigma, 1.0}).value +
         gevrey_norm(wave_m, GevreyParams{sigma, 1.0}).value;
}

double n_prime(const Field& wave_p, const Field& wave_m, double sigma) {
  check_same_grid(wave_p, wave_m);
  const auto& xs = wave_p.grid->freqs();
  const double dxi = wave_p.grid->dxi();
  double a = 0.0, b = 0.0;
  for (int i = 0; i < wave_p.size(); ++i) {
    const double w = std::abs(xs[i]) * std::exp(sigma * std::abs(xs[i]));
    a += w * w * std::norm(wave_p.c[i]);
    b += w * w * std::norm(wave_m.c[i]);
  }
  return std::sqrt(a * dxi) + std::sqrt(b * dxi);
}

RadiusFit estimate_radius(const Field& f, const RadiusFitOptions& opts) {
  const double peak = max_abs_coeff(f);
  if (peak == 0.0) throw ValidationError("estimate_radius: zero field");
  const double xi_max = f.grid->xi_max();
  const double lo = opts.window_lo_frac * xi_max;
  const double hi = opts.window_hi_frac * xi_max;
  const double floor_abs = opts.floor_rel * peak;

  // least squares of y = log|c| against x = |xi| over the window
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  const auto& xs = f.grid->freqs();
  for (int i = 0; i < f.size(); ++i) {
    const double axi = std::abs(xs[i]);
    if (axi < lo || axi > hi) continue;
    const double mag = std::abs(f.c[i]);
    if (mag < floor_abs) continue;
    const double y = std::log(mag);
    sx += axi;
    sy += y;
    sxx += axi * axi;
    sxy += axi * y;
    ++n;
  }
  if (n < opts.min_modes)
    throw ValidationError("estimate_radius: fewer than min_modes coefficients above floor in window");

  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double icept = (sy - slope * sx) / n;

  double ss = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    const double axi = std::abs(xs[i]);
    if (axi < lo || axi > hi) continue;
    const double mag = std::abs(f.c[i]);
    if (mag < floor_abs) continue;
    const double r = std::log(mag) - (icept + slope * axi);
    ss += r * r;
  }

  RadiusFit fit;
  fit.sigma_hat = -slope;
  fit.residual = std::sqrt(ss / n);
  fit.n_modes = n;
  fit.grid_max_sigma = std::log(1.0 / opts.floor_rel) / (hi - lo);
  fit.entire = fit.sigma_hat >= fit.grid_max_sigma;
  return fit;
}

}  // namespace dkg
