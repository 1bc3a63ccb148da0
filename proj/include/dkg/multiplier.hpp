#pragma once

// Fourier multipliers, half-wave propagators and the alias-free product.

#include "dkg/field.hpp"

namespace dkg {

// Dispersion relations h(xi) for the propagator e^{-i t h(D)}.
enum class Dispersion { plus_xi, minus_xi, plus_bracket, minus_bracket, plus_abs, minus_abs };

double dispersion_symbol(Dispersion h, double xi);

// Real symbols used throughout:
//   bracket(a):          (a^2 + xi^2)^{1/2}
//   bracket_pow(a, p):   (a^2 + xi^2)^{p/2}
//   abs:                 |xi|
//   abs_inv:             1/|xi| away from 0 (input must have zero mean)
//   exp_abs(sigma):      e^{sigma |xi|}
//   exp_signed(eps, sigma):   e^{eps sigma xi}
//   symbol_diff(eps, sigma):  e^{eps sigma xi} - 1
struct Multiplier {
  enum class Kind { bracket, bracket_pow, abs, abs_inv, exp_abs, exp_signed, symbol_diff };

  Kind kind;
  double a = 1.0;      // bracket mass
  double power = 1.0;  // bracket_pow exponent
  double sigma = 0.0;
  int eps = +1;

  static Multiplier bracket(double a) { return {Kind::bracket, a, 1.0, 0.0, +1}; }
  static Multiplier bracket_pow(double a, double p) { return {Kind::bracket_pow, a, p, 0.0, +1}; }
  static Multiplier abs() { return {Kind::abs, 0.0, 1.0, 0.0, +1}; }
  static Multiplier abs_inv() { return {Kind::abs_inv, 0.0, 1.0, 0.0, +1}; }
  static Multiplier exp_abs(double sigma) { return {Kind::exp_abs, 0.0, 1.0, sigma, +1}; }
  static Multiplier exp_signed(int eps, double sigma) {
    return {Kind::exp_signed, 0.0, 1.0, sigma, eps};
  }
  static Multiplier symbol_diff(int eps, double sigma) {
    return {Kind::symbol_diff, 0.0, 1.0, sigma, eps};
  }

  double symbol(double xi) const;
};

// abs_inv requires |zero-mode| <= 1e-12 * max |c_k| and zeroes its output at
// the zero mode.
Field apply_multiplier(const Field& f, const Multiplier& m);

// e^{-i t h(D)} f; exactly norm-preserving mode by mode.
Field propagate(const Field& f, Dispersion h, double t);

// Product of the two band-limited functions, computed alias-free by zero
// padding to 2N points, equal to the frequency-truncated convolution
// (2L)^{-1} (f * g)|_{band}.
Field dealias_product(const Field& f, const Field& g);

// Real-space sample view on the padded 2N grid, for forming several products
// of one field without repeated transforms.
struct PaddedSamples {
  GridPtr grid;
  std::vector<cplx> s;  // 2N samples
};

PaddedSamples to_padded_samples(const Field& f);

// Product of two padded sample views, truncated back to the N-mode band.
// conj_a conjugates the first factor pointwise; real_part takes the real part
// of the product before transforming.
Field product_from_padded(const PaddedSamples& a, const PaddedSamples& b, bool conj_a = false,
                          bool real_part = false);

}  // namespace dkg
