#pragma once

// Analytic test profiles, constructed directly from their closed-form line
// transforms evaluated at the grid frequencies. Those coefficients are
// exactly the Fourier data of the 2L-periodization of the profile, so the
// generated field is analytic on the torus with a known strip:
//
//   poisson  scale a:   f(x) = amp * a / (pi (x^2 + a^2)),   f^ = amp e^{-a|xi|},
//            strip half-width a
//   gaussian width w:   f(x) = amp e^{-x^2 / 2 w^2},  f^ = amp w sqrt(2 pi)
//            e^{-w^2 xi^2 / 2}, entire
//   sech     scale s:   f(x) = amp sech(x / s),  f^ = amp pi s sech(pi s xi / 2),
//            strip half-width pi s / 2
//
// mod_k shifts the spectrum by mod_k grid modes, i.e. multiplies the profile
// by e^{i mod_k pi x / L}; nonzero mod_k gives genuinely complex data.
//
// A profile whose band-edge coefficient exceeds 1e-12 of its peak is rejected
// as unresolvable on the grid. The unmatched mode k = -N/2 is set to zero.

#include <cstdint>

#include "dkg/field.hpp"

namespace dkg {

struct GeneratorSpec {
  enum class Kind { zero, poisson, gaussian, sech };
  Kind kind = Kind::zero;
  double scale = 1.0;  // a, w or s above
  double amplitude = 1.0;
  int mod_k = 0;
};

Field generate(const GridPtr& grid, const GeneratorSpec& spec);

// half-width of the analyticity strip (infinity for zero / gaussian)
double strip_radius(const GeneratorSpec& spec);

// closed-form value of the periodized profile at x (complex when mod_k != 0)
cplx profile_value(const GeneratorSpec& spec, double L, double x);

// |f(-L)| / max_j |f(x_j)|, the spatial periodization seam of a field
double boundary_amplitude_ratio(const Field& f);

// Band-limited noise for property tests: independent complex gaussian
// coefficients on |k| <= band_max_mode damped by e^{-decay |xi|}. With
// real_symmetric the data is a real-valued function.
Field random_band_limited(const GridPtr& grid, std::uint64_t seed, int band_max_mode,
                          double decay, bool real_symmetric = false);

}  // namespace dkg
