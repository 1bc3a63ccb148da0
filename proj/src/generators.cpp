#include "dkg/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dkg/types.hpp"

namespace dkg {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEdgeTolerance = 1e-12;

double base_transform(const GeneratorSpec& spec, double xi) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::zero:
      return 0.0;
    case GeneratorSpec::Kind::poisson:
      return spec.amplitude * std::exp(-spec.scale * std::abs(xi));
    case GeneratorSpec::Kind::gaussian:
      return spec.amplitude * spec.scale * std::sqrt(2.0 * kPi) *
             std::exp(-0.5 * spec.scale * spec.scale * xi * xi);
    case GeneratorSpec::Kind::sech: {
      double arg = 0.5 * kPi * spec.scale * xi;
      return spec.amplitude * kPi * spec.scale / std::cosh(arg);
    }
  }
  return 0.0;
}

void validate_spec(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorSpec::Kind::zero) return;
  if (!(spec.scale > 0.0))
    throw ValidationError("generator scale must be positive");
  if (!std::isfinite(spec.amplitude))
    throw ValidationError("generator amplitude must be finite");
}

}  // namespace

Field generate(const GridPtr& grid, const GeneratorSpec& spec) {
  validate_spec(spec);
  Field f = make_zero_field(grid);
  if (spec.kind == GeneratorSpec::Kind::zero) return f;

  const int n = grid->size();
  if (std::abs(spec.mod_k) >= n / 2)
    throw ValidationError("generator mod_k outside the resolved band");

  double shift = spec.mod_k * grid->dxi();
  double peak = 0.0, edge = 0.0;
  for (int i = 0; i < n; ++i) {
    double mag = std::abs(base_transform(spec, grid->freq(i) - shift));
    peak = std::max(peak, mag);
    int k = i - n / 2;
    if (k == -n / 2 || k == n / 2 - 1) edge = std::max(edge, mag);
  }
  if (edge > kEdgeTolerance * peak)
    throw ValidationError(
        "generator profile unresolvable: band-edge coefficient exceeds 1e-12 "
        "of the peak (scale too small for this grid)");

  for (int i = 0; i < n; ++i) {
    if (i == 0) continue;  // unmatched mode k = -N/2
    f.c[i] = base_transform(spec, grid->freq(i) - shift);
  }
  return f;
}

double strip_radius(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorSpec::Kind::poisson:
      return spec.scale;
    case GeneratorSpec::Kind::sech:
      return 0.5 * kPi * spec.scale;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

cplx profile_value(const GeneratorSpec& spec, double L, double x) {
  validate_spec(spec);
  double v = 0.0;
  switch (spec.kind) {
    case GeneratorSpec::Kind::zero:
      return {0.0, 0.0};
    case GeneratorSpec::Kind::poisson: {
      // sum_k amp e^{-a |xi_k|} e^{i x xi_k} / 2L, a geometric series
      double rho = std::exp(-spec.scale * kPi / L);
      double c = std::cos(kPi * x / L);
      v = spec.amplitude / (2.0 * L) * (1.0 - rho * rho) /
          (1.0 - 2.0 * rho * c + rho * rho);
      break;
    }
    case GeneratorSpec::Kind::gaussian: {
      for (int m = -6; m <= 6; ++m) {
        double u = (x + 2.0 * L * m) / spec.scale;
        v += spec.amplitude * std::exp(-0.5 * u * u);
      }
      break;
    }
    case GeneratorSpec::Kind::sech: {
      for (int m = -8; m <= 8; ++m) {
        double u = (x + 2.0 * L * m) / spec.scale;
        v += spec.amplitude / std::cosh(u);
      }
      break;
    }
  }
  if (spec.mod_k == 0) return {v, 0.0};
  double phase = spec.mod_k * kPi * x / L;
  return v * cplx{std::cos(phase), std::sin(phase)};
}

double boundary_amplitude_ratio(const Field& f) {
  std::vector<cplx> s = to_samples(f);
  double peak = 0.0;
  for (const cplx& v : s) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  return std::abs(s[0]) / peak;  // x_0 = -L
}

Field random_band_limited(const GridPtr& grid, std::uint64_t seed, int band_max_mode,
                          double decay, bool real_symmetric) {
  const int n = grid->size();
  if (band_max_mode < 1 || band_max_mode >= n / 2)
    throw ValidationError("random band edge outside (0, N/2)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Field f = make_zero_field(grid);
  for (int k = -band_max_mode; k <= band_max_mode; ++k) {
    int i = grid->index_of_mode(k);
    double w = std::exp(-decay * std::abs(grid->freq(i)));
    f.c[i] = w * cplx{gauss(rng), gauss(rng)};
  }
  if (real_symmetric) {
    for (int k = 1; k <= band_max_mode; ++k)
      f.c[grid->index_of_mode(-k)] = std::conj(f.c[grid->index_of_mode(k)]);
    f.c[grid->index_of_mode(0)].imag(0.0);
  }
  return f;
}

}  // namespace dkg
