#include "dkg/multiplier.hpp"

#include <cmath>

#include "dkg/kernels.hpp"

namespace dkg {

double dispersion_symbol(Dispersion h, double xi) {
  switch (h) {
    case Dispersion::plus_xi: return xi;
    case Dispersion::minus_xi: return -xi;
    case Dispersion::plus_bracket: return std::sqrt(1.0 + xi * xi);
    case Dispersion::minus_bracket: return -std::sqrt(1.0 + xi * xi);
    case Dispersion::plus_abs: return std::abs(xi);
    case Dispersion::minus_abs: return -std::abs(xi);
  }
  return 0.0;
}

double Multiplier::symbol(double xi) const {
  switch (kind) {
    case Kind::bracket: return std::sqrt(a * a + xi * xi);
    case Kind::bracket_pow: return std::pow(a * a + xi * xi, 0.5 * power);
    case Kind::abs: return std::abs(xi);
    case Kind::abs_inv: return xi == 0.0 ? 0.0 : 1.0 / std::abs(xi);
    case Kind::exp_abs: return std::exp(sigma * std::abs(xi));
    case Kind::exp_signed: return std::exp(eps * sigma * xi);
    case Kind::symbol_diff: return std::expm1(eps * sigma * xi);
  }
  return 0.0;
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  if (m.kind == Multiplier::Kind::abs_inv) {
    const int zero = f.grid->index_of_mode(0);
    const double scale = max_abs_coeff(f);
    if (std::abs(f.c[zero]) > 1e-12 * scale)
      throw ValidationError("abs_inv multiplier requires zero-mean input");
  }
  Field r = f;
  const auto& xs = f.grid->freqs();
  for (int i = 0; i < f.size(); ++i) r.c[i] = f.c[i] * m.symbol(xs[i]);
  return r;
}

Field propagate(const Field& f, Dispersion h, double t) {
  Field r = f;
  const auto& xs = f.grid->freqs();
  std::vector<cplx> phase(f.size());
  for (int i = 0; i < f.size(); ++i) {
    const double w = -t * dispersion_symbol(h, xs[i]);
    phase[i] = cplx{std::cos(w), std::sin(w)};
  }
  kernels::scale_pointwise(f.c, phase, r.c);
  return r;
}

PaddedSamples to_padded_samples(const Field& f) {
  const int n = f.size();
  std::vector<cplx> pad(2 * n, cplx{0.0, 0.0});
  // band k in [-N/2, N/2) sits at padded positions k + N
  std::copy(f.c.begin(), f.c.end(), pad.begin() + n / 2);
  PaddedSamples out{f.grid, std::vector<cplx>(2 * n)};
  f.grid->inverse_transform_padded(pad, out.s);
  return out;
}

Field product_from_padded(const PaddedSamples& a, const PaddedSamples& b, bool conj_a,
                          bool real_part) {
  if (a.grid.get() != b.grid.get()) throw ValidationError("padded samples on different grids");
  const int n = a.grid->size();
  std::vector<cplx> prod(2 * n);
  for (int j = 0; j < 2 * n; ++j) {
    const cplx av = conj_a ? std::conj(a.s[j]) : a.s[j];
    cplx p = av * b.s[j];
    if (real_part) p = cplx{p.real(), 0.0};
    prod[j] = p;
  }
  std::vector<cplx> pad(2 * n);
  a.grid->transform_padded(prod, pad);
  Field out = make_zero_field(a.grid);
  std::copy(pad.begin() + n / 2, pad.begin() + n / 2 + n, out.c.begin());
  return out;
}

Field dealias_product(const Field& f, const Field& g) {
  check_same_grid(f, g);
  return product_from_padded(to_padded_samples(f), to_padded_samples(g));
}

}  // namespace dkg
