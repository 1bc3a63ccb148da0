#include "dkg/rhs.hpp"

#include <cmath>

#include "dkg/kernels.hpp"

namespace dkg {
namespace {

const cplx kI{0.0, 1.0};

}  // namespace

RhsWork::RhsWork(GridPtr grid) : grid_(std::move(grid)) {}

const RhsWork::PhaseTable& RhsWork::phases(double dt, bool massless) {
  for (const PhaseTable& t : cache_)
    if (t.valid && t.dt == dt && t.massless == massless) return t;
  if (cache_.size() >= 8) cache_.erase(cache_.begin());

  const int n = grid_->size();
  PhaseTable t;
  t.dt = dt;
  t.massless = massless;
  t.valid = true;
  t.left.resize(n);
  t.right.resize(n);
  t.wave_p.resize(n);
  t.wave_m.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = grid_->freq(i);
    t.left[i] = std::polar(1.0, -dt * xi);
    t.right[i] = std::polar(1.0, dt * xi);
    double h = massless ? std::abs(xi) : std::sqrt(1.0 + xi * xi);
    t.wave_p[i] = std::polar(1.0, -dt * h);
    t.wave_m[i] = std::polar(1.0, dt * h);
  }
  cache_.push_back(std::move(t));
  return cache_.back();
}

State RhsWork::linear_propagate(const State& u, double dt) {
  const bool massless = u.masses.kg == Masses::Kg::zero;
  const PhaseTable& t = phases(dt, massless);
  State v = u;
  kernels::scale_pointwise(v.psi_p.c, t.left, v.psi_p.c);
  kernels::scale_pointwise(v.psi_m.c, t.right, v.psi_m.c);
  kernels::scale_pointwise(v.wave_p.c, t.wave_p, v.wave_p.c);
  kernels::scale_pointwise(v.wave_m.c, t.wave_m, v.wave_m.c);
  if (massless) v.zero_phi += dt * v.zero_dphi;
  v.t = u.t + dt;
  return v;
}

Deriv RhsWork::linear_propagate_deriv(const Deriv& d, double dt, Masses masses) {
  const bool massless = masses.kg == Masses::Kg::zero;
  const PhaseTable& t = phases(dt, massless);
  Deriv e = d;
  kernels::scale_pointwise(e.psi_p.c, t.left, e.psi_p.c);
  kernels::scale_pointwise(e.psi_m.c, t.right, e.psi_m.c);
  kernels::scale_pointwise(e.wave_p.c, t.wave_p, e.wave_p.c);
  kernels::scale_pointwise(e.wave_m.c, t.wave_m, e.wave_m.c);
  if (massless) e.z_phi += dt * e.z_dphi;
  return e;
}

Deriv RhsWork::nonlinear(const State& u) {
  const int n = grid_->size();
  const int zero_slot = grid_->index_of_mode(0);
  const bool massless = u.masses.kg == Masses::Kg::zero;
  const double mass = u.masses.dirac;

  PaddedSamples phi_pad = to_padded_samples(phi_field(u));
  PaddedSamples psip_pad = to_padded_samples(u.psi_p);
  PaddedSamples psim_pad = to_padded_samples(u.psi_m);

  Field phi_psim = product_from_padded(phi_pad, psim_pad);
  Field phi_psip = product_from_padded(phi_pad, psip_pad);
  Field coupling = product_from_padded(psip_pad, psim_pad, /*conj_a=*/true,
                                       /*real_part=*/true);

  Deriv d = deriv_like(u);
  for (int i = 0; i < n; ++i) {
    d.psi_p.c[i] = kI * (phi_psim.c[i] - mass * u.psi_m.c[i]);
    d.psi_m.c[i] = kI * (phi_psip.c[i] - mass * u.psi_p.c[i]);
  }
  if (!massless) {
    for (int i = 0; i < n; ++i) {
      double xi = grid_->freq(i);
      cplx s = kI * coupling.c[i] / std::sqrt(1.0 + xi * xi);
      d.wave_p.c[i] = -s;
      d.wave_m.c[i] = s;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (i == zero_slot) continue;
      cplx s = kI * coupling.c[i] / std::abs(grid_->freq(i));
      d.wave_p.c[i] = -s;
      d.wave_m.c[i] = s;
    }
    d.z_dphi = -2.0 * coupling.c[zero_slot];
  }
  return d;
}

Deriv RhsWork::full_rhs(const State& u) {
  const int n = grid_->size();
  const bool massless = u.masses.kg == Masses::Kg::zero;
  Deriv d = nonlinear(u);
  for (int i = 0; i < n; ++i) {
    double xi = grid_->freq(i);
    double h = massless ? std::abs(xi) : std::sqrt(1.0 + xi * xi);
    d.psi_p.c[i] += -kI * xi * u.psi_p.c[i];
    d.psi_m.c[i] += kI * xi * u.psi_m.c[i];
    d.wave_p.c[i] += -kI * h * u.wave_p.c[i];
    d.wave_m.c[i] += kI * h * u.wave_m.c[i];
  }
  if (massless) d.z_phi += u.zero_dphi;
  return d;
}

}  // namespace dkg
