#include "dkg/state.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dkg/types.hpp"

namespace dkg {
namespace {

const cplx kI{0.0, 1.0};

void check_data_grids(const CauchyData& d) {
  check_same_grid(d.psi_p, d.psi_m);
  check_same_grid(d.psi_p, d.phi0);
  check_same_grid(d.psi_p, d.phi1);
}

}  // namespace

State split_data(const CauchyData& data, Masses masses, bool carry_zero_mode) {
  check_data_grids(data);
  const GridPtr& grid = data.psi_p.grid;
  const int n = grid->size();
  const int zero_slot = grid->index_of_mode(0);

  State u;
  u.masses = masses;
  u.psi_p = data.psi_p;
  u.psi_m = data.psi_m;
  u.wave_p = make_zero_field(grid);
  u.wave_m = make_zero_field(grid);

  if (masses.kg == Masses::Kg::one) {
    for (int i = 0; i < n; ++i) {
      double xi = grid->freq(i);
      cplx half_vel = kI * data.phi1.c[i] / std::sqrt(1.0 + xi * xi);
      u.wave_p.c[i] = 0.5 * (data.phi0.c[i] + half_vel);
      u.wave_m.c[i] = 0.5 * (data.phi0.c[i] - half_vel);
    }
    return u;
  }

  for (int i = 0; i < n; ++i) {
    if (i == zero_slot) continue;
    double axi = std::abs(grid->freq(i));
    cplx half_vel = kI * data.phi1.c[i] / axi;
    u.wave_p.c[i] = 0.5 * (data.phi0.c[i] + half_vel);
    u.wave_m.c[i] = 0.5 * (data.phi0.c[i] - half_vel);
  }
  if (carry_zero_mode) {
    u.zero_phi = data.phi0.c[zero_slot];
    u.zero_dphi = data.phi1.c[zero_slot];
  } else if (std::abs(data.phi1.c[zero_slot]) >
             1e-12 * std::max(1.0, max_abs_coeff(data.phi1))) {
    throw ValidationError(
        "massless split without the zero-mode carry, but d_t phi has a "
        "nonzero mean: that mode grows linearly and cannot be dropped");
  }
  return u;
}

Recombined recombine(const State& u) {
  const GridPtr& grid = u.wave_p.grid;
  const int n = grid->size();
  const int zero_slot = grid->index_of_mode(0);
  const bool massless = u.masses.kg == Masses::Kg::zero;

  Recombined r{make_zero_field(grid), make_zero_field(grid)};
  for (int i = 0; i < n; ++i) {
    double xi = grid->freq(i);
    double h = massless ? std::abs(xi) : std::sqrt(1.0 + xi * xi);
    r.phi.c[i] = u.wave_p.c[i] + u.wave_m.c[i];
    r.dphi_dt.c[i] = -kI * h * (u.wave_p.c[i] - u.wave_m.c[i]);
  }
  if (massless) {
    r.phi.c[zero_slot] += u.zero_phi;
    r.dphi_dt.c[zero_slot] = u.zero_dphi;
  }
  return r;
}

Field phi_field(const State& u) {
  Field phi = add(u.wave_p, u.wave_m);
  if (u.masses.kg == Masses::Kg::zero)
    phi.c[phi.grid->index_of_mode(0)] += u.zero_phi;
  return phi;
}

State add_scaled(const State& u, const Deriv& d, double a) {
  State v = u;
  axpy(v.psi_p, a, d.psi_p);
  axpy(v.psi_m, a, d.psi_m);
  axpy(v.wave_p, a, d.wave_p);
  axpy(v.wave_m, a, d.wave_m);
  v.zero_phi += a * d.z_phi;
  v.zero_dphi += a * d.z_dphi;
  return v;
}

Deriv deriv_like(const State& u) {
  Deriv d;
  d.psi_p = make_zero_field(u.psi_p.grid);
  d.psi_m = make_zero_field(u.psi_p.grid);
  d.wave_p = make_zero_field(u.psi_p.grid);
  d.wave_m = make_zero_field(u.psi_p.grid);
  return d;
}

double wave_reality_defect(const State& u) {
  Field conj_p = conj_field(u.wave_p);
  double worst = 0.0;
  for (int i = 0; i < u.wave_m.size(); ++i)
    worst = std::max(worst, std::abs(conj_p.c[i] - u.wave_m.c[i]));
  if (u.masses.kg == Masses::Kg::zero) {
    worst = std::max(worst, std::abs(u.zero_phi.imag()));
    worst = std::max(worst, std::abs(u.zero_dphi.imag()));
  }
  return worst;
}

RescaledData rescale_to_unit_mass(const CauchyData& data, double dirac_mass,
                                  double kg_mass) {
  check_data_grids(data);
  if (!(kg_mass > 0.0))
    throw ValidationError("rescaling needs a positive kg mass");
  const GridPtr& old_grid = data.psi_p.grid;
  GridPtr grid = make_grid(kg_mass * old_grid->domain_half_length(),
                           old_grid->size());
  const int n = grid->size();

  // f'(x) = g f(x/m) on the dilated torus has coefficients m g f^(xi_k)
  auto map = [&](const Field& f, double g) {
    Field out = make_zero_field(grid);
    for (int i = 0; i < n; ++i) out.c[i] = kg_mass * g * f.c[i];
    return out;
  };
  RescaledData r;
  double spinor_gain = std::pow(kg_mass, -1.5);
  r.data.psi_p = map(data.psi_p, spinor_gain);
  r.data.psi_m = map(data.psi_m, spinor_gain);
  r.data.phi0 = map(data.phi0, 1.0 / kg_mass);
  r.data.phi1 = map(data.phi1, 1.0 / (kg_mass * kg_mass));
  r.dirac = dirac_mass / kg_mass;
  r.time_scale = kg_mass;
  return r;
}

CauchyData time_reversal_data(const CauchyData& data) {
  CauchyData rev;
  rev.psi_p = conj_field(data.psi_m);
  rev.psi_m = conj_field(data.psi_p);
  rev.phi0 = data.phi0;
  rev.phi1 = scaled(data.phi1, -1.0);
  return rev;
}

}  // namespace dkg
