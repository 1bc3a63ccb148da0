#pragma once

// Evolution state for the split Dirac-Klein-Gordon system. The spinor is
// carried as its characteristic pair (psi_p, psi_m) and the scalar as the
// half-wave pair (wave_p, wave_m):
//
//   kg mass 1:  wave_pm = (phi +- i <D>^{-1} d_t phi) / 2
//   kg mass 0:  wave_pm = (phi +- i |D|^{-1} d_t phi) / 2 on mean-zero parts,
//               with the zero modes of (phi, d_t phi) carried as the scalar
//               pair (zero_phi, zero_dphi) obeying z' = zd, zd' = -2 R^(0)
//
// Reality of phi corresponds to conj(wave_p) = wave_m mode-wise (and real
// zero_phi, zero_dphi in the massless case).

#include "dkg/field.hpp"

namespace dkg {

struct Masses {
  double dirac = 1.0;               // M in the spinor coupling
  enum class Kg { one, zero } kg = Kg::one;
};

struct CauchyData {
  Field psi_p, psi_m;  // spinor characteristics at t = 0
  Field phi0, phi1;    // phi(0), d_t phi(0)
};

struct State {
  double t = 0.0;
  Field psi_p, psi_m;
  Field wave_p, wave_m;
  Masses masses;
  cplx zero_phi{0.0, 0.0};
  cplx zero_dphi{0.0, 0.0};
};

// Tangent vector: the same slots as State minus the clock.
struct Deriv {
  Field psi_p, psi_m;
  Field wave_p, wave_m;
  cplx z_phi{0.0, 0.0};
  cplx z_dphi{0.0, 0.0};
};

// carry_zero_mode only matters for kg mass 0; refusing the carry with a
// nonzero mean in phi1 is an error (that mode grows linearly and cannot be
// dropped).
State split_data(const CauchyData& data, Masses masses, bool carry_zero_mode = true);

struct Recombined {
  Field phi;
  Field dphi_dt;
};
Recombined recombine(const State& u);

// phi alone (wave_p + wave_m, plus the carried zero mode when massless)
Field phi_field(const State& u);

State add_scaled(const State& u, const Deriv& d, double a);
Deriv deriv_like(const State& u);  // zero tangent with matching grids

// max mode-wise violation of conj(wave_p) = wave_m and conj-symmetry of the
// spinor product data; zero for real phi
double wave_reality_defect(const State& u);

// Rescale data with kg mass m > 0 to the unit-mass system on the dilated
// torus (half-length m L, same mode count):
//   psi'(x) = m^{-3/2} psi(x/m),  phi'(x) = m^{-1} phi(x/m),
//   phi1'(x) = m^{-2} phi1(x/m),  M' = M/m,  t' = m t.
struct RescaledData {
  CauchyData data;
  double dirac;       // M' = M / m
  double time_scale;  // t' = time_scale * t
};
RescaledData rescale_to_unit_mass(const CauchyData& data, double dirac_mass,
                                  double kg_mass);

// Data for the time-reversed solution: swapped, conjugated spinor halves
// and a negated scalar velocity. Evolving this data forward by t lands on
// the conjugate of the original solution at -t.
CauchyData time_reversal_data(const CauchyData& data);

}  // namespace dkg
