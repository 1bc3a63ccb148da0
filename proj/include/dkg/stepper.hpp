#pragma once

// Interaction-picture RK4 time stepper. The exact diagonal free flow is
// factored out through RhsWork::linear_propagate and the classical tableau
// is applied to the conjugated coupling field, so the step is exact on the
// decoupled system and fourth order in the coupling. One step costs four
// coupling evaluations (24 padded transforms).

#include <functional>
#include <vector>

#include "dkg/gevrey.hpp"
#include "dkg/rhs.hpp"

namespace dkg {

State lawson_rk4_step(const State& u, double dt, RhsWork& work);

struct EvolveOptions {
  double probe_interval = 0.0;  // <= 0: observe endpoints only
  std::function<void(const State&)> observer;
  double charge_drift_abort = 0.01;  // relative drift that aborts; <= 0 disables
  int check_stride = 16;             // steps between finiteness/charge checks
};

// Integrate to the horizon in round(horizon / dt) steps. dt is nudged to
// divide the horizon exactly; a nudge above 1e-6 relative is rejected.
State evolve(State u, double horizon, double dt, RhsWork& work,
             const EvolveOptions& opts = {});

// One probe of the norm ledger. Slots that do not apply to the mass case
// hold NaN: n_sigma is massive-only, phi_l2 / n_prime massless-only.
struct LedgerRow {
  double t = 0.0;
  double charge = 0.0;
  double m_sigma = 0.0, m_sigma_minus = 0.0, m_sigma_plus = 0.0;
  double m_prime = 0.0;
  double n_sigma = 0.0;
  double phi_l2 = 0.0, n_prime = 0.0;
  double sigma_hat = 0.0, sigma_hat_residual = 0.0;
};

struct NormLedger {
  double sigma = 0.5;   // weight used for the exponential functionals
  bool massless = false;
  std::vector<LedgerRow> rows;
};

// Smallest fitted decay rate over psi_p, psi_m and the recombined phi,
// skipping fields with too little signal to fit (a vanishing field bounds
// nothing). sigma_hat is NaN when no field can be fitted.
RadiusFit min_state_radius(const State& u);

// Observer that appends one row per probe. The radius columns come from
// min_state_radius with the residual of that same fit.
std::function<void(const State&)> ledger_observer(NormLedger& ledger);

}  // namespace dkg
