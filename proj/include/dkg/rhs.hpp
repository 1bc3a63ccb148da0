#pragma once

// Tangent evaluations for the split system
//
//   d_t psi_pm = -+ d_x psi_pm + i (phi - M) psi_mp
//   d_t wave_pm = -+ i <D> wave_pm -+ i <D>^{-1} R        (kg mass 1)
//   d_t wave_pm = -+ i |D| wave_pm -+ i |D|^{-1} P~ R     (kg mass 0)
//   zero_phi' = zero_dphi,  zero_dphi' = -2 R^(0)         (kg mass 0)
//
// with R = Re(conj(psi_p) psi_m) and P~ the mean-free projection. All
// products are dealiased through the padded transforms; one evaluation of
// the nonlinear part costs six padded transforms.
//
// The linear flow is split off exactly: linear_propagate applies the
// diagonal phases (and the exact 2x2 zero-mode block when massless), and
// nonlinear() evaluates only the coupling terms. full_rhs is the sum of the
// linear generator and the coupling, for residual diagnostics.

#include "dkg/multiplier.hpp"
#include "dkg/state.hpp"

namespace dkg {

class RhsWork {
 public:
  explicit RhsWork(GridPtr grid);

  // nonlinear coupling terms only (interaction-picture vector field source)
  Deriv nonlinear(const State& u);

  // exact free flow over dt applied to a state / tangent
  State linear_propagate(const State& u, double dt);
  Deriv linear_propagate_deriv(const Deriv& d, double dt, Masses masses);

  // linear generator + nonlinear coupling
  Deriv full_rhs(const State& u);

  const GridPtr& grid() const { return grid_; }

 private:
  struct PhaseTable {
    double dt = 0.0;
    bool massless = false;
    bool valid = false;
    std::vector<cplx> left, right;    // spinor characteristics e^{+-|..}
    std::vector<cplx> wave_p, wave_m; // half-wave phases
  };
  const PhaseTable& phases(double dt, bool massless);

  GridPtr grid_;
  std::vector<PhaseTable> cache_;
};

}  // namespace dkg
