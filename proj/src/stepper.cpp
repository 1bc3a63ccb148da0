#include "dkg/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dkg/gevrey.hpp"
#include "dkg/types.hpp"

namespace dkg {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_health(const State& u, double charge0, double drift_limit) {
  if (!(all_finite(u.psi_p) && all_finite(u.psi_m) && all_finite(u.wave_p) &&
        all_finite(u.wave_m)))
    throw SolverAbort("non-finite state at t = " + std::to_string(u.t));
  if (drift_limit > 0.0) {
    double q = charge(u.psi_p, u.psi_m);
    if (std::abs(q - charge0) > drift_limit * std::max(charge0, 1e-300))
      throw SolverAbort("charge drift " + std::to_string(q - charge0) +
                        " at t = " + std::to_string(u.t) +
                        " exceeds the abort threshold");
  }
}

}  // namespace

State lawson_rk4_step(const State& u, double dt, RhsWork& work) {
  const double h = 0.5 * dt;
  Deriv k1 = work.nonlinear(u);
  State u_half = work.linear_propagate(u, h);

  Deriv k1h = work.linear_propagate_deriv(k1, h, u.masses);
  Deriv k2 = work.nonlinear(add_scaled(u_half, k1h, h));
  Deriv k3 = work.nonlinear(add_scaled(u_half, k2, h));

  State u_full = work.linear_propagate(u, dt);
  Deriv k3h = work.linear_propagate_deriv(k3, h, u.masses);
  Deriv k4 = work.nonlinear(add_scaled(u_full, k3h, dt));

  State v = u_full;
  v = add_scaled(v, work.linear_propagate_deriv(k1, dt, u.masses), dt / 6.0);
  v = add_scaled(v, work.linear_propagate_deriv(k2, h, u.masses), dt / 3.0);
  v = add_scaled(v, work.linear_propagate_deriv(k3, h, u.masses), dt / 3.0);
  v = add_scaled(v, k4, dt / 6.0);
  v.t = u.t + dt;
  return v;
}

State evolve(State u, double horizon, double dt, RhsWork& work,
             const EvolveOptions& opts) {
  if (!(horizon > 0.0) || !(dt > 0.0))
    throw ValidationError("evolve needs a positive horizon and step");
  long long n_steps = std::llround(horizon / dt);
  if (n_steps < 1) n_steps = 1;
  double step_dt = horizon / static_cast<double>(n_steps);
  if (std::abs(step_dt - dt) > 1e-6 * dt)
    throw ValidationError("time step does not divide the horizon");

  const double t0 = u.t;
  const double charge0 = charge(u.psi_p, u.psi_m);
  if (opts.observer) opts.observer(u);

  long long probe_index = 1;
  for (long long s = 1; s <= n_steps; ++s) {
    u = lawson_rk4_step(u, step_dt, work);
    u.t = t0 + static_cast<double>(s) * step_dt;  // keep the clock drift-free
    bool last = s == n_steps;
    if (last || (opts.check_stride > 0 && s % opts.check_stride == 0))
      check_health(u, charge0, opts.charge_drift_abort);
    if (!opts.observer) continue;
    if (opts.probe_interval > 0.0) {
      double tol = 1e-9 * std::max(1.0, std::abs(u.t));
      double next = t0 + probe_index * opts.probe_interval;
      bool observed = false;
      while (next <= u.t + tol) {
        if (!observed && std::abs(next - u.t) <= tol) {
          opts.observer(u);
          observed = true;
        }
        ++probe_index;
        next = t0 + probe_index * opts.probe_interval;
      }
      if (last && !observed) opts.observer(u);
    } else if (last) {
      opts.observer(u);
    }
  }
  return u;
}

RadiusFit min_state_radius(const State& u) {
  RadiusFit best;
  best.sigma_hat = kNan;
  best.residual = kNan;
  Field phi = phi_field(u);
  const Field* fields[3] = {&u.psi_p, &u.psi_m, &phi};
  for (const Field* f : fields) {
    try {
      RadiusFit fit = estimate_radius(*f);
      if (std::isnan(best.sigma_hat) || fit.sigma_hat < best.sigma_hat)
        best = fit;
    } catch (const ValidationError&) {
      // field too small to fit; it constrains nothing
    }
  }
  return best;
}

std::function<void(const State&)> ledger_observer(NormLedger& ledger) {
  return [&ledger](const State& u) {
    LedgerRow row;
    row.t = u.t;
    row.charge = charge(u.psi_p, u.psi_m);
    MSigma m = m_sigma(u.psi_p, u.psi_m, ledger.sigma);
    row.m_sigma = m.total;
    row.m_sigma_minus = m.minus;
    row.m_sigma_plus = m.plus;
    row.m_prime = m_prime(u.psi_p, u.psi_m, ledger.sigma);

    if (!ledger.massless) {
      row.n_sigma = n_sigma(u.wave_p, u.wave_m, ledger.sigma);
      row.phi_l2 = kNan;
      row.n_prime = kNan;
    } else {
      row.n_sigma = kNan;
      row.phi_l2 = l2_norm(phi_field(u));
      row.n_prime = n_prime(u.wave_p, u.wave_m, ledger.sigma);
    }

    RadiusFit fit = min_state_radius(u);
    row.sigma_hat = fit.sigma_hat;
    row.sigma_hat_residual = std::isnan(fit.sigma_hat) ? kNan : fit.residual;
    ledger.rows.push_back(row);
  };
}

}  // namespace dkg
