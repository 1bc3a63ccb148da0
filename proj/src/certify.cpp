#include "dkg/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dkg/gevrey.hpp"
#include "dkg/types.hpp"

namespace dkg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_inputs(const CertificateInputs& in) {
  if (!(in.sigma0 > 0.0)) throw ValidationError("certificate needs sigma0 > 0");
  if (!(in.T > 0.0)) throw ValidationError("certificate needs a target time T > 0");
  if (!std::isfinite(in.m0) || in.m0 < 0.0 || !std::isfinite(in.n0) || in.n0 < 0.0)
    throw ValidationError("certificate data functionals must be finite and nonnegative");
  if (!(in.consts.c0 > 0.0) || !(in.consts.C > 0.0))
    throw ValidationError("certificate needs positive calibrated constants");
}

// Window count: the raw window c0 / (A T^2) rarely divides T, so the count
// is rounded up and the window shrunk to T / n. Values within rounding
// noise of an integer snap to it instead of being bumped a whole window.
double window_count(double T, double delta_raw) {
  double x = T / delta_raw;
  double r = std::round(x);
  double n = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
  return std::max(n, 1.0);
}

Certificate build(const CertificateInputs& in, double A) {
  Certificate cert;
  cert.in = in;
  const double C = in.consts.C;
  cert.c2 = 1.0 / std::sqrt(in.consts.c0);
  cert.A = A;

  cert.tlarge_ok = in.m0 + in.n0 <= in.T * in.T;
  double root_a = std::sqrt(A);
  cert.a_condition_ok =
      std::isfinite(A) && A >= 1.0 && 2.0 * C * cert.c2 * in.m0 <= root_a;

  cert.c_asym = 1.0 / (8.0 * C * cert.c2 * (A * root_a));
  double t2 = in.T * in.T;
  double formula = cert.c_asym / (t2 * t2);
  if (formula > in.sigma0) {
    cert.sigma_cert = in.sigma0;
    cert.clamped_to_sigma0 = true;
  } else {
    cert.sigma_cert = formula;
  }

  double delta_raw = in.consts.c0 / (A * t2);
  cert.n = window_count(in.T, delta_raw);
  cert.delta = in.T / cert.n;
  return cert;
}

}  // namespace

CertificateInputs inputs_from_data(const CauchyData& data, Masses masses,
                                   double sigma0,
                                   const CalibratedConstants& consts,
                                   double T) {
  State u = split_data(data, masses);
  CertificateInputs in;
  in.sigma0 = sigma0;
  in.T = T;
  in.masses = masses;
  in.consts = consts;
  in.m0 = m_sigma(u.psi_p, u.psi_m, sigma0).total;
  in.n0 = masses.kg == Masses::Kg::one
              ? n_sigma(u.wave_p, u.wave_m, sigma0)
              : l2_norm(phi_field(u)) + n_prime(u.wave_p, u.wave_m, sigma0);
  if (!std::isfinite(in.m0) || !std::isfinite(in.n0))
    throw ValidationError(
        "data functionals are not finite at sigma0; the data does not reach "
        "that strip, reduce sigma0");
  return in;
}

Certificate certified_radius(const CertificateInputs& in) {
  validate_inputs(in);
  if (in.masses.kg != Masses::Kg::one)
    throw ValidationError(
        "massless inputs need the envelope-aware variant of the certificate");
  double base = 2.0 * in.consts.C * (1.0 / std::sqrt(in.consts.c0)) * in.m0;
  return build(in, std::max(1.0, base * base));
}

Certificate m0_certified_radius(const CertificateInputs& in,
                                const GrowthEnvelope& env) {
  validate_inputs(in);
  if (in.masses.kg != Masses::Kg::zero)
    throw ValidationError("the envelope-aware certificate is for the massless scalar");
  if (!env.valid || !std::isfinite(env.alpha) || !std::isfinite(env.beta))
    throw ValidationError("growth envelope is invalid; refit before certifying");
  double base = 2.0 * in.consts.C * (1.0 / std::sqrt(in.consts.c0)) * in.m0;
  double cap = std::max(1.0, base * base);
  cap = std::max(cap, env.alpha / (in.T * in.T) + env.beta);
  Certificate cert = build(in, cap);
  cert.massless = true;
  cert.growth = env;
  return cert;
}

GrowthEnvelope fit_growth_envelope(const CauchyData& data, Masses masses,
                                   double T, double dt, RhsWork& work,
                                   int samples) {
  if (masses.kg != Masses::Kg::zero)
    throw ValidationError("the quadratic growth envelope is a massless-scalar fit");
  if (samples < 8)
    throw ValidationError("growth envelope needs at least 8 samples");
  if (!(T > 0.0)) throw ValidationError("growth envelope needs T > 0");

  std::vector<double> ts, ys;
  EvolveOptions eopts;
  eopts.probe_interval = T / samples;
  eopts.observer = [&](const State& s) {
    ts.push_back(s.t);
    ys.push_back(l2_norm(phi_field(s)));
  };
  evolve(split_data(data, masses), T, dt, work, eopts);

  double s0 = 0, s2 = 0, s4 = 0, b0 = 0, b2 = 0;
  double half = 0.5 * T * (1.0 + 1e-12);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] > half) continue;
    double t2 = ts[i] * ts[i];
    s0 += 1.0;
    s2 += t2;
    s4 += t2 * t2;
    b0 += ys[i];
    b2 += t2 * ys[i];
  }
  double det = s0 * s4 - s2 * s2;
  if (!(det > 0.0))
    throw ValidationError("growth fit is degenerate; use more samples");

  GrowthEnvelope env;
  env.alpha = std::max(0.0, (s4 * b0 - s2 * b2) / det);
  env.beta = std::max(0.0, (s0 * b2 - s2 * b0) / det);
  env.alpha *= 1.1;
  env.beta *= 1.1;

  env.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] <= half) continue;
    env.margin = std::min(env.margin,
                          env.alpha + env.beta * ts[i] * ts[i] - ys[i]);
  }
  env.valid = std::isfinite(env.margin) && env.margin >= 0.0;
  return env;
}

VerificationReport verify_certificate(const CauchyData& data,
                                      const Certificate& cert,
                                      const VerifyOptions& opts,
                                      RhsWork& work) {
  if (!cert.valid())
    throw ValidationError("cannot verify an invalid certificate");
  if (opts.probes < 1) throw ValidationError("verification needs probes >= 1");

  VerificationReport rep;
  rep.T = cert.in.T;
  rep.sigma = opts.sigma_override > 0.0 ? opts.sigma_override : cert.sigma_cert;
  const double sigma = rep.sigma;

  EvolveOptions eopts;
  eopts.probe_interval = cert.in.T / opts.probes;
  eopts.observer = [&](const State& s) {
    VerifyRow row;
    row.t = s.t;
    row.m = m_sigma(s.psi_p, s.psi_m, sigma).total;
    row.n = cert.massless
                ? l2_norm(phi_field(s)) + n_prime(s.wave_p, s.wave_m, sigma)
                : n_sigma(s.wave_p, s.wave_m, sigma);
    row.windows = s.t <= 0.0 ? 0.0 : std::ceil(s.t / cert.delta - 1e-9);
    row.sigma_hat = min_state_radius(s).sigma_hat;
    rep.rows.push_back(row);
  };

  try {
    evolve(split_data(data, cert.in.masses), cert.in.T, opts.dt, work, eopts);
  } catch (const SolverAbort& e) {
    rep.aborted = true;
    rep.abort_reason = e.what();
  }
  if (rep.rows.empty()) {
    rep.pass = false;
    return rep;
  }

  const double m_base = rep.rows.front().m;
  const double n_base = rep.rows.front().n;
  const double C = cert.in.consts.C;
  const double t2 = cert.in.T * cert.in.T;
  const double root_delta = std::sqrt(cert.delta);
  // per-window induction increments the arithmetic charges each window with
  const double m_step = C * sigma * root_delta * (2.0 * m_base) * (4.0 * cert.A * t2);
  const double n_step = C * root_delta * (2.0 * m_base);

  rep.checks = {
      {"spinor_cap", std::numeric_limits<double>::infinity(), 0.0, true},
      {"wave_cap", std::numeric_limits<double>::infinity(), 0.0, true},
      {"spinor_induction", std::numeric_limits<double>::infinity(), 0.0, true},
      {"wave_induction", std::numeric_limits<double>::infinity(), 0.0, true},
      {"measured_radius", std::numeric_limits<double>::infinity(), 0.0, true},
  };
  auto fold = [&](HypothesisCheck& c, double margin, double t) {
    if (std::isnan(margin)) {
      c.margin = kNaN;
      c.worst_t = t;
      c.pass = false;
      return;
    }
    if (margin < c.margin) {
      c.margin = margin;
      c.worst_t = t;
    }
    if (margin < 0.0) c.pass = false;
  };
  for (const VerifyRow& row : rep.rows) {
    fold(rep.checks[0], 2.0 * m_base - row.m, row.t);
    fold(rep.checks[1], 2.0 * cert.A * t2 - row.n, row.t);
    fold(rep.checks[2], m_base + row.windows * m_step - row.m, row.t);
    fold(rep.checks[3], n_base + row.windows * n_step - row.n, row.t);
    fold(rep.checks[4], row.sigma_hat - sigma, row.t);
  }

  rep.pass = !rep.aborted;
  for (const HypothesisCheck& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

std::vector<RadiusPoint> radius_curve(const CauchyData& data,
                                      const CertificateInputs& proto,
                                      const std::vector<double>& t_list,
                                      double dt, RhsWork& work) {
  if (t_list.empty())
    throw ValidationError("radius curve needs at least one target time");
  std::vector<double> ts = t_list;
  std::sort(ts.begin(), ts.end());
  if (!(ts.front() > 0.0))
    throw ValidationError("radius curve target times must be positive");

  const bool massless = proto.masses.kg == Masses::Kg::zero;
  CertificateInputs base = inputs_from_data(data, proto.masses, proto.sigma0,
                                            proto.consts, ts.back());
  GrowthEnvelope env;
  if (massless)
    env = fit_growth_envelope(data, proto.masses, ts.back(), dt, work);

  std::vector<RadiusPoint> out;
  State u = split_data(data, proto.masses);
  double reached = 0.0;
  for (double T : ts) {
    if (T > reached) {
      u = evolve(std::move(u), T - reached, dt, work);
      reached = T;
    }
    CertificateInputs in = base;
    in.T = T;
    Certificate cert =
        massless ? m0_certified_radius(in, env) : certified_radius(in);
    RadiusPoint p;
    p.T = T;
    p.sigma_cert = cert.sigma_cert;
    p.sigma_measured = min_state_radius(u).sigma_hat;
    p.certificate_valid = cert.valid();
    p.pass = p.certificate_valid && !std::isnan(p.sigma_measured) &&
             p.sigma_measured >= p.sigma_cert;
    out.push_back(p);
  }
  return out;
}

}  // namespace dkg
