#include "dkg/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dkg/generators.hpp"
#include "dkg/gevrey.hpp"
#include "dkg/stepper.hpp"
#include "dkg/types.hpp"

namespace dkg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RatioReport make_report(std::string check, std::string sample, double lhs,
                        double rhs, double pass_constant) {
  RatioReport r;
  r.check = std::move(check);
  r.sample = std::move(sample);
  r.lhs = lhs;
  r.rhs = rhs;
  if (!std::isfinite(rhs)) {
    r.vacuous = true;
    r.ratio = 0.0;
    r.pass = true;  // an infinite bound constrains nothing
  } else if (rhs == 0.0) {
    r.ratio = lhs == 0.0 ? 0.0 : kInf;
    r.pass = lhs == 0.0;
  } else {
    r.ratio = lhs / rhs;
    r.pass = r.ratio <= pass_constant;
  }
  return r;
}

// cumulative space-time quadrature of ||product(t)||^2 against sorted
// horizons; left_mover selects the transverse configuration
std::vector<RatioReport> product_quadrature(
    const Field& f, const Field& g, double sigma, bool second_left_mover,
    const std::vector<double>& horizons, double pass_constant,
    const NullFormOptions& opts, const char* check_name) {
  check_same_grid(f, g);
  if (horizons.empty())
    throw ValidationError("bilinear check needs at least one horizon");
  const GridPtr& grid = f.grid;
  double dt = opts.dt > 0.0 ? opts.dt : 0.5 * grid->dx();
  if (dt > grid->dx())
    throw ValidationError(
        "bilinear quadrature step exceeds the grid spacing; the space-time "
        "norm would be under-resolved");

  std::vector<double> hs = horizons;
  std::sort(hs.begin(), hs.end());
  if (!(hs.front() > 0.0))
    throw ValidationError("bilinear check horizons must be positive");

  double rhs = gevrey_norm(f, {sigma, 0.0}).value *
               gevrey_norm(g, {sigma, 0.0}).value;

  GevreyParams p{sigma, 0.0};
  auto slice = [&](double t) {
    Field u = propagate(f, Dispersion::plus_xi, t);
    Field v = propagate(
        g, second_left_mover ? Dispersion::minus_xi : Dispersion::plus_xi, t);
    PaddedSamples up = to_padded_samples(u);
    PaddedSamples vp = to_padded_samples(v);
    Field prod = product_from_padded(up, vp, opts.conjugate_first, false);
    double val = measured_norm(prod, p);
    return val * val;
  };

  std::vector<RatioReport> out;
  double acc = 0.0;
  double t = 0.0;
  double prev = slice(0.0);
  for (double horizon : hs) {
    long long steps = std::llround((horizon - t) / dt);
    if (steps < 1) steps = 1;
    double h = (horizon - t) / steps;
    for (long long j = 1; j <= steps; ++j) {
      double cur = slice(t + h * j);
      acc += 0.5 * (prev + cur) * h;
      prev = cur;
    }
    t = horizon;
    RatioReport r =
        make_report(check_name, "", std::sqrt(acc), rhs, pass_constant);
    r.horizon = horizon;
    r.sigma = sigma;
    out.push_back(std::move(r));
  }
  return out;
}

double coupling_norm(const Deriv& d, char which, double sigma) {
  const Field& f = which == '+' ? d.psi_p : d.psi_m;
  return measured_norm(f, {sigma, 0.0});
}

}  // namespace

std::vector<RatioReport> check_null_form_gevrey(
    const Field& f, const Field& g, double sigma,
    const std::vector<double>& horizons, double pass_constant,
    const NullFormOptions& opts) {
  return product_quadrature(f, g, sigma, /*second_left_mover=*/true, horizons,
                            pass_constant, opts, "null_form");
}

RatioReport check_null_form(const Field& f, const Field& g, double horizon,
                            bool conjugate_first, double pass_constant) {
  NullFormOptions opts;
  opts.conjugate_first = conjugate_first;
  return check_null_form_gevrey(f, g, 0.0, {horizon}, pass_constant, opts)
      .front();
}

std::vector<RatioReport> check_parallel_control(
    const Field& f, const Field& g, const std::vector<double>& horizons,
    double pass_constant, const NullFormOptions& opts) {
  return product_quadrature(f, g, 0.0, /*second_left_mover=*/false, horizons,
                            pass_constant, opts, "parallel_control");
}

RatioReport check_sobolev_product(const Field& f, const Field& g, double sigma,
                                  double pass_constant) {
  double rhs = gevrey_norm(f, {sigma, 1.0}).value *
               gevrey_norm(g, {sigma, 0.0}).value;
  double lhs = measured_norm(dealias_product(f, g), {sigma, 0.0});
  RatioReport r = make_report("sobolev_product", "", lhs, rhs, pass_constant);
  r.sigma = sigma;
  return r;
}

double symbol_bound_margin(double sigma, double xi, int eps) {
  double lhs = std::abs(std::expm1(eps * sigma * xi));
  double rhs = sigma * std::abs(xi) * std::exp(sigma * std::abs(xi));
  return rhs - lhs;
}

SymbolBoundReport check_symbol_bound(const GridPtr& grid, double sigma_max,
                                     std::uint64_t seed, int random_draws) {
  SymbolBoundReport rep;
  rep.worst_margin = kInf;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick_sigma(0.0, sigma_max);

  auto probe = [&](double sigma, double xi, int eps) {
    double m = symbol_bound_margin(sigma, xi, eps);
    ++rep.points;
    if (m < rep.worst_margin) {
      rep.worst_margin = m;
      rep.worst_xi = xi;
      rep.worst_sigma = sigma;
      rep.worst_eps = eps;
    }
  };

  const double fixed[4] = {0.05, 0.2, sigma_max * 0.5, sigma_max};
  for (double sigma : fixed)
    for (double xi : grid->freqs())
      for (int eps : {-1, 1}) probe(sigma, xi, eps);
  for (int d = 0; d < random_draws; ++d) {
    double sigma = pick_sigma(rng);
    for (double xi : grid->freqs())
      for (int eps : {-1, 1}) probe(sigma, xi, eps);
  }
  rep.pass = rep.worst_margin >= 0.0;
  return rep;
}

ChargeDerivativeReport check_charge_derivative(const CauchyData& data,
                                               Masses masses, double sigma,
                                               int eps, double t_center,
                                               double dt, RhsWork& work) {
  if (eps != 1 && eps != -1)
    throw ValidationError("dressing sign must be -1 or +1");
  if (!(t_center - 2.0 * dt >= 0.0))
    throw ValidationError(
        "derivative stencil needs t_center at least two steps from zero");

  State u = split_data(data, masses);
  double lead = t_center - 2.0 * dt;
  if (lead > 0.0) u = evolve(u, lead, dt, work);

  auto m_eps = [&](const State& s) {
    MSigma m = m_sigma(s.psi_p, s.psi_m, sigma);
    return eps < 0 ? m.minus : m.plus;
  };

  double window[5];
  window[0] = m_eps(u);
  State center = u;
  for (int j = 1; j < 5; ++j) {
    u = lawson_rk4_step(u, dt, work);
    window[j] = m_eps(u);
    if (j == 2) center = u;
  }

  ChargeDerivativeReport rep;
  rep.sigma = sigma;
  rep.eps = eps;
  rep.t_center = t_center;
  rep.dt = dt;
  rep.fd = (window[0] - 8.0 * window[1] + 8.0 * window[3] - window[4]) /
           (12.0 * dt);

  Multiplier dress = Multiplier::exp_signed(eps, sigma);
  Field psi_p_dressed = apply_multiplier(center.psi_p, dress);
  Field psi_m_dressed = apply_multiplier(center.psi_m, dress);
  Field phi = phi_field(center);
  Field phi_comm = apply_multiplier(phi, Multiplier::symbol_diff(eps, sigma));
  Field force_p = dealias_product(phi_comm, psi_p_dressed);
  Field force_m = dealias_product(phi_comm, psi_m_dressed);
  rep.rhs = -2.0 * (inner(force_m, psi_p_dressed).imag() +
                    inner(force_p, psi_m_dressed).imag());

  double scale = std::max(std::abs(rep.fd), std::abs(rep.rhs));
  rep.residual_rel = scale > 0.0 ? std::abs(rep.fd - rep.rhs) / scale : 0.0;
  return rep;
}

AlmostConservationReport check_almost_conservation(
    const CauchyData& data, Masses masses, double sigma,
    const CalibratedConstants& consts, RhsWork& work, int steps) {
  AlmostConservationReport rep;
  rep.sigma = sigma;
  rep.massless = masses.kg == Masses::Kg::zero;

  State u0 = split_data(data, masses);
  MSigma m_init = m_sigma(u0.psi_p, u0.psi_m, sigma);
  rep.m0 = m_init.total;

  double phi_l2_0 = 0.0;
  if (!rep.massless) {
    rep.n0 = n_sigma(u0.wave_p, u0.wave_m, sigma);
  } else {
    phi_l2_0 = l2_norm(phi_field(u0));
    rep.n0 = phi_l2_0 + n_prime(u0.wave_p, u0.wave_m, sigma);
  }
  if (!std::isfinite(rep.m0) || !std::isfinite(rep.n0))
    throw ValidationError("window check needs finite data norms at this sigma");

  rep.delta = consts.c0 / (1.0 + rep.m0 + rep.n0);
  rep.dt = rep.delta / steps;

  // data side of the first iteration bound
  double f_norm_p = gevrey_norm(u0.psi_p, {sigma, 0.0}).value;
  double f_norm_m = gevrey_norm(u0.psi_m, {sigma, 0.0}).value;

  double sup_m = rep.m0, sup_n = rep.n0;
  double sup_wave_p = 0.0, sup_wave_m = 0.0;
  double sup_m_minus = m_init.minus, sup_m_plus = m_init.plus;
  double int_coupling_p = 0.0, int_coupling_m = 0.0;
  double prev_cp = 0.0, prev_cm = 0.0;

  State u = u0;
  for (int j = 0; j <= steps; ++j) {
    if (j > 0) u = lawson_rk4_step(u, rep.dt, work);
    MSigma m = m_sigma(u.psi_p, u.psi_m, sigma);
    sup_m = std::max(sup_m, m.total);
    sup_m_minus = std::max(sup_m_minus, m.minus);
    sup_m_plus = std::max(sup_m_plus, m.plus);
    double n_now;
    if (!rep.massless) {
      n_now = n_sigma(u.wave_p, u.wave_m, sigma);
      double wp = gevrey_norm(u.wave_p, {sigma, 1.0}).value;
      double wm = gevrey_norm(u.wave_m, {sigma, 1.0}).value;
      sup_wave_p = std::max(sup_wave_p, wp);
      sup_wave_m = std::max(sup_wave_m, wm);
      Deriv d = work.nonlinear(u);
      double cp = coupling_norm(d, '+', sigma);
      double cm = coupling_norm(d, '-', sigma);
      if (j > 0) {
        int_coupling_p += 0.5 * (prev_cp + cp) * rep.dt;
        int_coupling_m += 0.5 * (prev_cm + cm) * rep.dt;
      }
      prev_cp = cp;
      prev_cm = cm;
    } else {
      n_now = l2_norm(phi_field(u)) + n_prime(u.wave_p, u.wave_m, sigma);
    }
    sup_n = std::max(sup_n, n_now);
  }
  rep.sup_m = sup_m;
  rep.sup_n = sup_n;
  rep.inc_eps_minus = sup_m_minus - m_init.minus;
  rep.inc_eps_plus = sup_m_plus - m_init.plus;

  const double C = consts.C;
  double root_m = std::sqrt(rep.m0);
  double sqrt_delta = std::sqrt(rep.delta);
  rep.mest = make_report("almost_conservation_m", "", sup_m - rep.m0,
                         sigma * sqrt_delta * rep.m0 * (root_m + rep.n0), C);
  rep.mest.sigma = sigma;
  rep.nest = make_report("almost_conservation_n", "", sup_n - rep.n0,
                         sqrt_delta * rep.m0, C);
  rep.nest.sigma = sigma;

  if (!rep.massless) {
    rep.ib1_plus = make_report("iteration_bound_1", "+",
                               f_norm_p + int_coupling_p, root_m, C);
    rep.ib1_minus = make_report("iteration_bound_1", "-",
                                f_norm_m + int_coupling_m, root_m, C);
    rep.ib2_plus =
        make_report("iteration_bound_2", "+", sup_wave_p, root_m + rep.n0, C);
    rep.ib2_minus =
        make_report("iteration_bound_2", "-", sup_wave_m, root_m + rep.n0, C);
  } else {
    rep.ib1_plus.vacuous = rep.ib1_minus.vacuous = true;
    rep.ib2_plus.vacuous = rep.ib2_minus.vacuous = true;
    rep.ib1_plus.pass = rep.ib1_minus.pass = true;
    rep.ib2_plus.pass = rep.ib2_minus.pass = true;
  }
  return rep;
}

std::vector<SamplePair> standard_sample_pairs(const GridPtr& grid) {
  std::vector<SamplePair> out;
  Field poisson = generate(grid, {GeneratorSpec::Kind::poisson, 1.0, 1.0, 0});
  Field gauss = generate(grid, {GeneratorSpec::Kind::gaussian, 0.35, 1.0, 0});
  Field sech = generate(grid, {GeneratorSpec::Kind::sech, 1.0, 1.0, 0});
  Field gauss_mod =
      generate(grid, {GeneratorSpec::Kind::gaussian, 0.35, 1.0, 96});
  Field noise = random_band_limited(grid, kSampleLibrarySeed,
                                    grid->size() / 4, 0.15, true);
  // normalize the random sample to unit l2 so recorded ratios are scale-free
  double nn = l2_norm(noise);
  if (nn > 0.0) noise = scaled(noise, 1.0 / nn);

  out.push_back({"poisson_gauss", poisson, gauss});
  out.push_back({"gauss_sech", gauss, sech});
  out.push_back({"poisson_mod", poisson, gauss_mod});
  out.push_back({"noise_poisson", noise, poisson});
  return out;
}

}  // namespace dkg
