#include "dkg/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dkg/generators.hpp"
#include "dkg/gevrey.hpp"
#include "dkg/types.hpp"

namespace dkg {
namespace {

// All contraction bookkeeping reads sigma-weighted norms of computed
// fields, so it floors them at the measurement resolution relative to the
// working scale (see gevrey_norm_floored).
constexpr double kMeasureFloor = 1e-13;

double norm_at(const Field& f, GevreyParams p) { return measured_norm(f, p); }

double spinor_norm(const State& u, double sigma) {
  return norm_at(u.psi_p, {sigma, 0.0}) + norm_at(u.psi_m, {sigma, 0.0});
}

double wave_norm(const State& u, double sigma) {
  return norm_at(u.wave_p, {sigma, 1.0}) + norm_at(u.wave_m, {sigma, 1.0});
}

double state_scale(const State& u) {
  return std::max({max_abs_coeff(u.psi_p), max_abs_coeff(u.psi_m),
                   max_abs_coeff(u.wave_p), max_abs_coeff(u.wave_m)});
}

void require_massive(Masses masses) {
  if (masses.kg != Masses::Kg::one)
    throw ValidationError("the contraction solver runs in the massive "
                          "normalization; rescale massless data first");
}

// free flow over t applied to the four characteristic slots of a tangent
Deriv pull(const Deriv& d, double t) {
  Deriv e;
  e.psi_p = propagate(d.psi_p, Dispersion::plus_xi, t);
  e.psi_m = propagate(d.psi_m, Dispersion::minus_xi, t);
  e.wave_p = propagate(d.wave_p, Dispersion::plus_bracket, t);
  e.wave_m = propagate(d.wave_m, Dispersion::minus_bracket, t);
  return e;
}

void axpy_deriv(Deriv& y, double a, const Deriv& x) {
  axpy(y.psi_p, a, x.psi_p);
  axpy(y.psi_m, a, x.psi_m);
  axpy(y.wave_p, a, x.wave_p);
  axpy(y.wave_m, a, x.wave_m);
}

// W(t)(u0 + I): the Duhamel assembly of a node at time t
State assemble(const State& initial, const Deriv& acc, double t) {
  State u = initial;
  u.psi_p = propagate(add(initial.psi_p, acc.psi_p), Dispersion::plus_xi, t);
  u.psi_m = propagate(add(initial.psi_m, acc.psi_m), Dispersion::minus_xi, t);
  u.wave_p =
      propagate(add(initial.wave_p, acc.wave_p), Dispersion::plus_bracket, t);
  u.wave_m =
      propagate(add(initial.wave_m, acc.wave_m), Dispersion::minus_bracket, t);
  u.t = t;
  return u;
}

// sup over the mesh of the difference norms between two paths; the floor
// sits at the iterates' own scale, so agreement at measurement resolution
// reads as exactly zero
void path_difference(const PicardPath& a, const PicardPath& b, double sigma,
                     double* dA, double* dB) {
  *dA = 0.0;
  *dB = 0.0;
  for (int j = 0; j < kPicardNodes; ++j) {
    const State& u = a.nodes[j];
    const State& v = b.nodes[j];
    double floor = kMeasureFloor * std::max(state_scale(u), state_scale(v));
    double sa =
        gevrey_norm_floored(sub(u.psi_p, v.psi_p), {sigma, 0.0}, floor).value +
        gevrey_norm_floored(sub(u.psi_m, v.psi_m), {sigma, 0.0}, floor).value;
    double sb =
        gevrey_norm_floored(sub(u.wave_p, v.wave_p), {sigma, 1.0}, floor).value +
        gevrey_norm_floored(sub(u.wave_m, v.wave_m), {sigma, 1.0}, floor).value;
    *dA = std::max(*dA, sa);
    *dB = std::max(*dB, sb);
  }
}

void check_path_finite(const PicardPath& p) {
  for (const State& u : p.nodes)
    if (!(all_finite(u.psi_p) && all_finite(u.psi_m) && all_finite(u.wave_p) &&
          all_finite(u.wave_m)))
      throw SolverAbort("non-finite Picard iterate");
}

// free transverse waves u = W(t)f (right-mover), v = W(t)g (left-mover):
// sqrt(int_0^T |u v|_{L^2}^2 dt) / (|f| |g|), the sharp bilinear ratio
double transverse_product_ratio(const Field& f, const Field& g, double horizon) {
  double den = l2_norm(f) * l2_norm(g);
  if (den == 0.0) return 0.0;
  const GridPtr& grid = f.grid;
  double dt = 0.5 * grid->dx();
  int steps = std::max(64, static_cast<int>(std::ceil(horizon / dt)));
  dt = horizon / steps;
  double acc = 0.0;
  for (int j = 0; j <= steps; ++j) {
    double t = dt * j;
    Field u = propagate(f, Dispersion::plus_xi, t);
    Field v = propagate(g, Dispersion::minus_xi, t);
    double val = l2_norm(dealias_product(u, v));
    double w = (j == 0 || j == steps) ? 0.5 : 1.0;
    acc += w * val * val * dt;
  }
  return std::sqrt(acc) / den;
}

}  // namespace

double local_timestep(double a0, double b0, const CalibratedConstants& k) {
  if (a0 < 0.0 || b0 < 0.0)
    throw ValidationError("local_timestep needs nonnegative data norms");
  return k.c0 / (1.0 + a0 * a0 + b0);
}

PicardPath free_iterate(const State& initial, double delta) {
  require_massive(initial.masses);
  if (!(delta > 0.0)) throw ValidationError("free_iterate needs delta > 0");
  PicardPath path;
  path.delta = delta;
  path.nodes.reserve(kPicardNodes);
  Deriv zero = deriv_like(initial);
  for (int j = 0; j < kPicardNodes; ++j)
    path.nodes.push_back(assemble(initial, zero, delta * j / kPicardIntervals));
  return path;
}

PicardPath iterate_once(const PicardPath& path, const State& initial,
                        RhsWork& work) {
  require_massive(initial.masses);
  const double delta = path.delta;
  const double h = delta / kPicardIntervals;

  // interaction-picture integrand G(s) = W(-s) F(u(s)) at the mesh nodes
  std::vector<Deriv> g;
  g.reserve(kPicardNodes);
  for (int j = 0; j < kPicardNodes; ++j)
    g.push_back(pull(work.nonlinear(path.nodes[j]), -h * j));

  // cumulative integral by the fourth-order interpolatory rule, then
  // nodes_{n+1}(t_j) = W(t_j)(u0 + I_j)
  PicardPath next;
  next.delta = delta;
  next.nodes.reserve(kPicardNodes);
  Deriv acc = deriv_like(initial);
  const double c = h / 24.0;
  for (int j = 0; j < kPicardNodes; ++j) {
    if (j == 1) {
      axpy_deriv(acc, 9.0 * c, g[0]);
      axpy_deriv(acc, 19.0 * c, g[1]);
      axpy_deriv(acc, -5.0 * c, g[2]);
      axpy_deriv(acc, c, g[3]);
    } else if (j > 1 && j < kPicardNodes - 1) {
      axpy_deriv(acc, -c, g[j - 2]);
      axpy_deriv(acc, 13.0 * c, g[j - 1]);
      axpy_deriv(acc, 13.0 * c, g[j]);
      axpy_deriv(acc, -c, g[j + 1]);
    } else if (j == kPicardNodes - 1) {
      axpy_deriv(acc, c, g[j - 3]);
      axpy_deriv(acc, -5.0 * c, g[j - 2]);
      axpy_deriv(acc, 19.0 * c, g[j - 1]);
      axpy_deriv(acc, 9.0 * c, g[j]);
    }
    next.nodes.push_back(assemble(initial, acc, h * j));
  }
  check_path_finite(next);
  return next;
}

std::pair<PicardPath, PicardDiagnostics> run_contraction(
    const CauchyData& data, Masses masses, double sigma,
    const CalibratedConstants& k, RhsWork& work, int n_max, double tol) {
  require_massive(masses);
  State initial = split_data(data, masses);
  PicardDiagnostics diag;
  diag.sigma = sigma;
  diag.a0 = spinor_norm(initial, sigma);
  diag.b0 = wave_norm(initial, sigma);
  if (!std::isfinite(diag.a0) || !std::isfinite(diag.b0))
    throw ValidationError("contraction needs finite data norms at this sigma");
  diag.delta = local_timestep(diag.a0, diag.b0, k);

  PicardPath path = free_iterate(initial, diag.delta);
  auto record_size = [&](const PicardPath& p) {
    double a = 0.0, b = 0.0;
    for (const State& u : p.nodes) {
      a = std::max(a, spinor_norm(u, sigma));
      b = std::max(b, wave_norm(u, sigma));
    }
    diag.A.push_back(a);
    diag.B.push_back(b);
  };
  record_size(path);

  double prev_sum = -1.0;
  for (int n = 1; n <= n_max; ++n) {
    PicardPath next = iterate_once(path, initial, work);
    record_size(next);
    double da, db;
    path_difference(next, path, sigma, &da, &db);
    diag.dA.push_back(da);
    diag.dB.push_back(db);
    double sum = da + db;
    if (prev_sum > 0.0) diag.ratios.push_back(sum / prev_sum);
    prev_sum = sum;
    path = std::move(next);
    diag.iterations = n;
    if (sum < tol) {
      diag.converged = true;
      break;
    }
  }

  if (diag.converged) {
    PicardPath probe = iterate_once(path, initial, work);
    double da, db;
    path_difference(probe, path, sigma, &da, &db);
    diag.residual = da + db;
  }
  return {std::move(path), diag};
}

std::vector<CalibrationSample> calibration_samples(const GridPtr& grid) {
  std::vector<CalibrationSample> out;
  const GeneratorSpec shapes[2] = {
      {GeneratorSpec::Kind::poisson, 1.0, 1.0, 0},
      {GeneratorSpec::Kind::gaussian, 0.35, 1.0, 0},
  };
  const char* names[2] = {"poisson", "gaussian"};
  const double amps[3] = {0.1, 1.0, 10.0};
  for (int s = 0; s < 2; ++s) {
    Field base = generate(grid, shapes[s]);
    for (double amp : amps) {
      CalibrationSample cs;
      cs.label = std::string(names[s]) + "_amp" + std::to_string(amp);
      cs.data.psi_p = scaled(base, amp);
      cs.data.psi_m = scaled(base, 0.75 * amp);
      cs.data.phi0 = scaled(base, 0.5 * amp);
      cs.data.phi1 = make_zero_field(grid);
      out.push_back(std::move(cs));
    }
  }
  return out;
}

CalibrationReport calibrate(double dirac_mass,
                            const std::vector<CalibrationSample>& samples,
                            double sigma, RhsWork& work) {
  if (samples.empty())
    throw ValidationError("calibration needs a nonempty sample set");
  CalibrationReport rep;
  rep.sigma = sigma;
  rep.dirac_mass = dirac_mass;

  Masses masses{dirac_mass, Masses::Kg::one};
  struct Sizes {
    double a0, b0;
  };
  std::vector<Sizes> sizes;

  for (const CalibrationSample& s : samples) {
    rep.sample_labels.push_back(s.label);
    State u0 = split_data(s.data, masses);
    double a0 = spinor_norm(u0, sigma);
    double b0 = wave_norm(u0, sigma);
    sizes.push_back({a0, b0});

    // mass term: the free flow is an isometry, so the sharp ratio is 1
    if (a0 > 0.0) {
      PicardPath free_path = free_iterate(u0, 1.0);
      for (const State& u : free_path.nodes)
        rep.ratio_mass = std::max(rep.ratio_mass, spinor_norm(u, sigma) / a0);
    }

    // product term: |f g|_{G^{sigma,0}} <= C |f|_{G^{sigma,1}} |g|_{G^{sigma,0}}
    const Field* fields[3] = {&s.data.psi_p, &s.data.psi_m, &s.data.phi0};
    for (const Field* f : fields)
      for (const Field* g : fields) {
        double den = norm_at(*f, {sigma, 1.0}) * norm_at(*g, {sigma, 0.0});
        if (den <= 0.0) continue;
        double num = norm_at(dealias_product(*f, *g), {sigma, 0.0});
        rep.ratio_product = std::max(rep.ratio_product, num / den);
      }

    // null term: transverse free-wave product, uniform over the horizon
    for (double horizon : {1.0, 4.0})
      rep.ratio_null =
          std::max(rep.ratio_null, transverse_product_ratio(
                                       s.data.psi_p, s.data.psi_m, horizon));
  }

  double sharp = std::max({rep.ratio_mass, rep.ratio_product, rep.ratio_null});
  rep.consts.C = std::max(2.0 * sharp, 17.0 / 16.0);

  // per-sample caps on delta: the size condition keeps A_n <= 2 a0 and
  // B_n <= 2 (a0 + b0); the quadratic condition keeps the difference map a
  // 1/2-contraction. Solve C d (M + 4a + 2b) + 4 C sqrt(d) a = 1/2 for d.
  const double C = rep.consts.C;
  double cand = std::numeric_limits<double>::infinity();
  for (const Sizes& z : sizes) {
    double denom = 1.0 + z.a0 * z.a0 + z.b0;
    double cap1 = 2.0 * C * (dirac_mass + 2.0 * z.a0 + 2.0 * z.b0);
    if (cap1 > 0.0) cand = std::min(cand, denom / cap1);
    double alpha = C * (dirac_mass + 4.0 * z.a0 + 2.0 * z.b0);
    double beta = 4.0 * C * z.a0;
    if (alpha > 0.0 && beta > 0.0) {
      double sq = (-beta + std::sqrt(beta * beta + 2.0 * alpha)) / (2.0 * alpha);
      cand = std::min(cand, denom * sq * sq);
    } else if (alpha > 0.0) {
      cand = std::min(cand, denom / (2.0 * alpha));
    }
  }
  if (!std::isfinite(cand))
    throw ValidationError("calibration samples are all zero");
  rep.c0_candidate = cand;

  // floor to a 24-bit dyadic, then halve until every sample contracts
  double c0 = std::floor(std::ldexp(cand, 24)) * std::ldexp(1.0, -24);
  for (int tries = 0;; ++tries) {
    if (tries > 20 || !(c0 > 0.0))
      throw SolverAbort("calibration failed to find a contracting c0");
    CalibratedConstants k{c0, C, 1.0 / std::sqrt(c0)};
    bool ok = true;
    for (const CalibrationSample& s : samples) {
      auto [path, diag] = run_contraction(s.data, masses, sigma, k, work);
      (void)path;
      if (!diag.converged) ok = false;
      for (double r : diag.ratios)
        if (r > 0.5) ok = false;
    }
    if (ok) {
      rep.halvings = tries;
      rep.consts = k;
      break;
    }
    c0 *= 0.5;
  }
  return rep;
}

}  // namespace dkg
