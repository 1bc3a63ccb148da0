#include <cmath>
#include <vector>

#include "doctest.h"

#include "dkg/generators.hpp"
#include "dkg/gevrey.hpp"
#include "dkg/multiplier.hpp"
#include "dkg/rhs.hpp"
#include "dkg/state.hpp"
#include "dkg/stepper.hpp"

using namespace dkg;

namespace {

GridPtr small_grid() { return make_grid(16.0 * M_PI, 1024); }

Field gen(const GridPtr& g, GeneratorSpec::Kind kind, double amp, int mod = 0) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.amplitude = amp;
  spec.mod_k = mod;
  return generate(g, spec);
}

CauchyData sample_data(const GridPtr& g) {
  return {gen(g, GeneratorSpec::Kind::poisson, 1.0),
          gen(g, GeneratorSpec::Kind::poisson, 0.75, 16),
          gen(g, GeneratorSpec::Kind::poisson, 0.5),
          gen(g, GeneratorSpec::Kind::gaussian, 0.25)};
}

double state_sup_diff(const State& a, const State& b) {
  double m = 0.0;
  for (auto [fa, fb] : {std::pair<const Field*, const Field*>{&a.psi_p, &b.psi_p},
                        {&a.psi_m, &b.psi_m},
                        {&a.wave_p, &b.wave_p},
                        {&a.wave_m, &b.wave_m}}) {
    std::vector<cplx> sa = to_samples(*fa), sb = to_samples(*fb);
    for (std::size_t j = 0; j < sa.size(); ++j)
      m = std::max(m, std::abs(sa[j] - sb[j]));
  }
  m = std::max(m, std::abs(a.zero_phi - b.zero_phi));
  m = std::max(m, std::abs(a.zero_dphi - b.zero_dphi));
  return m;
}

double data_sup_diff(const CauchyData& a, const CauchyData& b) {
  double m = 0.0;
  for (auto [fa, fb] : {std::pair<const Field*, const Field*>{&a.psi_p, &b.psi_p},
                        {&a.psi_m, &b.psi_m},
                        {&a.phi0, &b.phi0},
                        {&a.phi1, &b.phi1}}) {
    for (int i = 0; i < fa->size(); ++i)
      m = std::max(m, std::abs(fa->c[i] - fb->c[i]));
  }
  return m;
}

}  // namespace

TEST_SUITE("dkg_core") {

TEST_CASE("splitting the wave datum divides by the bracket") {
  // L = pi: <3> = sqrt(10). With phi(0) = 0 the half waves are
  // +- (i/2) <D>^{-1} phi1.
  GridPtr g = make_grid(M_PI, 32);
  Field phi1 = make_zero_field(g);
  phi1.c[g->index_of_mode(3)] = cplx(2.0, 0.0);
  CauchyData d{make_zero_field(g), make_zero_field(g), make_zero_field(g), phi1};
  State u = split_data(d, {});
  cplx expected = cplx(0.0, 1.0) / std::sqrt(10.0);  // (i/2) * 2 / <3>
  CHECK(std::abs(u.wave_p.c[g->index_of_mode(3)] - expected) < 1e-14);
  CHECK(std::abs(u.wave_m.c[g->index_of_mode(3)] + expected) < 1e-14);
}

TEST_CASE("split and recombine round-trip the Cauchy data") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  for (Masses m : {Masses{1.0, Masses::Kg::one}, Masses{1.0, Masses::Kg::zero}}) {
    State u = split_data(d, m);
    Recombined rc = recombine(u);
    double scale = max_abs_coeff(d.phi0) + max_abs_coeff(d.phi1);
    CHECK(data_sup_diff({d.psi_p, d.psi_m, rc.phi, rc.dphi_dt}, d) < 1e-12 * scale);
    CHECK(max_abs_coeff(sub(phi_field(u), d.phi0)) < 1e-12 * scale);
    CHECK(wave_reality_defect(u) < 1e-13 * scale);
  }
}

TEST_CASE("massless split refuses to drop a growing zero mode") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  // phi1 = gaussian has a nonzero mean
  CHECK_THROWS_AS(split_data(d, {1.0, Masses::Kg::zero}, false), ValidationError);
  CHECK_NOTHROW(split_data(d, {1.0, Masses::Kg::one}, false));
}

TEST_CASE("free massless flow matches the dAlembert solution") {
  GridPtr g = small_grid();
  CauchyData d{make_zero_field(g), make_zero_field(g),
               gen(g, GeneratorSpec::Kind::poisson, 1.0),
               gen(g, GeneratorSpec::Kind::gaussian, 0.5)};
  Masses m{1.0, Masses::Kg::zero};
  RhsWork work(g);
  double T = 1.0;
  State u = evolve(split_data(d, m), T, 1e-2, work);

  // with psi = 0 the coupling vanishes: phi^(t) = cos(t|xi|) phi0^ +
  // sin(t|xi|)/|xi| phi1^ mode-wise, and the zero mode grows linearly
  Field phi = phi_field(u);
  double mean0 = 0.0, mean1 = 0.0;
  double worst = 0.0;
  for (int i = 0; i < g->size(); ++i) {
    double xi = g->freq(i);
    cplx expect;
    if (i == g->index_of_mode(0)) {
      mean0 = d.phi0.c[i].real();
      mean1 = d.phi1.c[i].real();
      expect = cplx(mean0 + T * mean1, 0.0);
    } else {
      expect = std::cos(T * std::abs(xi)) * d.phi0.c[i] +
               std::sin(T * std::abs(xi)) / std::abs(xi) * d.phi1.c[i];
    }
    worst = std::max(worst, std::abs(phi.c[i] - expect));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("massless coupled run conserves charge and stays real") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  Masses m{1.0, Masses::Kg::zero};
  RhsWork work(g);
  State u0 = split_data(d, m);
  double q0 = charge(u0.psi_p, u0.psi_m);
  State u = evolve(u0, 1.0, 1e-3, work);
  CHECK(std::abs(charge(u.psi_p, u.psi_m) / q0 - 1.0) < 1e-10);
  CHECK(wave_reality_defect(u) < 1e-9);
  CHECK(std::abs(u.zero_phi.imag()) < 1e-12);
  CHECK(std::abs(u.zero_dphi.imag()) < 1e-12);
}

TEST_CASE("massive run: charge conserved, reality preserved over 1000 steps") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  RhsWork work(g);
  State u0 = split_data(d, {});
  double q0 = charge(u0.psi_p, u0.psi_m);
  State u = evolve(u0, 1.0, 1e-3, work);
  CHECK(u.t == doctest::Approx(1.0));
  CHECK(std::abs(charge(u.psi_p, u.psi_m) / q0 - 1.0) < 1e-10);
  CHECK(wave_reality_defect(u) < 1e-9);
}

TEST_CASE("stepper converges at fourth order") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  RhsWork work(g);
  State ref = evolve(split_data(d, {}), 0.5, 0.5 / 512, work);
  double err[2];
  int steps[2] = {32, 64};
  for (int i = 0; i < 2; ++i) {
    State u = evolve(split_data(d, {}), 0.5, 0.5 / steps[i], work);
    err[i] = state_sup_diff(u, ref);
  }
  double order = std::log2(err[0] / err[1]);
  CHECK(order > 3.5);
  CHECK(order < 4.5);
}

TEST_CASE("evolve nudges dt onto the horizon and rejects a large nudge") {
  GridPtr g = make_grid(M_PI, 32);
  CauchyData d{make_zero_field(g), make_zero_field(g), make_zero_field(g),
               make_zero_field(g)};
  RhsWork work(g);
  State u = evolve(split_data(d, {}), 1.0, 0.2500000001, work);  // 4 steps
  CHECK(u.t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(evolve(split_data(d, {}), 1.0, 0.26, work), ValidationError);
}

TEST_CASE("blowup scaling trips the abort guard") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  for (Field* f : {&d.psi_p, &d.psi_m, &d.phi0})
    *f = scaled(*f, cplx(300.0, 0.0));
  RhsWork work(g);
  CHECK_THROWS_AS(evolve(split_data(d, {}), 10.0, 5e-2, work), SolverAbort);
}

TEST_CASE("time reversal is an involution and reverses the flow") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  CHECK(data_sup_diff(time_reversal_data(time_reversal_data(d)), d) == 0.0);

  RhsWork work(g);
  double T = 0.5;
  auto forward = [&](const CauchyData& c) {
    State u = evolve(split_data(c, {}), T, 1e-3, work);
    Recombined rc = recombine(u);
    return CauchyData{u.psi_p, u.psi_m, rc.phi, rc.dphi_dt};
  };
  // run out, reverse, run out again, reverse back: lands on the data
  CauchyData back = time_reversal_data(forward(time_reversal_data(forward(d))));
  double scale = max_abs_coeff(d.psi_p);
  CHECK(data_sup_diff(back, d) < 1e-9 * scale);
}

TEST_CASE("rescaling to unit mass preserves the radius structure") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  RescaledData r = rescale_to_unit_mass(d, 1.0, 2.0);
  CHECK(r.dirac == doctest::Approx(0.5));
  CHECK(r.time_scale == doctest::Approx(2.0));
  CHECK(r.data.psi_p.grid->domain_half_length() ==
        doctest::Approx(2.0 * g->domain_half_length()));
  // spinor scaling m^{-3/2} in space is m^{-1/2} on coefficients
  CHECK(max_abs_coeff(r.data.psi_p) ==
        doctest::Approx(max_abs_coeff(d.psi_p) / std::sqrt(2.0)).epsilon(1e-12));
  // phi1 scaling m^{-2} in space is m^{-1} on coefficients
  CHECK(max_abs_coeff(r.data.phi1) ==
        doctest::Approx(max_abs_coeff(d.phi1) / 2.0).epsilon(1e-12));
}

TEST_CASE("ledger observer records monotone time and plausible radii") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  RhsWork work(g);
  NormLedger ledger;
  ledger.sigma = 0.3;
  EvolveOptions opts;
  opts.probe_interval = 0.1;
  opts.observer = ledger_observer(ledger);
  evolve(split_data(d, {}), 0.5, 1e-2, work, opts);
  REQUIRE(ledger.rows.size() == 6);
  for (std::size_t i = 1; i < ledger.rows.size(); ++i)
    CHECK(ledger.rows[i].t > ledger.rows[i - 1].t);
  for (const LedgerRow& r : ledger.rows) {
    CHECK(r.m_sigma > 0.0);
    CHECK(r.n_sigma > 0.0);
    CHECK(std::isnan(r.phi_l2));
    CHECK(r.sigma_hat > 0.8);  // data strip is 1
    CHECK(r.sigma_hat < 1.2);
  }
}

TEST_CASE("minimum state radius skips empty slots") {
  GridPtr g = small_grid();
  CauchyData d = sample_data(g);
  d.psi_m = make_zero_field(g);  // no signal in one spinor half
  State u = split_data(d, {});
  RadiusFit fit = min_state_radius(u);
  CHECK(!std::isnan(fit.sigma_hat));
  CHECK(fit.sigma_hat > 0.8);

  State empty = split_data({make_zero_field(g), make_zero_field(g),
                            make_zero_field(g), make_zero_field(g)}, {});
  CHECK(std::isnan(min_state_radius(empty).sigma_hat));
}

}  // TEST_SUITE
