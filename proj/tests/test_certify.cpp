#include <cmath>
#include <vector>

#include "doctest.h"

#include "dkg/certify.hpp"
#include "dkg/generators.hpp"
#include "dkg/gevrey.hpp"

using namespace dkg;

namespace {

GridPtr cert_grid() { return make_grid(16.0 * M_PI, 1024); }

CalibratedConstants cal() {
  return {0.003939509391784668, 2.0000000000000004, 15.9323166726642};
}

CalibratedConstants unit_consts() { return {1.0, 2.0, 1.0}; }

CertificateInputs worked_inputs(double T = 10.0) {
  CertificateInputs in;
  in.sigma0 = 1.0;
  in.m0 = 1.0;
  in.n0 = 1.0;
  in.T = T;
  in.consts = unit_consts();
  return in;
}

CertificateInputs reference_inputs(double T = 10.0) {
  CertificateInputs in;
  in.sigma0 = 0.5;
  in.m0 = 5.333658844895283;
  in.n0 = 2.449498048365255;
  in.T = T;
  in.consts = cal();
  return in;
}

CauchyData cert_data(const GridPtr& g) {
  GeneratorSpec pp;
  pp.kind = GeneratorSpec::Kind::poisson;
  GeneratorSpec pm = pp;
  pm.amplitude = 0.75;
  pm.mod_k = 16;
  GeneratorSpec w = pp;
  w.amplitude = 0.5;
  return {generate(g, pp), generate(g, pm), generate(g, w), make_zero_field(g)};
}

// the identity the window count closes: n windows of spinor increment
// C sigma sqrt(delta) (2 m0)(4 A T^2) sum to m0, up to the ceil bump
double induction_slack_rel(const Certificate& c) {
  double m_step = c.in.consts.C * c.sigma_cert * std::sqrt(c.delta) *
                  (2.0 * c.in.m0) * (4.0 * c.A * c.in.T * c.in.T);
  return (c.in.m0 - c.n * m_step) / c.in.m0;
}

}  // namespace

TEST_SUITE("certify") {

TEST_CASE("worked example: every derived quantity is bit-exact") {
  Certificate c = certified_radius(worked_inputs());
  CHECK(c.valid());
  CHECK(c.tlarge_ok);
  CHECK(c.a_condition_ok);  // 2 C c2 m0 = 4 = sqrt(A): equality admitted
  CHECK(!c.clamped_to_sigma0);
  CHECK(!c.massless);
  CHECK(c.c2 == 1.0);
  CHECK(c.A == 16.0);
  CHECK(c.delta == 0.000625);
  CHECK(c.n == 16000.0);
  CHECK(c.n * c.delta == 10.0);
  CHECK(c.c_asym == 0.0009765625);
  CHECK(c.sigma_cert == 9.765625e-8);
}

TEST_CASE("calibrated constants reproduce the recorded massive certificate") {
  Certificate c = certified_radius(reference_inputs());
  CHECK(c.valid());
  CHECK(c.c2 == 15.9323166726642);
  CHECK(c.A == 115538.92160502668);
  CHECK(c.c_asym == 9.988692022396788e-11);
  CHECK(c.sigma_cert == 9.988692022396789e-15);
  CHECK(c.delta == 3.4096816354268406e-10);
  CHECK(c.n == 29328251342.0);
}

TEST_CASE("frozen growth envelope reproduces the recorded massless certificate") {
  CertificateInputs in;
  in.sigma0 = 0.5;
  in.m0 = 5.333658844895283;
  in.n0 = 3.0000406883657758;
  in.T = 20.0;
  in.masses = {1.0, Masses::Kg::zero};
  in.consts = cal();
  GrowthEnvelope env;
  env.alpha = 0.6931995592333625;
  env.beta = 0.07403172629025588;
  env.margin = 1.2559356323287911;
  env.valid = true;

  Certificate c = m0_certified_radius(in, env);
  CHECK(c.valid());
  CHECK(c.massless);
  CHECK(c.A == 115538.92160502668);  // spinor cap dominates the envelope term
  CHECK(c.sigma_cert == 6.242932513997993e-16);
  CHECK(c.delta == 8.524204088676095e-11);
  CHECK(c.n == 234626010733.0);
  CHECK(c.growth.alpha == env.alpha);
  CHECK(c.growth.beta == env.beta);
}

TEST_CASE("doubling the horizon divides the radius by exactly sixteen") {
  for (double T : {10.0, 20.0, 40.0}) {
    Certificate a = certified_radius(worked_inputs(T));
    Certificate b = certified_radius(worked_inputs(2.0 * T));
    CHECK(a.sigma_cert / b.sigma_cert == 16.0);

    Certificate ra = certified_radius(reference_inputs(T));
    Certificate rb = certified_radius(reference_inputs(2.0 * T));
    CHECK(ra.sigma_cert / rb.sigma_cert == 16.0);
  }
}

TEST_CASE("substituting the radius back closes the window sum") {
  std::vector<Certificate> certs;
  certs.push_back(certified_radius(worked_inputs()));
  certs.push_back(certified_radius(reference_inputs()));
  CertificateInputs syn;
  syn.sigma0 = 0.4;
  syn.m0 = 0.7;
  syn.n0 = 1.3;
  syn.T = 7.0;
  syn.consts = cal();
  certs.push_back(certified_radius(syn));
  for (const Certificate& c : certs) {
    REQUIRE(c.valid());
    REQUIRE(!c.clamped_to_sigma0);
    // the ceil bump perturbs the sum by at most one window, the integer
    // snap by 1e-9 n; everything else is roundoff
    CHECK(std::abs(induction_slack_rel(c)) <= 1.0 / c.n + 1e-9);
  }
}

TEST_CASE("a short horizon below the data norms makes no claim") {
  CertificateInputs in = worked_inputs(1.0);
  in.m0 = 5.0;
  in.n0 = 2.0;
  Certificate c = certified_radius(in);
  CHECK(!c.tlarge_ok);
  CHECK(!c.valid());

  GridPtr g = cert_grid();
  RhsWork work(g);
  CHECK_THROWS_AS(verify_certificate(cert_data(g), c, {}, work), ValidationError);
}

TEST_CASE("small data clamps the radius to sigma0") {
  CertificateInputs in = worked_inputs(1.0);
  in.m0 = 0.01;
  in.n0 = 0.01;
  in.sigma0 = 0.01;
  Certificate c = certified_radius(in);
  CHECK(c.valid());
  CHECK(c.clamped_to_sigma0);
  CHECK(c.sigma_cert == 0.01);
}

TEST_CASE("window count never drops below one") {
  CertificateInputs in;
  in.sigma0 = 0.2;
  in.m0 = 0.1;
  in.n0 = 0.1;
  in.T = 1.0;
  in.consts = {10.0, 2.0, 1.0 / std::sqrt(10.0)};
  Certificate c = certified_radius(in);  // raw window c0 / (A T^2) = 10 > T
  CHECK(c.n == 1.0);
  CHECK(c.delta == 1.0);
}

TEST_CASE("mass-case routing and input validation") {
  CertificateInputs in = worked_inputs();
  in.masses = {1.0, Masses::Kg::zero};
  CHECK_THROWS_AS(certified_radius(in), ValidationError);

  GrowthEnvelope env;
  CHECK_THROWS_AS(m0_certified_radius(worked_inputs(), env), ValidationError);

  CertificateInputs m0in = worked_inputs();
  m0in.masses = {1.0, Masses::Kg::zero};
  GrowthEnvelope bad;
  bad.valid = false;
  CHECK_THROWS_AS(m0_certified_radius(m0in, bad), ValidationError);

  CertificateInputs neg = worked_inputs();
  neg.m0 = -1.0;
  CHECK_THROWS_AS(certified_radius(neg), ValidationError);
  CertificateInputs not_yet = worked_inputs();
  not_yet.T = 0.0;
  CHECK_THROWS_AS(certified_radius(not_yet), ValidationError);
}

TEST_CASE("inputs measured from data match the norm functionals") {
  GridPtr g = cert_grid();
  CauchyData d = cert_data(g);

  CertificateInputs mi = inputs_from_data(d, {}, 0.3, cal(), 5.0);
  State u = split_data(d, {});
  CHECK(mi.m0 == doctest::Approx(m_sigma(u.psi_p, u.psi_m, 0.3).total).epsilon(1e-14));
  CHECK(mi.n0 == doctest::Approx(n_sigma(u.wave_p, u.wave_m, 0.3)).epsilon(1e-14));
  CHECK(mi.T == 5.0);

  Masses m0m{1.0, Masses::Kg::zero};
  CertificateInputs zi = inputs_from_data(d, m0m, 0.3, cal(), 5.0);
  State uz = split_data(d, m0m);
  CHECK(zi.m0 == doctest::Approx(m_sigma(uz.psi_p, uz.psi_m, 0.3).total).epsilon(1e-14));
  CHECK(zi.n0 == doctest::Approx(l2_norm(phi_field(uz)) +
                                 n_prime(uz.wave_p, uz.wave_m, 0.3)).epsilon(1e-14));

  // sigma0 at the data strip radius: the wave functional diverges
  CHECK_THROWS_AS(inputs_from_data(d, {}, 1.0, cal(), 5.0), ValidationError);
}

TEST_CASE("verification holds on a resolved massive run") {
  GridPtr g = cert_grid();
  RhsWork work(g);
  CauchyData d = cert_data(g);
  Certificate c = certified_radius(inputs_from_data(d, {}, 0.3, cal(), 3.0));
  REQUIRE(c.valid());

  VerifyOptions opts;
  opts.dt = 0.01;
  opts.probes = 4;
  VerificationReport rep = verify_certificate(d, c, opts, work);
  CHECK(rep.pass);
  CHECK(!rep.aborted);
  CHECK(rep.sigma == c.sigma_cert);
  REQUIRE(rep.rows.size() == 5);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].t == doctest::Approx(0.75 * i).epsilon(1e-12));
    if (i > 0) CHECK(rep.rows[i].windows >= rep.rows[i - 1].windows);
  }
  CHECK(rep.rows.front().windows == 0.0);

  REQUIRE(rep.checks.size() == 5);
  for (const HypothesisCheck& hc : rep.checks) CHECK(hc.pass);
  // the induction bounds are tight exactly at t = 0
  CHECK(rep.checks[2].margin == 0.0);
  CHECK(rep.checks[2].worst_t == 0.0);
  CHECK(rep.checks[3].margin == 0.0);
  CHECK(rep.checks[3].worst_t == 0.0);
  CHECK(rep.checks[4].margin > 0.5);  // measured radius ~1 vs a tiny sigma_cert
}

TEST_CASE("an adversarial radius claim fails the measured-radius hypothesis") {
  GridPtr g = cert_grid();
  RhsWork work(g);
  CauchyData d = cert_data(g);
  Certificate c = certified_radius(inputs_from_data(d, {}, 0.3, cal(), 3.0));

  VerifyOptions opts;
  opts.dt = 0.01;
  opts.probes = 2;
  opts.sigma_override = 1.5;  // beyond the poisson strip
  VerificationReport rep = verify_certificate(d, c, opts, work);
  CHECK(rep.sigma == 1.5);
  CHECK(!rep.pass);
  CHECK(!rep.checks[4].pass);
  CHECK(rep.checks[4].margin < 0.0);
}

TEST_CASE("an aborted evolution yields a partial failed report") {
  GridPtr g = cert_grid();
  RhsWork work(g);
  CauchyData wild = cert_data(g);
  for (Field* f : {&wild.psi_p, &wild.psi_m, &wild.phi0})
    for (int i = 0; i < f->size(); ++i) f->c[i] *= 300.0;

  CertificateInputs in;
  in.sigma0 = 0.3;
  in.m0 = 0.1;
  in.n0 = 0.1;
  in.T = 2.0;
  in.consts = cal();
  Certificate c = certified_radius(in);

  VerifyOptions opts;
  opts.dt = 0.05;
  opts.probes = 4;
  VerificationReport rep = verify_certificate(wild, c, opts, work);
  CHECK(rep.aborted);
  CHECK(!rep.abort_reason.empty());
  CHECK(!rep.pass);
  CHECK(rep.rows.size() >= 1);
  CHECK(rep.rows.size() < 5);
}

TEST_CASE("growth envelope: massless only, bounded free wave fits flat") {
  GridPtr g = cert_grid();
  RhsWork work(g);
  CauchyData d = cert_data(g);
  CHECK_THROWS_AS(fit_growth_envelope(d, {}, 4.0, 0.01, work), ValidationError);

  CauchyData free_wave{make_zero_field(g), make_zero_field(g),
                       cert_data(g).phi0, make_zero_field(g)};
  Masses m0m{1.0, Masses::Kg::zero};
  CHECK_THROWS_AS(fit_growth_envelope(free_wave, m0m, 4.0, 1.0 / 128.0, work, 4),
                  ValidationError);

  GrowthEnvelope env = fit_growth_envelope(free_wave, m0m, 4.0, 1.0 / 128.0, work);
  CHECK(env.valid);
  CHECK(env.margin >= 0.0);
  CHECK(env.alpha > 0.0);
  CHECK(env.beta >= 0.0);
  // without a spinor source the scalar norm cannot grow: near-flat envelope
  CHECK(env.beta < 0.05 * env.alpha);
}

TEST_CASE("massless verification passes with the envelope-aware certificate") {
  GridPtr g = cert_grid();
  RhsWork work(g);
  // scalar from rest: the sourced norm grows monotonically, so the
  // first-half quadratic fit extends over the validation half
  CauchyData full = cert_data(g);
  CauchyData d{full.psi_p, full.psi_m, make_zero_field(g), make_zero_field(g)};
  Masses m0m{1.0, Masses::Kg::zero};
  GrowthEnvelope env = fit_growth_envelope(d, m0m, 4.0, 1.0 / 128.0, work);
  REQUIRE(env.valid);
  CHECK(env.beta > 0.0);
  Certificate c = m0_certified_radius(inputs_from_data(d, m0m, 0.3, cal(), 4.0), env);
  REQUIRE(c.valid());
  CHECK(c.massless);

  VerifyOptions opts;
  opts.dt = 1.0 / 128.0;
  opts.probes = 4;
  VerificationReport rep = verify_certificate(d, c, opts, work);
  CHECK(rep.pass);
  REQUIRE(rep.rows.size() == 5);
  CHECK(std::isfinite(rep.rows.back().n));
}

TEST_CASE("radius curve: invalid below the norm floor, sixteenfold decay above") {
  GridPtr g = cert_grid();
  RhsWork work(g);
  CauchyData d = cert_data(g);
  CertificateInputs proto;
  proto.sigma0 = 0.3;
  proto.consts = cal();

  CHECK_THROWS_AS(radius_curve(d, proto, {}, 0.01, work), ValidationError);
  CHECK_THROWS_AS(radius_curve(d, proto, {0.0}, 0.01, work), ValidationError);

  std::vector<RadiusPoint> pts = radius_curve(d, proto, {4.0, 1.0, 8.0}, 0.01, work);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].T == 1.0);  // sorted
  CHECK(!pts[0].certificate_valid);  // T^2 = 1 under the data norms
  CHECK(!pts[0].pass);
  CHECK(pts[1].certificate_valid);
  CHECK(pts[2].certificate_valid);
  CHECK(pts[1].pass);
  CHECK(pts[2].pass);
  CHECK(pts[1].sigma_cert / pts[2].sigma_cert == 16.0);
  for (const RadiusPoint& p : pts) {
    CHECK(p.sigma_measured > 0.8);
    CHECK(p.sigma_measured < 1.2);
  }
}

}  // TEST_SUITE
