#include <cmath>
#include <vector>

#include "doctest.h"

#include "dkg/generators.hpp"
#include "dkg/gevrey.hpp"
#include "dkg/picard.hpp"
#include "dkg/state.hpp"
#include "dkg/stepper.hpp"

using namespace dkg;

namespace {

GridPtr picard_grid() { return make_grid(16.0 * M_PI, 1024); }

CauchyData picard_data(const GridPtr& g, double amp) {
  GeneratorSpec p;
  p.kind = GeneratorSpec::Kind::poisson;
  p.amplitude = amp;
  GeneratorSpec w = p;
  w.amplitude = 0.5 * amp;
  return {generate(g, p), generate(g, p), generate(g, w), make_zero_field(g)};
}

CalibratedConstants test_constants() {
  // the values measured on the reference grid; see scenarios/reference.json
  CalibratedConstants k;
  k.c0 = 0.003939509391784668;
  k.C = 2.0000000000000004;
  k.c2 = 15.9323166726642;
  return k;
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
  return m;
}

}  // namespace

TEST_SUITE("picard") {

TEST_CASE("the local time step formula") {
  CalibratedConstants k;
  k.c0 = 0.1;
  CHECK(local_timestep(1.0, 2.0, k) == doctest::Approx(0.025).epsilon(1e-15));
  CHECK(local_timestep(0.0, 0.0, k) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("free iterate starts at the data and preserves mode magnitudes") {
  GridPtr g = picard_grid();
  State u0 = split_data(picard_data(g, 1.0), {});
  PicardPath path = free_iterate(u0, 0.01);
  REQUIRE(static_cast<int>(path.nodes.size()) == kPicardNodes);
  CHECK(state_sup_diff(path.nodes.front(), u0) == 0.0);
  CHECK(path.nodes.back().t == doctest::Approx(0.01));
  for (int i = 0; i < u0.psi_p.size(); ++i)
    CHECK(std::abs(std::abs(path.nodes.back().psi_p.c[i]) -
                   std::abs(u0.psi_p.c[i])) < 1e-14);
}

TEST_CASE("contraction on moderate data") {
  GridPtr g = picard_grid();
  RhsWork work(g);
  auto [path, diag] =
      run_contraction(picard_data(g, 1.0), {}, 0.4, test_constants(), work);
  CHECK(diag.converged);
  CHECK(diag.delta > 0.0);
  CHECK(diag.iterations >= 2);
  // geometric decay from the first application on
  for (std::size_t n = 0; n < diag.ratios.size(); ++n)
    CHECK(diag.ratios[n] <= 0.5);
  CHECK(diag.residual < 1e-8);

  // the limit agrees with the exponential integrator on [0, delta]
  State stepped = evolve(split_data(picard_data(g, 1.0), {}), path.delta,
                         path.delta / kPicardIntervals, work);
  CHECK(state_sup_diff(path.nodes.back(), stepped) < 2e-9);
}

TEST_CASE("an oversized step defeats the contraction") {
  GridPtr g = picard_grid();
  RhsWork work(g);
  CalibratedConstants k;
  k.c0 = 10.0;  // three orders past the calibrated cap
  k.C = 2.0;
  k.c2 = 1.0 / std::sqrt(k.c0);
  bool defeated = false;
  try {
    auto [path, diag] =
        run_contraction(picard_data(g, 1.0), {}, 0.4, k, work);
    defeated = !diag.converged;
    for (std::size_t n = 0; n < diag.ratios.size(); ++n)
      if (!(diag.ratios[n] <= 0.5)) defeated = true;
  } catch (const SolverAbort&) {
    defeated = true;  // iterates left the finite range
  }
  CHECK(defeated);
}

TEST_CASE("massless data is rejected before iterating") {
  GridPtr g = picard_grid();
  RhsWork work(g);
  CHECK_THROWS_AS(run_contraction(picard_data(g, 1.0), {1.0, Masses::Kg::zero},
                                  0.4, test_constants(), work),
                  ValidationError);
}

TEST_CASE("calibration produces dyadic c0 and a near-sharp C") {
  GridPtr g = picard_grid();
  RhsWork work(g);
  CalibrationReport rep = calibrate(1.0, calibration_samples(g), 0.4, work);
  CHECK(rep.consts.c0 > 0.0);
  CHECK(rep.consts.C >= 17.0 / 16.0);
  CHECK(rep.consts.c2 == doctest::Approx(1.0 / std::sqrt(rep.consts.c0)).epsilon(1e-14));
  CHECK(rep.consts.c0 <= rep.c0_candidate);

  // 24-bit dyadic: scaling by the right power of two gives a small integer
  int exp;
  double mant = std::frexp(rep.consts.c0, &exp);
  double scaled = std::ldexp(mant, 24);
  CHECK(scaled == std::floor(scaled));

  CHECK(rep.sample_labels.size() == 6);
  CHECK(rep.ratio_mass > 0.0);

  // every library sample contracts under the calibrated constants
  for (const CalibrationSample& s : calibration_samples(g)) {
    auto [path, diag] = run_contraction(s.data, {}, 0.4, rep.consts, work);
    CHECK(diag.converged);
    for (std::size_t n = 0; n < diag.ratios.size(); ++n)
      CHECK(diag.ratios[n] <= 0.5);
  }
}

}  // TEST_SUITE
