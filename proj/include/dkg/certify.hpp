#pragma once

// Executable radius certificate. The window bookkeeping that proves
// persistence of analyticity is mechanized as arithmetic on calibrated
// constants: given the data functionals at sigma0 and a target time T,
// the certificate fixes a growth cap A, a uniform window delta, a window
// count n and a certified strip half-width
//
//   sigma_cert = min(sigma0, 1 / (8 C c2 A^{3/2} T^4)),   c2 = c0^{-1/2},
//
// which decays like 1/T^4 once the formula branch is active. A verification
// run then evolves the data and checks every bookkeeping hypothesis the
// arithmetic relies on, at probe times along the trajectory, reporting the
// worst margin per hypothesis.

#include <string>
#include <vector>

#include "dkg/picard.hpp"
#include "dkg/rhs.hpp"
#include "dkg/state.hpp"
#include "dkg/stepper.hpp"

namespace dkg {

struct CertificateInputs {
  double sigma0 = 0.5;
  double m0 = 0.0;  // spinor exponential-charge functional of the data at sigma0
  double n0 = 0.0;  // wave functional; for the massless scalar, phi L2 plus the
                    // mean-free analogue
  double T = 0.0;
  Masses masses;
  CalibratedConstants consts;
};

// Measures m0 / n0 from Cauchy data at sigma0.
CertificateInputs inputs_from_data(const CauchyData& data, Masses masses,
                                   double sigma0,
                                   const CalibratedConstants& consts, double T);

// Quadratic cap alpha + beta t^2 on the scalar L2 norm, fitted by least
// squares on the first half of a massless run, then inflated by 10 percent
// and validated on the second half. margin is the smallest gap between the
// inflated envelope and the measurement over the validation half.
struct GrowthEnvelope {
  double alpha = 0.0;
  double beta = 0.0;
  double margin = 0.0;
  bool valid = true;
};

GrowthEnvelope fit_growth_envelope(const CauchyData& data, Masses masses,
                                   double T, double dt, RhsWork& work,
                                   int samples = 64);

struct Certificate {
  CertificateInputs in;
  double c2 = 0.0;     // c0^{-1/2}
  double A = 1.0;      // growth cap parameter, at least 1
  double delta = 0.0;  // uniform window T / n, at most c0 / (A T^2)
  double n = 0.0;      // window count; integral value, kept in a double
                       // because realistic counts overflow 32-bit ranges
  double sigma_cert = 0.0;
  double c_asym = 0.0;  // sigma_cert = c_asym / T^4 on the unclamped branch
  bool tlarge_ok = true;
  bool a_condition_ok = true;
  bool clamped_to_sigma0 = false;
  bool massless = false;
  GrowthEnvelope growth;  // identity (0, 0) in the massive case

  bool valid() const { return tlarge_ok && a_condition_ok; }
};

// Massive-case arithmetic: A is the smallest value admitted by the cap
// condition (floored at 1), the window count is rounded up so the windows
// tile [0, T] exactly, and sigma_cert follows the formula above.
Certificate certified_radius(const CertificateInputs& in);

// Massless variant: the measured quadratic growth of the scalar is folded
// into the cap, A = max(1, (2 C c2 m0)^2, alpha / T^2 + beta), and the
// envelope is recorded in the certificate.
Certificate m0_certified_radius(const CertificateInputs& in,
                                const GrowthEnvelope& env);

struct HypothesisCheck {
  std::string name;
  double margin = 0.0;  // smallest (allowed - measured) over the probe mesh
  double worst_t = 0.0;
  bool pass = true;
};

struct VerifyRow {
  double t = 0.0;
  double m = 0.0;          // spinor functional at the certified sigma
  double n = 0.0;          // wave functional (massless: phi L2 + mean-free)
  double windows = 0.0;    // elapsed window count, ceil(t / delta)
  double sigma_hat = 0.0;  // measured radius, min over the three fields
};

struct VerificationReport {
  double sigma = 0.0;  // radius the hypotheses were checked at
  double T = 0.0;
  bool aborted = false;
  std::string abort_reason;
  std::vector<VerifyRow> rows;
  std::vector<HypothesisCheck> checks;
  bool pass = false;
};

struct VerifyOptions {
  double dt = 1e-3;
  int probes = 16;              // probe mesh resolution over [0, T]
  double sigma_override = 0.0;  // > 0 replaces the certified radius, as an
                                // adversarial claim to stress the hypotheses
};

// Evolves the data over [0, T] and checks, on the probe mesh: the factor-2
// cap on the spinor functional, the 2 A T^2 cap on the wave functional, the
// per-window induction bounds for both, and that the measured radius stays
// above the certified one. Aborted runs return a partial report.
VerificationReport verify_certificate(const CauchyData& data,
                                      const Certificate& cert,
                                      const VerifyOptions& opts, RhsWork& work);

struct RadiusPoint {
  double T = 0.0;
  double sigma_cert = 0.0;
  double sigma_measured = 0.0;
  bool certificate_valid = false;  // false: the arithmetic makes no claim at
                                   // this T (for example T^2 below the data
                                   // norms) and pass is vacuously false
  bool pass = false;
};

// One evolution to the largest requested time; at each listed T the
// certificate arithmetic is re-run for that horizon and the measured radius
// recorded next to certified one.
std::vector<RadiusPoint> radius_curve(const CauchyData& data,
                                      const CertificateInputs& proto,
                                      const std::vector<double>& t_list,
                                      double dt, RhsWork& work);

}  // namespace dkg
