#pragma once

// Numerical verification of the inequalities the radius argument rests on:
// the transverse bilinear (null-form) estimate and its exponentially
// weighted corollary, the weighted product estimate, the symbol bound, the
// exact derivative identity for the weighted charge, and the one-window
// almost-conservation bounds with their iteration bounds.
//
// Convention notes: all norms are the frequency-side Riemann sums used
// everywhere in this library, so recorded constants are in that convention.
// Norms of computed products are floored at measurement resolution (1e-13
// of the working scale); norms of closed-form data are taken plainly, so a
// genuinely divergent weight (sigma at the data's strip radius) is flagged
// as infinite and the report marked vacuous.

#include <cstdint>
#include <string>
#include <vector>

#include "dkg/picard.hpp"
#include "dkg/rhs.hpp"

namespace dkg {

inline constexpr const char* kSampleLibraryVersion = "v1";
inline constexpr std::uint64_t kSampleLibrarySeed = 20240817u;

struct RatioReport {
  std::string check;
  std::string sample;
  double lhs = 0.0, rhs = 0.0;  // measured value and bound denominator
  double ratio = 0.0;           // lhs / rhs
  double horizon = 0.0, sigma = 0.0;
  bool pass = false;
  bool vacuous = false;  // bound denominator infinite: nothing to verify
};

// u = W(t) f (right-mover), v = W(t) g (left-mover);
// lhs = space-time L2 of u v (or conj(u) v) up to each horizon, rhs =
// |f| |g| in G^{sigma,0}. One cumulative quadrature pass serves all
// horizons. Time step must resolve the grid (dt <= dx).
struct NullFormOptions {
  double dt = 0.0;  // <= 0: dx / 2
  bool conjugate_first = false;
};
std::vector<RatioReport> check_null_form_gevrey(
    const Field& f, const Field& g, double sigma,
    const std::vector<double>& horizons, double pass_constant,
    const NullFormOptions& opts = {});

// sigma = 0 specialization (identical code path)
RatioReport check_null_form(const Field& f, const Field& g, double horizon,
                            bool conjugate_first, double pass_constant);

// control experiment: both factors transported the same direction, where
// the space-time norm genuinely grows like sqrt(horizon)
std::vector<RatioReport> check_parallel_control(
    const Field& f, const Field& g, const std::vector<double>& horizons,
    double pass_constant, const NullFormOptions& opts = {});

// |f g|_{G^{sigma,0}} <= C |f|_{G^{sigma,1}} |g|_{G^{sigma,0}}
RatioReport check_sobolev_product(const Field& f, const Field& g, double sigma,
                                  double pass_constant);

// |e^{eps sigma xi} - 1| <= sigma |xi| e^{sigma |xi|}
double symbol_bound_margin(double sigma, double xi, int eps);
struct SymbolBoundReport {
  double worst_margin = 0.0;  // min over all checked points of rhs - lhs
  double worst_xi = 0.0, worst_sigma = 0.0;
  int worst_eps = 0;
  long long points = 0;
  bool pass = false;
};
SymbolBoundReport check_symbol_bound(const GridPtr& grid, double sigma_max,
                                     std::uint64_t seed, int random_draws);

// d/dt M_{sigma,eps} = -2 Im < F_-, Psi_+ > - 2 Im < F_+, Psi_- > with
// Psi_pm the e^{eps sigma D} dressing of psi_pm and F_pm the commutator
// source; five-point finite difference against the exact right side.
struct ChargeDerivativeReport {
  double sigma = 0.0;
  int eps = 0;
  double t_center = 0.0, dt = 0.0;
  double fd = 0.0, rhs = 0.0;
  double residual_rel = 0.0;
};
ChargeDerivativeReport check_charge_derivative(const CauchyData& data,
                                               Masses masses, double sigma,
                                               int eps, double t_center,
                                               double dt, RhsWork& work);

// One local window [0, delta(sigma)], delta = c0 / (1 + M_sigma + N_sigma)
// (massless: 1 + M_sigma + |phi|_{L2} + N'_sigma). Tracks the sups of the
// weighted charge and wave norms and compares their growth against the
// allowed increments; also verifies the two iteration bounds (massive case).
struct AlmostConservationReport {
  double sigma = 0.0, delta = 0.0, dt = 0.0;
  bool massless = false;
  double m0 = 0.0, n0 = 0.0;      // initial M_sigma and wave size
  double sup_m = 0.0, sup_n = 0.0;
  RatioReport mest, nest;
  RatioReport ib1_plus, ib1_minus;  // data + integrated coupling vs sqrt(M)
  RatioReport ib2_plus, ib2_minus;  // sup wave norm vs sqrt(M) + N
  double inc_eps_minus = 0.0, inc_eps_plus = 0.0;  // per-dressing increments
};
AlmostConservationReport check_almost_conservation(
    const CauchyData& data, Masses masses, double sigma,
    const CalibratedConstants& consts, RhsWork& work, int steps = 256);

// fixed, versioned pair library for the bilinear checks
struct SamplePair {
  std::string id;
  Field f, g;
};
std::vector<SamplePair> standard_sample_pairs(const GridPtr& grid);

}  // namespace dkg
