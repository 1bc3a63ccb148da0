#pragma once

// Contraction-mapping local solver on [0, delta]: Picard iterates of the
// Duhamel formulation, quadratured on a fixed 65-node mesh with exact free
// propagators, plus empirical calibration of the absolute constants (C, c0)
// feeding the time-step formula and the certificate. Massive normalization
// only (kg mass 1); massless data goes through the rescaling first.

#include <string>
#include <utility>
#include <vector>

#include "dkg/rhs.hpp"

namespace dkg {

struct CalibratedConstants {
  double c0 = 0.0;  // local-step constant; depends on the Dirac mass
  double C = 0.0;   // bilinear-estimate constant, > 1
  double c2 = 0.0;  // c0^{-1/2}
};

// delta = c0 / (1 + a0^2 + b0)
double local_timestep(double a0, double b0, const CalibratedConstants& k);

constexpr int kPicardIntervals = 64;
constexpr int kPicardNodes = kPicardIntervals + 1;

struct PicardPath {
  std::vector<State> nodes;  // kPicardNodes states on the uniform mesh
  double delta = 0.0;
};

struct PicardDiagnostics {
  double delta = 0.0, sigma = 0.0;
  double a0 = 0.0, b0 = 0.0;
  std::vector<double> A, B;    // per-iterate size bounds; index 0 = free iterate
  std::vector<double> dA, dB;  // difference norms per application
  std::vector<double> ratios;  // successive (dA + dB) quotients
  double residual = 0.0;       // difference after one application at the fixed point
  bool converged = false;
  int iterations = 0;
};

// n = 0 iterate: the free flow of the initial state sampled on the mesh
PicardPath free_iterate(const State& initial, double delta);

// one application of the Duhamel map; fourth-order cumulative quadrature
PicardPath iterate_once(const PicardPath& path, const State& initial,
                        RhsWork& work);

std::pair<PicardPath, PicardDiagnostics> run_contraction(
    const CauchyData& data, Masses masses, double sigma,
    const CalibratedConstants& k, RhsWork& work, int n_max = 40,
    double tol = 1e-10);

struct CalibrationSample {
  std::string label;
  CauchyData data;
};

// poisson and gaussian profiles at amplitudes {0.1, 1, 10}
std::vector<CalibrationSample> calibration_samples(const GridPtr& grid);

struct CalibrationReport {
  CalibratedConstants consts;
  // sharpest measured ratios behind C (mass term, product term, null term)
  double ratio_mass = 0.0, ratio_product = 0.0, ratio_null = 0.0;
  double c0_candidate = 0.0;  // cap value before flooring and halving
  int halvings = 0;
  double sigma = 0.0, dirac_mass = 0.0;
  std::vector<std::string> sample_labels;
};

// C = max(2 * sharpest measured ratio, 17/16); c0 = the largest 24-bit
// dyadic value whose delta keeps, on every sample, both the size condition
// 2 C delta (M + 2 a0 + 2 b0) <= 1 and the difference-map factor
// C delta (M + 4 a0 + 2 b0) + 4 C sqrt(delta) a0 <= 1/2, halved further
// until the contraction is actually observed on every sample.
CalibrationReport calibrate(double dirac_mass,
                            const std::vector<CalibrationSample>& samples,
                            double sigma, RhsWork& work);

}  // namespace dkg
