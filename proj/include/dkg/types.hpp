#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dkg {

using cplx = std::complex<double>;

// Invalid arguments, inconsistent grids, rejected data.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Runtime failures of an evolution: blow-up, NaN, charge drift.
struct SolverAbort : std::runtime_error {
  explicit SolverAbort(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dkg
