#pragma once

// A field is its vector of Fourier coefficients on a grid, position i
// carrying frequency pi (i - N/2) / L. Real-space samples are derived views.

#include <vector>

#include "dkg/grid.hpp"
#include "dkg/types.hpp"

namespace dkg {

struct Field {
  GridPtr grid;
  std::vector<cplx> c;

  int size() const { return static_cast<int>(c.size()); }
};

Field make_zero_field(const GridPtr& grid);
Field field_from_samples(const GridPtr& grid, std::span<const cplx> samples);
std::vector<cplx> to_samples(const Field& f);

void check_same_grid(const Field& a, const Field& b);

// Coefficients of the complex conjugate function: c'_k = conj(c_{-k}). The
// unmatched mode k = -N/2 is its own mirror.
Field conj_field(const Field& f);

Field add(const Field& a, const Field& b);
Field sub(const Field& a, const Field& b);
Field scaled(const Field& a, cplx s);
void axpy(Field& y, cplx a, const Field& x);  // y += a x

double max_abs_coeff(const Field& f);
double max_abs_samples(const Field& f);
bool all_finite(const Field& f);

// max_k |c_k - conj(c_{-k})|, the defect of real-valuedness
double reality_defect(const Field& f);

}  // namespace dkg
