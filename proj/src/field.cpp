#include "dkg/field.hpp"

#include <algorithm>
#include <cmath>

namespace dkg {

Field make_zero_field(const GridPtr& grid) {
  return Field{grid, std::vector<cplx>(grid->size(), cplx{0.0, 0.0})};
}

Field field_from_samples(const GridPtr& grid, std::span<const cplx> samples) {
  Field f = make_zero_field(grid);
  grid->transform(samples, f.c);
  return f;
}

std::vector<cplx> to_samples(const Field& f) {
  std::vector<cplx> s(f.size());
  f.grid->inverse_transform(f.c, s);
  return s;
}

void check_same_grid(const Field& a, const Field& b) {
  if (a.grid.get() != b.grid.get()) throw ValidationError("fields live on different grids");
  if (!a.grid || a.size() != a.grid->size() || b.size() != b.grid->size())
    throw ValidationError("field coefficient count does not match its grid");
}

Field conj_field(const Field& f) {
  const int n = f.size();
  Field g = make_zero_field(f.grid);
  g.c[0] = std::conj(f.c[0]);
  for (int i = 1; i < n; ++i) g.c[i] = std::conj(f.c[n - i]);
  return g;
}

Field add(const Field& a, const Field& b) {
  check_same_grid(a, b);
  Field r = a;
  for (int i = 0; i < r.size(); ++i) r.c[i] += b.c[i];
  return r;
}

Field sub(const Field& a, const Field& b) {
  check_same_grid(a, b);
  Field r = a;
  for (int i = 0; i < r.size(); ++i) r.c[i] -= b.c[i];
  return r;
}

Field scaled(const Field& a, cplx s) {
  Field r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

void axpy(Field& y, cplx a, const Field& x) {
  check_same_grid(y, x);
  for (int i = 0; i < y.size(); ++i) y.c[i] += a * x.c[i];
}

double max_abs_coeff(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.c) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_samples(const Field& f) {
  double m = 0.0;
  for (const auto& v : to_samples(f)) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const Field& f) {
  for (const auto& v : f.c)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double reality_defect(const Field& f) {
  const int n = f.size();
  double m = std::abs(f.c[0] - std::conj(f.c[0]));
  for (int i = 1; i < n; ++i) m = std::max(m, std::abs(f.c[i] - std::conj(f.c[n - i])));
  return m;
}

}  // namespace dkg
