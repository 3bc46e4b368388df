#pragma once

#include "dsd/interval.hpp"

namespace dsd {

/// Squared Mallows (L2 Wasserstein) distance between uniform distributions on `a` and `b`:
/// (c_a - c_b)^2 + (r_a - r_b)^2 / 3.
template <typename Scalar>
Scalar mallows_sq(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  const Scalar dc = a.center() - b.center();
  const Scalar dr = a.halfrange() - b.halfrange();
  return (Scalar(3) * dc * dc + dr * dr) / Scalar(3);
}

/// Same distance, from the integral of the squared quantile difference, by composite Simpson
/// on `panels` subintervals (rounded up to an even count). Exact for this quadratic integrand.
template <typename Scalar>
Scalar mallows_sq_numeric(const Interval<Scalar>& a, const Interval<Scalar>& b, int panels) {
  if (panels < 2) throw DomainError("Simpson quadrature needs at least 2 panels");
  const int n = panels % 2 == 0 ? panels : panels + 1;
  const Scalar h = Scalar(1) / Scalar(n);
  auto f = [&](int k) {
    // Endpoint t = 1 is hit exactly; avoids k*h drifting past 1.
    const Scalar t = k == n ? Scalar(1) : Scalar(k) * h;
    const Scalar d = quantile_at(a, t) - quantile_at(b, t);
    return d * d;
  };
  Scalar sum = f(0) + f(n);
  for (int k = 1; k < n; ++k) sum += (k % 2 == 1 ? Scalar(4) : Scalar(2)) * f(k);
  return sum * h / Scalar(3);
}

/// Sum over units of the squared Mallows distance to the degenerate symbolic mean.
template <typename Scalar>
Scalar total_dispersion(const IntervalVariable<Scalar>& v) {
  const Scalar mean = symbolic_mean(v);
  Scalar centers(0), ranges(0);
  for (const auto& i : v.values) {
    const Scalar dc = i.center() - mean;
    centers += dc * dc;
    ranges += i.halfrange() * i.halfrange();
  }
  return centers + ranges / Scalar(3);
}

}  // namespace dsd
