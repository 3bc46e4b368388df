#pragma once

#include <cmath>
#include <optional>
#include <tuple>
#include <vector>

#include "dsd/baselines.hpp"
#include "dsd/mallows.hpp"
#include "dsd/solver.hpp"

namespace dsd {

template <typename Scalar>
struct FitReport {
  Scalar rmse_m{0};
  Scalar rmse_l{0};
  Scalar rmse_u{0};
  std::optional<Scalar> omega;
};

/// Neumaier-compensated running sum.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar v) {
    using std::abs;
    const Scalar t = sum_ + v;
    if (abs(sum_) >= abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

namespace detail {
template <typename Scalar>
void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DomainError(std::string(what) + ": observed has " + std::to_string(a) + " units, predicted has " +
                      std::to_string(b));
  }
  if (a == 0) throw DomainError(std::string(what) + ": no units");
}
}  // namespace detail

template <typename Scalar>
Scalar rmse_m(const IntervalVariable<Scalar>& observed, const std::vector<Interval<Scalar>>& predicted) {
  using std::sqrt;
  detail::check_lengths<Scalar>(observed.size(), predicted.size(), "rmse_m");
  CompensatedSum<Scalar> s;
  for (std::size_t j = 0; j < predicted.size(); ++j) s.add(mallows_sq(observed[j], predicted[j]));
  return sqrt(s.value() / Scalar(predicted.size()));
}

/// Same measure for bounds that may be inverted: the prediction's quantile function is still
/// c + r(2t - 1), only with r < 0.
template <typename Scalar>
Scalar rmse_m(const IntervalVariable<Scalar>& observed,
              const std::vector<PredictedBounds<Scalar>>& predicted) {
  using std::sqrt;
  detail::check_lengths<Scalar>(observed.size(), predicted.size(), "rmse_m");
  CompensatedSum<Scalar> s;
  for (std::size_t j = 0; j < predicted.size(); ++j) {
    const Scalar dc = observed[j].center() - (predicted[j].upper + predicted[j].lower) / Scalar(2);
    const Scalar dr = observed[j].halfrange() - (predicted[j].upper - predicted[j].lower) / Scalar(2);
    s.add((Scalar(3) * dc * dc + dr * dr) / Scalar(3));
  }
  return sqrt(s.value() / Scalar(predicted.size()));
}

template <typename Scalar>
std::pair<Scalar, Scalar> rmse_bounds(const IntervalVariable<Scalar>& observed,
                                      const std::vector<PredictedBounds<Scalar>>& predicted) {
  using std::sqrt;
  detail::check_lengths<Scalar>(observed.size(), predicted.size(), "rmse_bounds");
  CompensatedSum<Scalar> sl, su;
  for (std::size_t j = 0; j < predicted.size(); ++j) {
    const Scalar dl = observed[j].lower() - predicted[j].lower;
    const Scalar du = observed[j].upper() - predicted[j].upper;
    sl.add(dl * dl);
    su.add(du * du);
  }
  const Scalar m(predicted.size());
  return {sqrt(sl.value() / m), sqrt(su.value() / m)};
}

template <typename Scalar>
std::vector<PredictedBounds<Scalar>> as_bounds(const std::vector<Interval<Scalar>>& v) {
  std::vector<PredictedBounds<Scalar>> out;
  out.reserve(v.size());
  for (const auto& i : v) out.push_back({i.lower(), i.upper()});
  return out;
}

template <typename Scalar>
std::pair<Scalar, Scalar> rmse_bounds(const IntervalVariable<Scalar>& observed,
                                      const std::vector<Interval<Scalar>>& predicted) {
  return rmse_bounds(observed, as_bounds(predicted));
}

template <typename Scalar>
FitReport<Scalar> fit_report(const IntervalVariable<Scalar>& observed,
                             const std::vector<PredictedBounds<Scalar>>& predicted,
                             std::optional<Scalar> omega_value = std::nullopt) {
  FitReport<Scalar> r;
  r.rmse_m = rmse_m(observed, predicted);
  std::tie(r.rmse_l, r.rmse_u) = rmse_bounds(observed, predicted);
  r.omega = omega_value;
  return r;
}

/// Per-parameter mean of (estimate - truth)^2 over replications, in packed order
/// (alpha_1, beta_1, ..., gamma).
template <typename Scalar>
VectorX<Scalar> mse_params(const std::vector<DsdCoefficients<Scalar>>& estimates,
                           const DsdCoefficients<Scalar>& truth) {
  if (estimates.empty()) throw DomainError("mse_params: no estimates");
  const VectorX<Scalar> t = truth.packed();
  std::vector<CompensatedSum<Scalar>> sums(std::size_t(t.size()));
  for (const auto& e : estimates) {
    if (e.predictors() != truth.predictors()) throw DomainError("mse_params: predictor count mismatch");
    const VectorX<Scalar> d = e.packed() - t;
    for (Eigen::Index i = 0; i < d.size(); ++i) sums[std::size_t(i)].add(d(i) * d(i));
  }
  VectorX<Scalar> out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) out(i) = sums[std::size_t(i)].value() / Scalar(estimates.size());
  return out;
}

}  // namespace dsd
