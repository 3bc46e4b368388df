#pragma once

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dsd/errors.hpp"

namespace dsd {

/// Closed real interval [lower, upper] with lower <= upper, both finite.
///
/// Center and half-range are derived on demand; only the bounds are stored.
template <typename Scalar>
class Interval {
 public:
  Interval() = default;

  Interval(Scalar lower, Scalar upper) : lower_(lower), upper_(upper) {
    using std::isfinite;
    if (!isfinite(lower) || !isfinite(upper)) {
      throw DomainError("interval bounds must be finite");
    }
    if (lower > upper) {
      throw DomainError("interval lower bound " + std::to_string(double(lower)) +
                        " exceeds upper bound " + std::to_string(double(upper)));
    }
  }

  static Interval degenerate(Scalar value) { return Interval(value, value); }

  /// [c - r, c + r]; r must be non-negative.
  static Interval from_center_halfrange(Scalar center, Scalar halfrange) {
    if (halfrange < Scalar(0)) throw DomainError("negative half-range");
    return Interval(center - halfrange, center + halfrange);
  }

  Scalar lower() const { return lower_; }
  Scalar upper() const { return upper_; }
  Scalar center() const { return (upper_ + lower_) / Scalar(2); }
  Scalar halfrange() const { return (upper_ - lower_) / Scalar(2); }
  bool is_degenerate() const { return lower_ == upper_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Scalar lower_{0};
  Scalar upper_{0};
};

using Intervald = Interval<double>;

/// Center and half-range view of an interval.
template <typename Scalar>
std::pair<Scalar, Scalar> center_halfrange(const Interval<Scalar>& i) {
  return {i.center(), i.halfrange()};
}

namespace detail {
template <typename Scalar>
void check_unit_parameter(Scalar t) {
  if (!(t >= Scalar(0) && t <= Scalar(1))) {
    throw DomainError("quantile parameter t must lie in [0, 1]");
  }
}
}  // namespace detail

/// Quantile function of the uniform distribution on `i`: c + r(2t - 1).
template <typename Scalar>
Scalar quantile_at(const Interval<Scalar>& i, Scalar t) {
  detail::check_unit_parameter(t);
  return i.center() + i.halfrange() * (Scalar(2) * t - Scalar(1));
}

/// Quantile function of the reflected interval -i, i.e. -quantile_at(i, 1 - t).
template <typename Scalar>
Scalar symmetric_quantile_at(const Interval<Scalar>& i, Scalar t) {
  detail::check_unit_parameter(t);
  return -i.center() + i.halfrange() * (Scalar(2) * t - Scalar(1));
}

/// One symbolic variable observed on m units.
template <typename Scalar>
struct IntervalVariable {
  std::string name;
  std::vector<Interval<Scalar>> values;

  std::size_t size() const { return values.size(); }
  const Interval<Scalar>& operator[](std::size_t j) const { return values[j]; }
};

using IntervalVariabled = IntervalVariable<double>;

/// Response plus p >= 1 explicative variables over m labelled units.
template <typename Scalar>
class SymbolicTable {
 public:
  SymbolicTable(std::vector<std::string> unit_labels, IntervalVariable<Scalar> response,
                std::vector<IntervalVariable<Scalar>> explicatives)
      : labels_(std::move(unit_labels)),
        response_(std::move(response)),
        explicatives_(std::move(explicatives)) {
    if (labels_.empty()) throw DomainError("symbolic table needs at least one unit");
    if (explicatives_.empty()) throw DomainError("symbolic table needs at least one explicative variable");
    const auto m = labels_.size();
    if (response_.size() != m) {
      throw DomainError("response '" + response_.name + "' has " + std::to_string(response_.size()) +
                        " values, expected " + std::to_string(m));
    }
    for (const auto& x : explicatives_) {
      if (x.size() != m) {
        throw DomainError("variable '" + x.name + "' has " + std::to_string(x.size()) +
                          " values, expected " + std::to_string(m));
      }
    }
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) throw DomainError("duplicate unit label '" + l + "'");
    }
  }

  std::size_t units() const { return labels_.size(); }
  std::size_t predictors() const { return explicatives_.size(); }
  const std::vector<std::string>& unit_labels() const { return labels_; }
  const IntervalVariable<Scalar>& response() const { return response_; }
  const std::vector<IntervalVariable<Scalar>>& explicatives() const { return explicatives_; }
  const IntervalVariable<Scalar>& explicative(std::size_t k) const { return explicatives_[k]; }

  /// Intervals of all predictors on unit j, in predictor order.
  std::vector<Interval<Scalar>> row(std::size_t j) const {
    std::vector<Interval<Scalar>> r;
    r.reserve(explicatives_.size());
    for (const auto& x : explicatives_) r.push_back(x[j]);
    return r;
  }

  /// Copy of the table with unit j removed.
  SymbolicTable without_unit(std::size_t j) const {
    auto drop = [j](auto v) {
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(j));
      return v;
    };
    IntervalVariable<Scalar> y{response_.name, drop(response_.values)};
    std::vector<IntervalVariable<Scalar>> xs;
    for (const auto& x : explicatives_) xs.push_back({x.name, drop(x.values)});
    return SymbolicTable(drop(labels_), std::move(y), std::move(xs));
  }

 private:
  std::vector<std::string> labels_;
  IntervalVariable<Scalar> response_;
  std::vector<IntervalVariable<Scalar>> explicatives_;
};

using SymbolicTabled = SymbolicTable<double>;

/// Mean of the interval centers.
template <typename Scalar>
Scalar symbolic_mean(const IntervalVariable<Scalar>& v) {
  if (v.values.empty()) throw DomainError("symbolic mean of an empty variable");
  Scalar sum(0);
  for (const auto& i : v.values) sum += i.center();
  return sum / Scalar(v.values.size());
}

/// Maps every bound b to ln(b + shift). Both bounds must stay positive after shifting.
template <typename Scalar>
IntervalVariable<Scalar> log_shift_transform(const IntervalVariable<Scalar>& v, Scalar shift,
                                             const std::vector<std::string>* unit_labels = nullptr) {
  using std::log;
  IntervalVariable<Scalar> out{v.name, {}};
  out.values.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const Scalar lo = v[j].lower() + shift;
    if (!(lo > Scalar(0))) {
      const std::string unit = unit_labels ? (*unit_labels)[j] : "#" + std::to_string(j + 1);
      throw DomainError("log shift of '" + v.name + "' is undefined on unit " + unit +
                        ": shifted lower bound is not positive");
    }
    out.values.emplace_back(log(lo), log(v[j].upper() + shift));
  }
  return out;
}

}  // namespace dsd
