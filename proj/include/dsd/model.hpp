#pragma once

#include <string>
#include <vector>

#include "dsd/mallows.hpp"
#include "dsd/solver.hpp"

namespace dsd {

template <typename Scalar>
struct FittedDsdModel {
  DsdCoefficients<Scalar> coefficients;
  Scalar omega{0};
  std::vector<Interval<Scalar>> fitted;
  SolveDiagnostics<Scalar> diagnostics;
  std::string response_name;
  std::vector<std::string> predictor_names;
  std::size_t m = 0;
  std::size_t p = 0;
};

/// Per-unit error function e_j(t) = a + (2t - 1) b.
template <typename Scalar>
struct Residual {
  Scalar a{0};  ///< center deviation c_Y - c_Yhat
  Scalar b{0};  ///< half-range deviation r_Y - r_Yhat

  Scalar at(Scalar t) const { return a + (Scalar(2) * t - Scalar(1)) * b; }
};

template <typename Scalar>
struct Decomposition {
  Scalar total{0};
  Scalar residual{0};
  Scalar explained{0};
};

template <typename Scalar>
struct InducedRegressions {
  VectorX<Scalar> center_slopes;  ///< alpha_k - beta_k
  Scalar center_intercept{0};     ///< gamma
  VectorX<Scalar> range_slopes;   ///< alpha_k + beta_k
};

namespace detail {
template <typename Scalar>
void check_row(const DsdCoefficients<Scalar>& b, const std::vector<Interval<Scalar>>& xrow) {
  if (Eigen::Index(xrow.size()) != b.predictors() || b.betas.size() != b.predictors()) {
    throw DomainError("predictor row has " + std::to_string(xrow.size()) + " intervals, model expects " +
                      std::to_string(b.predictors()));
  }
}
}  // namespace detail

template <typename Scalar>
Scalar predict_quantile(const DsdCoefficients<Scalar>& b, const std::vector<Interval<Scalar>>& xrow,
                        Scalar t) {
  detail::check_row(b, xrow);
  detail::check_unit_parameter(t);
  Scalar c = b.gamma, r(0);
  for (std::size_t k = 0; k < xrow.size(); ++k) {
    const auto i = Eigen::Index(k);
    c += (b.alphas(i) - b.betas(i)) * xrow[k].center();
    r += (b.alphas(i) + b.betas(i)) * xrow[k].halfrange();
  }
  return c + r * (Scalar(2) * t - Scalar(1));
}

/// [sum(alpha l - beta u) + gamma, sum(alpha u - beta l) + gamma].
template <typename Scalar>
Interval<Scalar> predict_interval(const DsdCoefficients<Scalar>& b,
                                  const std::vector<Interval<Scalar>>& xrow) {
  detail::check_row(b, xrow);
  Scalar lo = b.gamma, hi = b.gamma;
  for (std::size_t k = 0; k < xrow.size(); ++k) {
    const auto i = Eigen::Index(k);
    lo += b.alphas(i) * xrow[k].lower() - b.betas(i) * xrow[k].upper();
    hi += b.alphas(i) * xrow[k].upper() - b.betas(i) * xrow[k].lower();
  }
  // Rounding can cross the bounds of a near-degenerate prediction.
  if (lo > hi) lo = hi = (lo + hi) / Scalar(2);
  return Interval<Scalar>(lo, hi);
}

template <typename Scalar>
InducedRegressions<Scalar> induced_regressions(const DsdCoefficients<Scalar>& b) {
  return {b.alphas - b.betas, b.gamma, b.alphas + b.betas};
}

/// Explained over total Mallows dispersion about the observed symbolic mean.
template <typename Scalar>
Scalar omega(const IntervalVariable<Scalar>& observed, const IntervalVariable<Scalar>& predicted) {
  if (observed.size() != predicted.size()) throw DomainError("omega: observed and predicted lengths differ");
  const Scalar total = total_dispersion(observed);
  if (!(total > Scalar(0))) {
    throw DegenerateResponseError("response '" + observed.name + "' has zero dispersion about its mean");
  }
  const auto mean = Interval<Scalar>::degenerate(symbolic_mean(observed));
  Scalar explained(0);
  for (const auto& yhat : predicted.values) explained += mallows_sq(yhat, mean);
  return explained / total;
}

template <typename Scalar>
Decomposition<Scalar> decomposition_check(const IntervalVariable<Scalar>& observed,
                                          const IntervalVariable<Scalar>& predicted) {
  if (observed.size() != predicted.size()) {
    throw DomainError("decomposition: observed and predicted lengths differ");
  }
  const auto mean = Interval<Scalar>::degenerate(symbolic_mean(observed));
  Decomposition<Scalar> d;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    d.total += mallows_sq(observed[j], mean);
    d.residual += mallows_sq(observed[j], predicted[j]);
    d.explained += mallows_sq(predicted[j], mean);
  }
  return d;
}

template <typename Scalar>
std::vector<Interval<Scalar>> predict_table(const DsdCoefficients<Scalar>& b,
                                            const SymbolicTable<Scalar>& table) {
  std::vector<Interval<Scalar>> out;
  out.reserve(table.units());
  for (std::size_t j = 0; j < table.units(); ++j) out.push_back(predict_interval(b, table.row(j)));
  return out;
}

template <typename Scalar>
FittedDsdModel<Scalar> fit(const SymbolicTable<Scalar>& table) {
  FittedDsdModel<Scalar> model;
  auto [coeffs, diag] = solve_constrained_ls(table);
  model.coefficients = std::move(coeffs);
  model.diagnostics = std::move(diag);
  model.fitted = predict_table(model.coefficients, table);
  model.omega = omega(table.response(), IntervalVariable<Scalar>{"fitted", model.fitted});
  model.response_name = table.response().name;
  for (const auto& x : table.explicatives()) model.predictor_names.push_back(x.name);
  model.m = table.units();
  model.p = table.predictors();
  return model;
}

template <typename Scalar>
std::vector<Residual<Scalar>> residuals(const IntervalVariable<Scalar>& observed,
                                        const std::vector<Interval<Scalar>>& predicted) {
  if (observed.size() != predicted.size()) throw DomainError("residuals: lengths differ");
  std::vector<Residual<Scalar>> out;
  out.reserve(predicted.size());
  for (std::size_t j = 0; j < predicted.size(); ++j) {
    out.push_back({observed[j].center() - predicted[j].center(),
                   observed[j].halfrange() - predicted[j].halfrange()});
  }
  return out;
}

/// Prediction for each unit from a model fitted without it.
template <typename Scalar>
std::vector<Interval<Scalar>> loo_predict(const SymbolicTable<Scalar>& table) {
  if (table.units() < 3) throw DomainError("leave-one-out needs at least 3 units");
  std::vector<Interval<Scalar>> out;
  out.reserve(table.units());
  for (std::size_t j = 0; j < table.units(); ++j) {
    const std::string& unit = table.unit_labels()[j];
    try {
      const auto coeffs = solve_constrained_ls(table.without_unit(j)).first;
      out.push_back(predict_interval(coeffs, table.row(j)));
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("leaving out unit " + unit + ": " + e.what(), e.last_iterate(), e.iterations());
    } catch (const DomainError& e) {
      throw DomainError("leaving out unit " + unit + ": " + e.what());
    }
  }
  return out;
}

}  // namespace dsd
