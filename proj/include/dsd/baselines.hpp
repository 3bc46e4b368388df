#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "dsd/interval.hpp"
#include "dsd/nnls.hpp"

namespace dsd {

enum class BaselineMethod { CM, MinMax, CRM, CCRM };

inline std::string to_string(BaselineMethod m) {
  switch (m) {
    case BaselineMethod::CM: return "cm";
    case BaselineMethod::MinMax: return "minmax";
    case BaselineMethod::CRM: return "crm";
    case BaselineMethod::CCRM: return "ccrm";
  }
  return "?";
}

inline std::optional<BaselineMethod> parse_baseline_method(const std::string& tag) {
  if (tag == "cm") return BaselineMethod::CM;
  if (tag == "minmax") return BaselineMethod::MinMax;
  if (tag == "crm") return BaselineMethod::CRM;
  if (tag == "ccrm") return BaselineMethod::CCRM;
  return std::nullopt;
}

/// Affine fits are stored intercept first: (b0, b1, ..., bp). Unused fits are empty.
template <typename Scalar>
struct BaselineModel {
  BaselineMethod method = BaselineMethod::CM;
  VectorX<Scalar> center_fit;
  VectorX<Scalar> range_fit;
  VectorX<Scalar> lower_fit;
  VectorX<Scalar> upper_fit;
};

/// Predicted bounds that may be inverted (lower > upper).
template <typename Scalar>
struct PredictedBounds {
  Scalar lower{0};
  Scalar upper{0};
};

namespace detail {

template <typename Scalar, typename Get>
MatrixX<Scalar> affine_design(const SymbolicTable<Scalar>& t, Get get) {
  MatrixX<Scalar> A(Eigen::Index(t.units()), Eigen::Index(t.predictors()) + 1);
  for (std::size_t j = 0; j < t.units(); ++j) {
    A(Eigen::Index(j), 0) = Scalar(1);
    for (std::size_t k = 0; k < t.predictors(); ++k) {
      A(Eigen::Index(j), Eigen::Index(k) + 1) = get(t.explicative(k)[j]);
    }
  }
  return A;
}

template <typename Scalar, typename Get>
VectorX<Scalar> response_vector(const SymbolicTable<Scalar>& t, Get get) {
  VectorX<Scalar> y(Eigen::Index(t.units()));
  for (std::size_t j = 0; j < t.units(); ++j) y(Eigen::Index(j)) = get(t.response()[j]);
  return y;
}

template <typename Scalar>
VectorX<Scalar> ols(const MatrixX<Scalar>& A, const VectorX<Scalar>& y, const char* what) {
  Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(A);
  qr.setThreshold(Scalar(1e-12));
  if (qr.rank() < A.cols()) {
    throw SingularFitError(std::string(what) + " regression design is rank deficient (rank " +
                           std::to_string(qr.rank()) + " of " + std::to_string(A.cols()) + ")");
  }
  return qr.solve(y);
}

template <typename Scalar, typename Get>
Scalar apply_affine(const VectorX<Scalar>& b, const std::vector<Interval<Scalar>>& xrow, Get get) {
  Scalar v = b(0);
  for (std::size_t k = 0; k < xrow.size(); ++k) v += b(Eigen::Index(k) + 1) * get(xrow[k]);
  return v;
}

}  // namespace detail

template <typename Scalar>
BaselineModel<Scalar> fit_baseline(BaselineMethod method, const SymbolicTable<Scalar>& table) {
  using I = Interval<Scalar>;
  auto c = [](const I& i) { return i.center(); };
  auto r = [](const I& i) { return i.halfrange(); };
  auto l = [](const I& i) { return i.lower(); };
  auto u = [](const I& i) { return i.upper(); };

  BaselineModel<Scalar> model;
  model.method = method;
  switch (method) {
    case BaselineMethod::CM:
      model.center_fit = detail::ols(detail::affine_design(table, c), detail::response_vector(table, c), "center");
      break;
    case BaselineMethod::MinMax:
      model.lower_fit = detail::ols(detail::affine_design(table, l), detail::response_vector(table, l), "lower bound");
      model.upper_fit = detail::ols(detail::affine_design(table, u), detail::response_vector(table, u), "upper bound");
      break;
    case BaselineMethod::CRM:
      model.center_fit = detail::ols(detail::affine_design(table, c), detail::response_vector(table, c), "center");
      model.range_fit = detail::ols(detail::affine_design(table, r), detail::response_vector(table, r), "half-range");
      break;
    case BaselineMethod::CCRM: {
      model.center_fit = detail::ols(detail::affine_design(table, c), detail::response_vector(table, c), "center");
      const MatrixX<Scalar> A = detail::affine_design(table, r);
      const std::vector<bool> all(std::size_t(A.cols()), true);
      model.range_fit = nnls(A, detail::response_vector(table, r), all).x;
      break;
    }
  }
  return model;
}

/// CM applies the center fit to each bound and orders the pair; MinMax applies each bound's
/// own fit (bounds may cross); CRM and CCRM rebuild [c - r, c + r] (CRM's r may be negative).
template <typename Scalar>
PredictedBounds<Scalar> predict_baseline(const BaselineModel<Scalar>& model,
                                         const std::vector<Interval<Scalar>>& xrow) {
  using I = Interval<Scalar>;
  const VectorX<Scalar>& any = model.method == BaselineMethod::MinMax ? model.lower_fit : model.center_fit;
  if (Eigen::Index(xrow.size()) + 1 != any.size()) {
    throw DomainError("predictor row has " + std::to_string(xrow.size()) + " intervals, model expects " +
                      std::to_string(any.size() - 1));
  }
  auto c = [](const I& i) { return i.center(); };
  auto r = [](const I& i) { return i.halfrange(); };
  auto l = [](const I& i) { return i.lower(); };
  auto u = [](const I& i) { return i.upper(); };

  switch (model.method) {
    case BaselineMethod::CM: {
      const Scalar a = detail::apply_affine(model.center_fit, xrow, l);
      const Scalar b = detail::apply_affine(model.center_fit, xrow, u);
      return {std::min(a, b), std::max(a, b)};
    }
    case BaselineMethod::MinMax:
      return {detail::apply_affine(model.lower_fit, xrow, l), detail::apply_affine(model.upper_fit, xrow, u)};
    case BaselineMethod::CRM:
    case BaselineMethod::CCRM: {
      const Scalar cc = detail::apply_affine(model.center_fit, xrow, c);
      const Scalar rr = detail::apply_affine(model.range_fit, xrow, r);
      return {cc - rr, cc + rr};
    }
  }
  return {};
}

template <typename Scalar>
std::vector<PredictedBounds<Scalar>> predict_baseline_table(const BaselineModel<Scalar>& model,
                                                            const SymbolicTable<Scalar>& table) {
  std::vector<PredictedBounds<Scalar>> out;
  out.reserve(table.units());
  for (std::size_t j = 0; j < table.units(); ++j) out.push_back(predict_baseline(model, table.row(j)));
  return out;
}

}  // namespace dsd
