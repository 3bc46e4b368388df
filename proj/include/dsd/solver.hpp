#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "dsd/interval.hpp"
#include "dsd/nnls.hpp"

namespace dsd {

/// DSD parameters: alpha_k, beta_k >= 0 per predictor and a free intercept.
template <typename Scalar>
struct DsdCoefficients {
  VectorX<Scalar> alphas;
  VectorX<Scalar> betas;
  Scalar gamma{0};

  Eigen::Index predictors() const { return alphas.size(); }

  /// Interleaved layout (alpha_1, beta_1, ..., alpha_p, beta_p, gamma).
  VectorX<Scalar> packed() const {
    const Eigen::Index p = predictors();
    VectorX<Scalar> v(2 * p + 1);
    for (Eigen::Index k = 0; k < p; ++k) {
      v(2 * k) = alphas(k);
      v(2 * k + 1) = betas(k);
    }
    v(2 * p) = gamma;
    return v;
  }

  static DsdCoefficients from_packed(const VectorX<Scalar>& v) {
    if (v.size() < 3 || v.size() % 2 == 0) {
      throw DomainError("packed coefficient vector must have odd length 2p+1 with p >= 1");
    }
    const Eigen::Index p = (v.size() - 1) / 2;
    DsdCoefficients c;
    c.alphas.resize(p);
    c.betas.resize(p);
    for (Eigen::Index k = 0; k < p; ++k) {
      c.alphas(k) = v(2 * k);
      c.betas(k) = v(2 * k + 1);
    }
    c.gamma = v(2 * p);
    return c;
  }

  static DsdCoefficients single(Scalar alpha, Scalar beta, Scalar gamma) {
    DsdCoefficients c;
    c.alphas = VectorX<Scalar>::Constant(1, alpha);
    c.betas = VectorX<Scalar>::Constant(1, beta);
    c.gamma = gamma;
    return c;
  }
};

using DsdCoefficientsd = DsdCoefficients<double>;

/// Least-squares form of the Mallows objective: first m rows fit centers, last m rows fit
/// half-ranges scaled by 1/sqrt(3).
template <typename Scalar>
struct StackedSystem {
  MatrixX<Scalar> design;
  VectorX<Scalar> target;
  Eigen::Index m = 0;
  Eigen::Index p = 0;
};

template <typename Scalar>
struct SolveDiagnostics {
  Scalar objective{0};
  /// Packed indices of alpha/beta held at zero by the constraints.
  std::vector<int> active_set;
  /// Design has full column rank, so the optimum is unique.
  bool unique = true;
  int iterations = 0;
};

enum class Collinearity { none, all_symmetric, all_degenerate };

template <typename Scalar>
StackedSystem<Scalar> build_stacked_system(const SymbolicTable<Scalar>& table) {
  using std::sqrt;
  const auto m = static_cast<Eigen::Index>(table.units());
  const auto p = static_cast<Eigen::Index>(table.predictors());
  const Scalar inv_sqrt3 = Scalar(1) / sqrt(Scalar(3));

  StackedSystem<Scalar> sys;
  sys.m = m;
  sys.p = p;
  sys.design = MatrixX<Scalar>::Zero(2 * m, 2 * p + 1);
  sys.target.resize(2 * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto& y = table.response()[std::size_t(j)];
    for (Eigen::Index k = 0; k < p; ++k) {
      const auto& x = table.explicative(std::size_t(k))[std::size_t(j)];
      sys.design(j, 2 * k) = x.center();
      sys.design(j, 2 * k + 1) = -x.center();
      sys.design(m + j, 2 * k) = x.halfrange() * inv_sqrt3;
      sys.design(m + j, 2 * k + 1) = x.halfrange() * inv_sqrt3;
    }
    sys.design(j, 2 * p) = Scalar(1);
    sys.target(j) = y.center();
    sys.target(m + j) = y.halfrange() * inv_sqrt3;
  }
  return sys;
}

/// Sum of squared Mallows distances between observed and predicted responses, evaluated in
/// center/half-range form with the 1/3 weight applied last.
template <typename Scalar>
Scalar objective_value(const StackedSystem<Scalar>& sys, const DsdCoefficients<Scalar>& b) {
  if (b.alphas.size() != sys.p || b.betas.size() != sys.p) {
    throw DomainError("coefficients have " + std::to_string(b.alphas.size()) +
                      " predictors, system has " + std::to_string(sys.p));
  }
  using std::sqrt;
  const Scalar sqrt3 = sqrt(Scalar(3));
  Scalar centers(0), ranges(0);
  for (Eigen::Index j = 0; j < sys.m; ++j) {
    Scalar c = b.gamma, r(0);
    for (Eigen::Index k = 0; k < sys.p; ++k) {
      c += (b.alphas(k) - b.betas(k)) * sys.design(j, 2 * k);
      r += (b.alphas(k) + b.betas(k)) * sys.design(sys.m + j, 2 * k) * sqrt3;
    }
    const Scalar dc = sys.target(j) - c;
    const Scalar dr = sys.target(sys.m + j) * sqrt3 - r;
    centers += dc * dc;
    ranges += dr * dr;
  }
  return centers + ranges / Scalar(3);
}

/// Flags predictors whose intervals are all symmetric about zero or all degenerate, at
/// tolerance 1e-12 times the column's largest absolute bound.
template <typename Scalar>
std::vector<Collinearity> detect_collinearity(const SymbolicTable<Scalar>& table) {
  using std::abs;
  using std::max;
  std::vector<Collinearity> out;
  for (const auto& x : table.explicatives()) {
    Scalar scale(0);
    for (const auto& i : x.values) scale = max(scale, max(abs(i.lower()), abs(i.upper())));
    const Scalar tol = Scalar(1e-12) * scale;
    bool degenerate = true, symmetric = true;
    for (const auto& i : x.values) {
      if (i.halfrange() > tol) degenerate = false;
      if (abs(i.center()) > tol) symmetric = false;
    }
    out.push_back(degenerate ? Collinearity::all_degenerate
                             : symmetric ? Collinearity::all_symmetric : Collinearity::none);
  }
  return out;
}

namespace detail {

template <typename Scalar>
bool full_column_rank(const MatrixX<Scalar>& A) {
  Eigen::ColPivHouseholderQR<MatrixX<Scalar>> qr(A);
  qr.setThreshold(Scalar(1e-12));
  return qr.rank() == A.cols();
}

}  // namespace detail

/// Minimises the stacked objective subject to alpha, beta >= 0 with gamma free.
///
/// When the optimum is not unique because a predictor is all-symmetric (only alpha+beta
/// matters) or all-degenerate (only alpha-beta matters), the minimum-norm representative is
/// returned: alpha = beta for the former, min(alpha, beta) = 0 for the latter.
template <typename Scalar>
std::pair<DsdCoefficients<Scalar>, SolveDiagnostics<Scalar>> solve_constrained_ls(
    const StackedSystem<Scalar>& sys, const std::vector<Collinearity>& collinearity = {}) {
  using std::max;
  if (sys.m < 1) throw DomainError("solver needs at least one unit");
  const Eigen::Index n = 2 * sys.p + 1;
  std::vector<bool> constrained(std::size_t(n), true);
  constrained[std::size_t(n - 1)] = false;

  const NnlsResult<Scalar> r = nnls(sys.design, sys.target, constrained, 10 * int(n));
  auto coeffs = DsdCoefficients<Scalar>::from_packed(r.x);

  for (std::size_t k = 0; k < collinearity.size() && Eigen::Index(k) < sys.p; ++k) {
    const auto i = Eigen::Index(k);
    if (collinearity[k] == Collinearity::all_symmetric) {
      const Scalar s = (coeffs.alphas(i) + coeffs.betas(i)) / Scalar(2);
      coeffs.alphas(i) = s;
      coeffs.betas(i) = s;
    } else if (collinearity[k] == Collinearity::all_degenerate) {
      const Scalar d = coeffs.alphas(i) - coeffs.betas(i);
      coeffs.alphas(i) = max(d, Scalar(0));
      coeffs.betas(i) = max(-d, Scalar(0));
    }
  }

  SolveDiagnostics<Scalar> diag;
  diag.objective = objective_value(sys, coeffs);
  const VectorX<Scalar> packed = coeffs.packed();
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (packed(i) == Scalar(0)) diag.active_set.push_back(int(i));
  diag.unique = detail::full_column_rank(sys.design);
  diag.iterations = r.iterations;
  return {coeffs, diag};
}

template <typename Scalar>
std::pair<DsdCoefficients<Scalar>, SolveDiagnostics<Scalar>> solve_constrained_ls(
    const SymbolicTable<Scalar>& table) {
  return solve_constrained_ls(build_stacked_system(table), detect_collinearity(table));
}

template <typename Scalar>
struct KktReport {
  bool ok = true;
  /// Largest violation divided by the tolerance scale; <= 1 passes.
  Scalar worst{0};
  VectorX<Scalar> gradient;
};

/// First-order optimality certificate. With g = A^T (A x - b): |g_i| <= tol for gamma and
/// for every positive alpha/beta, g_i >= -tol for those at zero, and no negative alpha/beta.
/// tol = rel_tol * max(1, max|A|) * max(1, ||b||).
template <typename Scalar>
KktReport<Scalar> kkt_check(const StackedSystem<Scalar>& sys, const DsdCoefficients<Scalar>& b,
                            Scalar rel_tol = Scalar(1e-8)) {
  using std::abs;
  using std::max;
  const VectorX<Scalar> x = b.packed();
  if (x.size() != sys.design.cols()) throw DomainError("coefficient/system dimension mismatch");
  const Scalar tol = rel_tol * kkt_scale(sys.design, sys.target);
  KktReport<Scalar> rep;
  rep.gradient = sys.design.transpose() * (sys.design * x - sys.target);
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar v(0);
    const bool is_gamma = i == n - 1;
    if (!is_gamma && x(i) < Scalar(0)) {
      v = Scalar(2) - x(i) / tol;
    } else if (is_gamma || x(i) > Scalar(0)) {
      v = abs(rep.gradient(i)) / tol;
    } else {
      v = -rep.gradient(i) / tol;
    }
    rep.worst = max(rep.worst, v);
  }
  rep.ok = rep.worst <= Scalar(1);
  return rep;
}

/// Single-predictor optimum in closed form.
///
/// With Sxy = sum (cY - Ybar)(cX - Xbar), Sxx = sum (cX - Xbar)^2, Rxy = sum rX rY / 3 and
/// Rxx = sum rX^2 / 3 the problem separates in lambda = alpha - beta and s = alpha + beta
/// under s >= |lambda|:
///   interior   Rxy Sxx > |Sxy| Rxx:  alpha = (Sxy Rxx + Rxy Sxx) / (2 Sxx Rxx),
///                                    beta  = (Rxy Sxx - Sxy Rxx) / (2 Sxx Rxx)
///   beta = 0:  alpha = max(0, (Sxy + Rxy) / (Sxx + Rxx))
///   alpha = 0: beta  = max(0, (Rxy - Sxy) / (Sxx + Rxx))
/// with the better of the two edge candidates taken when the interior test fails (both zero
/// when neither edge improves on the intercept-only fit). gamma = Ybar - (alpha - beta) Xbar.
///
/// Requires non-constant centers and at least one non-degenerate predictor interval.
template <typename Scalar>
DsdCoefficients<Scalar> solve_single_closed_form(const IntervalVariable<Scalar>& x,
                                                 const IntervalVariable<Scalar>& y) {
  using std::abs;
  using std::max;
  if (x.size() != y.size()) throw DomainError("predictor and response lengths differ");
  if (x.size() == 0) throw DomainError("closed form needs at least one unit");
  const Scalar xbar = symbolic_mean(x);
  const Scalar ybar = symbolic_mean(y);

  Scalar sxy(0), sxx(0), rxy(0), rxx(0), scale(0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Scalar dx = x[j].center() - xbar;
    sxy += (y[j].center() - ybar) * dx;
    sxx += dx * dx;
    rxy += x[j].halfrange() * y[j].halfrange();
    rxx += x[j].halfrange() * x[j].halfrange();
    scale = max(scale, max(abs(x[j].lower()), abs(x[j].upper())));
  }
  rxy /= Scalar(3);
  rxx /= Scalar(3);

  const Scalar floor = Scalar(1e-24) * scale * scale * Scalar(x.size());
  if (!(sxx > floor) || !(rxx > floor)) {
    throw DegenerateDesignError(
        "closed form requires non-constant predictor centers and a non-degenerate predictor; "
        "use the general solver");
  }

  Scalar alpha(0), beta(0);
  if (rxy * sxx > abs(sxy) * rxx) {
    const Scalar d = Scalar(2) * sxx * rxx;
    alpha = (sxy * rxx + rxy * sxx) / d;
    beta = (rxy * sxx - sxy * rxx) / d;
  } else {
    // Reduced objective relative to the intercept-only fit.
    auto f = [&](Scalar lambda, Scalar s) {
      return lambda * lambda * sxx - Scalar(2) * lambda * sxy + s * s * rxx - Scalar(2) * s * rxy;
    };
    const Scalar a_edge = max(Scalar(0), (sxy + rxy) / (sxx + rxx));
    const Scalar b_edge = max(Scalar(0), (rxy - sxy) / (sxx + rxx));
    const Scalar fa = f(a_edge, a_edge);
    const Scalar fb = f(-b_edge, b_edge);
    if (fa < Scalar(0) && fa <= fb) {
      alpha = a_edge;
    } else if (fb < Scalar(0)) {
      beta = b_edge;
    }
  }
  return DsdCoefficients<Scalar>::single(alpha, beta, ybar - (alpha - beta) * xbar);
}

}  // namespace dsd
