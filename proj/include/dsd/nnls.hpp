#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsd/errors.hpp"

namespace dsd {

/// Active-set iteration cap exceeded. Carries the last iterate for inspection.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate, int iterations)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)), iterations_(iterations) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<double> last_iterate_;
  int iterations_;
};

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct NnlsResult {
  VectorX<Scalar> x;
  /// Negative half-gradient A^T (b - A x) at the solution.
  VectorX<Scalar> dual;
  /// Constrained columns held at zero.
  std::vector<int> active_set;
  int iterations = 0;
};

/// Scale against which stationarity residuals are judged: largest design entry times the
/// target norm (each floored at one).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar kkt_scale(const Eigen::MatrixBase<DerivedA>& A,
                                    const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar amax = A.size() ? A.cwiseAbs().maxCoeff() : Scalar(0);
  return std::max(Scalar(1), amax) * std::max(Scalar(1), b.norm());
}

namespace detail {

template <typename Scalar>
VectorX<Scalar> solve_on_columns(const MatrixX<Scalar>& A, const VectorX<Scalar>& b,
                                 const std::vector<int>& cols) {
  VectorX<Scalar> z = VectorX<Scalar>::Zero(A.cols());
  if (cols.empty()) return z;
  MatrixX<Scalar> sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(Eigen::Index(k)) = A.col(cols[k]);
  // Minimum-norm solution, so collinear passive columns never blow up.
  const VectorX<Scalar> zs = sub.completeOrthogonalDecomposition().solve(b);
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(Eigen::Index(k));
  return z;
}

}  // namespace detail

/// Least squares min ||b - A x||^2 subject to x_i >= 0 for every column with
/// `constrained[i] == true`; the remaining columns are free.
///
/// Lawson-Hanson active set: free columns start (and stay) in the passive set, constrained
/// columns enter one at a time by largest positive dual (lowest index on ties) and leave
/// when an interpolation step drives them to zero. Terminates after at most
/// `max_iterations` subproblem solves, default 10 * columns.
template <typename Scalar>
NnlsResult<Scalar> nnls(const MatrixX<Scalar>& A, const VectorX<Scalar>& b,
                        const std::vector<bool>& constrained, int max_iterations = -1) {
  const Eigen::Index n = A.cols();
  if (A.rows() != b.size()) throw DomainError("nnls: design rows and target length differ");
  if (static_cast<Eigen::Index>(constrained.size()) != n) {
    throw DomainError("nnls: constraint mask length differs from column count");
  }
  if (max_iterations < 0) max_iterations = 10 * static_cast<int>(n);

  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar tol = Scalar(10) * eps * Scalar(std::max<Eigen::Index>(A.rows(), n)) * kkt_scale(A, b);

  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  std::vector<int> passive_cols;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!constrained[std::size_t(i)]) {
      passive[std::size_t(i)] = true;
      passive_cols.push_back(int(i));
    }
  }

  VectorX<Scalar> x = detail::solve_on_columns(A, b, passive_cols);
  int iterations = 0;

  auto fail = [&](const char* where) {
    std::vector<double> last(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) last[std::size_t(i)] = double(x(i));
    throw ConvergenceError(std::string("nnls: iteration cap of ") + std::to_string(max_iterations) +
                               " exceeded in " + where,
                           std::move(last), iterations);
  };

  auto rebuild_passive = [&] {
    passive_cols.clear();
    for (Eigen::Index i = 0; i < n; ++i)
      if (passive[std::size_t(i)]) passive_cols.push_back(int(i));
  };

  bool stalled = false;
  while (!stalled) {
    const VectorX<Scalar> w = A.transpose() * (b - A * x);
    int enter = -1;
    Scalar best = tol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (passive[std::size_t(i)]) continue;
      if (w(i) > best) {
        best = w(i);
        enter = int(i);
      }
    }
    if (enter < 0) break;
    if (++iterations > max_iterations) fail("outer loop");

    passive[std::size_t(enter)] = true;
    rebuild_passive();

    for (bool first = true;; first = false) {
      VectorX<Scalar> z = detail::solve_on_columns(A, b, passive_cols);
      bool feasible = true;
      for (int i : passive_cols)
        if (constrained[std::size_t(i)] && z(i) <= Scalar(0)) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      if (first && z(enter) <= Scalar(0)) {
        // The entering column cannot improve the fit at working precision.
        passive[std::size_t(enter)] = false;
        rebuild_passive();
        stalled = true;
        break;
      }
      if (++iterations > max_iterations) fail("inner loop");

      Scalar alpha = Scalar(1);
      int blocking = -1;
      for (int i : passive_cols) {
        if (constrained[std::size_t(i)] && z(i) <= Scalar(0)) {
          const Scalar step = x(i) / (x(i) - z(i));
          if (blocking < 0 || step < alpha) {
            alpha = step;
            blocking = i;
          }
        }
      }
      x += alpha * (z - x);
      x(blocking) = Scalar(0);
      for (int i : passive_cols) {
        if (constrained[std::size_t(i)] && x(i) <= Scalar(0)) {
          x(i) = Scalar(0);
          passive[std::size_t(i)] = false;
        }
      }
      rebuild_passive();
    }
  }

  NnlsResult<Scalar> out;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (constrained[std::size_t(i)] && !passive[std::size_t(i)]) {
      x(i) = Scalar(0);
      out.active_set.push_back(int(i));
    }
  }
  out.dual = A.transpose() * (b - A * x);
  out.x = std::move(x);
  out.iterations = iterations;
  return out;
}

}  // namespace dsd
