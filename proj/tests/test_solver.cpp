#include <cmath>

#include "doctest.h"
#include "dsd/model.hpp"
#include "dsd/solver.hpp"
#include "helpers.hpp"
#include "properties.hpp"

using dsd::Collinearity;
using dsd::DsdCoefficientsd;
using dsd::SymbolicTabled;
using testutil::labels;
using testutil::var;

namespace {

SymbolicTabled exact_table() {
  return SymbolicTabled(labels(3), var("Y", {{-3, 3}, {-2, 4}, {-3, 9}}), {var("X", {{0, 2}, {1, 3}, {2, 6}})});
}

void check_packed(const DsdCoefficientsd& b, std::initializer_list<double> want, double tol) {
  const Eigen::VectorXd v = b.packed();
  REQUIRE(v.size() == Eigen::Index(want.size()));
  Eigen::Index i = 0;
  for (double w : want) {
    CHECK(std::abs(v(i) - w) <= tol);
    ++i;
  }
}

}  // namespace

TEST_CASE("stacked system rows for a single unit") {
  const SymbolicTabled t(labels(1), var("Y", {{-3, 3}}), {var("X", {{0, 2}})});
  const auto sys = dsd::build_stacked_system(t);
  REQUIRE(sys.design.rows() == 2);
  REQUIRE(sys.design.cols() == 3);
  const double s = 1 / std::sqrt(3.0);
  CHECK(sys.design(0, 0) == doctest::Approx(1));
  CHECK(sys.design(0, 1) == doctest::Approx(-1));
  CHECK(sys.design(0, 2) == doctest::Approx(1));
  CHECK(sys.design(1, 0) == doctest::Approx(s));
  CHECK(sys.design(1, 1) == doctest::Approx(s));
  CHECK(sys.design(1, 2) == doctest::Approx(0));
  CHECK(sys.target(0) == doctest::Approx(0));
  CHECK(sys.target(1) == doctest::Approx(3 * s));
}

TEST_CASE("objective at the intercept-only point is the total dispersion") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto t = props::random_table(rng, 8, 2, 2, 1);
    const auto sys = dsd::build_stacked_system(t);
    auto b = DsdCoefficientsd::from_packed(Eigen::VectorXd::Zero(5));
    b.gamma = dsd::symbolic_mean(t.response());
    CHECK(dsd::objective_value(sys, b) == doctest::Approx(dsd::total_dispersion(t.response())).epsilon(1e-12));
    // Matches the direct sum of squared distances to the predictions.
    double direct = 0;
    for (std::size_t j = 0; j < t.units(); ++j) direct += dsd::mallows_sq(t.response()[j], dsd::predict_interval(b, t.row(j)));
    CHECK(dsd::objective_value(sys, b) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("objective_value rejects mismatched coefficients") {
  const auto sys = dsd::build_stacked_system(exact_table());
  CHECK_THROWS_AS(dsd::objective_value(sys, DsdCoefficientsd::from_packed(Eigen::VectorXd::Zero(5))), dsd::DomainError);
}

TEST_CASE("exact relation is recovered with zero objective") {
  const auto [b, diag] = dsd::solve_constrained_ls(exact_table());
  check_packed(b, {2, 1, -1}, 1e-10);
  CHECK(diag.objective <= 1e-20);
  CHECK(diag.unique);
  CHECK(diag.active_set.empty());
}

TEST_CASE("degenerate points reduce to a line through the origin") {
  const SymbolicTabled t(labels(3), var("Y", {{1, 1}, {2, 2}, {3, 3}}), {var("X", {{1, 1}, {2, 2}, {3, 3}})});
  const auto [b, diag] = dsd::solve_constrained_ls(t);
  CHECK(b.alphas(0) - b.betas(0) == doctest::Approx(1));
  CHECK(b.betas(0) == 0.0);
  CHECK(std::abs(b.gamma) <= 1e-12);
  CHECK_FALSE(diag.unique);
  CHECK(dsd::detect_collinearity(t)[0] == Collinearity::all_degenerate);
}

TEST_CASE("symmetric predictor gets equal alpha and beta") {
  // Center column is zero, so only alpha + beta is identified.
  const SymbolicTabled t(labels(3), var("Y", {{0, 2}, {-1, 5}, {1, 3}}), {var("X", {{-1, 1}, {-2, 2}, {-3, 3}})});
  REQUIRE(dsd::detect_collinearity(t)[0] == Collinearity::all_symmetric);
  const auto [b, diag] = dsd::solve_constrained_ls(t);
  CHECK(b.alphas(0) == doctest::Approx(b.betas(0)));
  CHECK(b.alphas(0) > 0);
  CHECK_FALSE(diag.unique);
  CHECK(dsd::kkt_check(dsd::build_stacked_system(t), b).ok);
}

TEST_CASE("collinearity detection") {
  const SymbolicTabled t(labels(2), var("Y", {{0, 1}, {1, 2}}),
                         {var("A", {{0, 1}, {2, 5}}), var("S", {{-1, 1}, {-2, 2}}), var("D", {{1, 1}, {2, 2}}),
                          var("Z", {{0, 0}, {0, 0}})});
  const auto c = dsd::detect_collinearity(t);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == Collinearity::none);
  CHECK(c[1] == Collinearity::all_symmetric);
  CHECK(c[2] == Collinearity::all_degenerate);
  CHECK(c[3] == Collinearity::all_degenerate);
}

TEST_CASE("closed form: interior, boundary and degenerate cases") {
  SUBCASE("exact relation") {
    const auto t = exact_table();
    check_packed(dsd::solve_single_closed_form(t.explicative(0), t.response()), {2, 1, -1}, 1e-12);
  }
  SUBCASE("inverse relation puts all weight on beta") {
    // Y = 2 * (-X): centers -2c, half-ranges 2r.
    const auto x = var("X", {{0, 2}, {1, 5}, {2, 4}});
    const auto y = var("Y", {{-4, 0}, {-10, -2}, {-8, -4}});
    const auto b = dsd::solve_single_closed_form(x, y);
    check_packed(b, {0, 2, 0}, 1e-14);
    const SymbolicTabled t(labels(3), y, {x});
    check_packed(dsd::solve_constrained_ls(t).first, {0, 2, 0}, 1e-10);
  }
  SUBCASE("no improvement over the intercept") {
    // Constant degenerate response: neither edge lowers the objective.
    const auto x = var("X", {{0, 2}, {2, 4}, {4, 6}});
    const auto y = var("Y", {{0, 0}, {0, 0}, {0, 0}});
    const auto b = dsd::solve_single_closed_form(x, y);
    check_packed(b, {0, 0, 0}, 1e-14);
  }
  SUBCASE("constant centers are rejected") {
    const auto x = var("X", {{0, 2}, {-1, 3}, {-2, 4}});
    CHECK_THROWS_AS(dsd::solve_single_closed_form(x, exact_table().response()), dsd::DegenerateDesignError);
  }
  SUBCASE("degenerate predictor is rejected") {
    const auto x = var("X", {{0, 0}, {1, 1}, {2, 2}});
    CHECK_THROWS_AS(dsd::solve_single_closed_form(x, exact_table().response()), dsd::DegenerateDesignError);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(dsd::solve_single_closed_form(var("X", {{0, 1}}), exact_table().response()), dsd::DomainError);
  }
}

TEST_CASE("intercept equals the mean identity") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto t = props::random_table(rng, 12, 3, 2, 2);
    const auto b = dsd::solve_constrained_ls(t).first;
    double shift = dsd::symbolic_mean(t.response());
    for (std::size_t k = 0; k < t.predictors(); ++k) {
      shift -= (b.alphas(Eigen::Index(k)) - b.betas(Eigen::Index(k))) * dsd::symbolic_mean(t.explicative(k));
    }
    CHECK(b.gamma == doctest::Approx(shift).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("shifting the response moves only the intercept") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto t = props::random_table(rng, 10, 2, 2, 1.5);
    auto y = t.response();
    for (auto& v : y.values) v = dsd::Intervald(v.lower() + 7.5, v.upper() + 7.5);
    const SymbolicTabled shifted(t.unit_labels(), y, t.explicatives());
    const auto a = dsd::solve_constrained_ls(t).first, b = dsd::solve_constrained_ls(shifted).first;
    CHECK((a.alphas - b.alphas).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((a.betas - b.betas).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(b.gamma - a.gamma == doctest::Approx(7.5).epsilon(1e-9));
  }
}

TEST_CASE("kkt_check flags a non-optimal point") {
  const auto sys = dsd::build_stacked_system(exact_table());
  CHECK(dsd::kkt_check(sys, DsdCoefficientsd::single(2, 1, -1)).ok);
  CHECK_FALSE(dsd::kkt_check(sys, DsdCoefficientsd::single(1, 1, -1)).ok);
  CHECK_FALSE(dsd::kkt_check(sys, DsdCoefficientsd::single(-0.5, 1, -1)).ok);
}

TEST_CASE("randomised properties (reduced counts)") {
  const auto g = props::grid_oracle(20, 101);
  CHECK_MESSAGE(g.ok(), g.first_failure);
  const auto c = props::closed_form_equivalence(500, 102);
  CHECK_MESSAGE(c.ok(), c.first_failure);
  const auto k = props::kkt_certificates(300, 103);
  CHECK_MESSAGE(k.ok(), k.first_failure);
  const auto r = props::classical_reduction(100, 104);
  CHECK_MESSAGE(r.ok(), r.first_failure);
}
