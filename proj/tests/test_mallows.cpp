#include <doctest.h>

#include <cmath>
#include <random>

#include "dsd/mallows.hpp"
#include "helpers.hpp"

using dsd::Intervald;

namespace {
// Independent check: squared quantile difference integrated exactly as a quadratic in t.
double exact_integral(const Intervald& a, const Intervald& b) {
  const double d0 = a.lower() - b.lower();  // difference at t = 0
  const double d1 = a.upper() - b.upper();  // at t = 1
  return (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
}
}  // namespace

TEST_CASE("closed-form Mallows distance") {
  const Intervald i(25, 53);
  CHECK(dsd::mallows_sq(i, i) == 0);
  CHECK(dsd::mallows_sq(Intervald(0, 2), Intervald(1, 3)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dsd::mallows_sq(i, Intervald(39, 39)) == doctest::Approx(196.0 / 3.0).epsilon(1e-15));
  CHECK(exact_integral(i, Intervald(39, 39)) == doctest::Approx(196.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("Simpson quadrature") {
  CHECK(std::abs(dsd::mallows_sq_numeric(Intervald(0, 2), Intervald(1, 3), 16) - 1.0) <= 1e-12);
  CHECK(dsd::mallows_sq_numeric(Intervald(4, 9), Intervald(4, 9), 7) == 0);
  CHECK(std::abs(dsd::mallows_sq_numeric(Intervald(-3, -1), Intervald(1, 3), 16) - 16.0) <= 1e-12);
  CHECK_THROWS_AS(dsd::mallows_sq_numeric(Intervald(0, 1), Intervald(0, 1), 1), dsd::DomainError);
  // Odd panel counts are rounded up and remain exact.
  CHECK(std::abs(dsd::mallows_sq_numeric(Intervald(0, 2), Intervald(1, 3), 3) - 1.0) <= 1e-12);
}

TEST_CASE("closed form matches quadrature and exact integral on random pairs") {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 1000; ++n) {
    const auto a = testutil::random_interval(rng, -50, 50, 20);
    const auto b = testutil::random_interval(rng, -50, 50, 20);
    const double v = dsd::mallows_sq(a, b);
    CHECK(std::abs(v - dsd::mallows_sq_numeric(a, b, 64)) <= 1e-9 * (1 + std::abs(v)));
    CHECK(std::abs(v - exact_integral(a, b)) <= 1e-9 * (1 + std::abs(v)));
  }
}

TEST_CASE("degenerate intervals reduce to squared Euclidean distance") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int n = 0; n < 200; ++n) {
    const double a = u(rng), b = u(rng);
    CHECK(dsd::mallows_sq(Intervald(a, a), Intervald(b, b)) == doctest::Approx((a - b) * (a - b)).epsilon(1e-14));
  }
}

TEST_CASE("metric axioms") {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 500; ++n) {
    const auto a = testutil::random_interval(rng), b = testutil::random_interval(rng),
               c = testutil::random_interval(rng);
    CHECK(dsd::mallows_sq(a, b) >= 0);
    CHECK(dsd::mallows_sq(a, b) == dsd::mallows_sq(b, a));
    CHECK(dsd::mallows_sq(a, a) == 0);
    if (!(a == b)) CHECK(dsd::mallows_sq(a, b) > 0);
    const double ab = std::sqrt(dsd::mallows_sq(a, b)), bc = std::sqrt(dsd::mallows_sq(b, c)),
                 ac = std::sqrt(dsd::mallows_sq(a, c));
    CHECK(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("total dispersion") {
  CHECK(dsd::total_dispersion(testutil::var("v", {{2, 2}, {2, 2}})) == 0);
  CHECK(dsd::total_dispersion(testutil::var("v", {{0, 2}, {2, 4}})) == doctest::Approx(8.0 / 3.0).epsilon(1e-15));

  std::mt19937_64 rng(10);
  const auto v = testutil::random_variable(rng, "v", 40);
  const auto mean = Intervald::degenerate(dsd::symbolic_mean(v));
  double sum = 0;
  for (const auto& i : v.values) sum += dsd::mallows_sq(i, mean);
  CHECK(dsd::total_dispersion(v) == doctest::Approx(sum).epsilon(1e-12));
}
