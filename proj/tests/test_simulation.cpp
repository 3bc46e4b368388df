#include <sstream>

#include "doctest.h"
#include "dsd/philox.hpp"
#include "dsd/simulation.hpp"

using namespace dsd;

namespace {

StudyConfig small_study1() {
  StudyConfig cfg;
  cfg.study = 1;
  cfg.truth = DsdCoefficientsd::single(2, 1, -1);
  cfg.variability = {Variability::low};
  cfg.m_values = {10};
  cfg.a_scales = {0, 5};
  cfg.b_scales = {0, 2};
  cfg.replications = 8;
  cfg.seed = 99;
  cfg.microdata_count = 200;
  cfg.threads = 1;
  return cfg;
}

std::size_t count_fields(const std::string& line) {
  std::size_t n = 1;
  for (char c : line)
    if (c == ',') ++n;
  return n;
}

}  // namespace

TEST_CASE("philox known answers") {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Stream a(5, 1, 2), b(5, 1, 2), c(5, 1, 3), d(6, 1, 2);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u32();
    CHECK(x == b.next_u32());
    (void)c.next_u32();
    (void)d.next_u32();
  }
  Stream e(5, 1, 2), f(5, 1, 3), g(6, 1, 2);
  CHECK(e.next_u32() != f.next_u32());
  CHECK(e.next_u32() != g.next_u32());
  Stream h(1, 0, 0);
  for (int i = 0; i < 10000; ++i) {
    const double u = h.next_double();
    CHECK(u >= 0);
    CHECK(u < 1);
    CHECK(h.below(5) < 5);
  }
}

TEST_CASE("level names") {
  CHECK(parse_variability("mixed") == Variability::mixed);
  CHECK(parse_linearity("low") == Linearity::low);
  CHECK(to_string(Variability::high) == "high");
  CHECK_THROWS_AS(parse_variability("medium"), DomainError);
  CHECK_THROWS_AS(parse_linearity("none"), DomainError);
  CHECK_THROWS_AS(VariabilitySpec::standard(Variability::low, 3), DomainError);
}

TEST_CASE("generated intervals stay inside their support") {
  for (auto level : {Variability::low, Variability::high, Variability::mixed}) {
    for (std::size_t k = 0; k < 3; ++k) {
      auto spec = VariabilitySpec::standard(level, k);
      for (int n : {2, 50}) {
        spec.microdata_count = n;
        Stream rng(3, std::uint32_t(k), std::uint32_t(n));
        const auto x = gen_explicative(spec, 200, rng);
        double lo = 1e300, hi = -1e300;
        for (const auto& d : spec.options) {
          lo = std::min(lo, d.lo_min);
          hi = std::max(hi, d.hi_max);
        }
        for (const auto& v : x.values) {
          CHECK(v.lower() <= v.upper());
          CHECK(v.lower() >= lo);
          CHECK(v.upper() <= hi);
        }
      }
    }
  }
  VariabilitySpec bad = VariabilitySpec::standard(Variability::low, 0);
  bad.microdata_count = 1;
  Stream rng(1, 0, 0);
  CHECK_THROWS_AS(gen_explicative(bad, 3, rng), DomainError);
}

TEST_CASE("more microdata widens the intervals") {
  auto spec = VariabilitySpec::standard(Variability::low, 0);
  spec.microdata_count = 5000;
  Stream rng(4, 0, 0);
  const auto x = gen_explicative(spec, 50, rng);
  // With 5000 draws the sample extremes sit within 0.01 of the support ends almost surely.
  double widest = 0;
  for (const auto& v : x.values) widest = std::max(widest, v.upper() - v.lower());
  CHECK(widest > 4);
  CHECK(widest < 8);
}

TEST_CASE("noise clamp keeps half-ranges non-negative") {
  const IntervalVariabled ystar{"Y", {Intervald(0, 2), Intervald(1, 1.5), Intervald(-3, 3)}};
  Stream rng(8, 0, 0);
  for (int i = 0; i < 200; ++i) {
    const auto y = disturb(ystar, {1, 100}, rng);
    for (std::size_t j = 0; j < y.size(); ++j) {
      CHECK(y[j].halfrange() >= 0);
      // b is clamped at the smallest half-range, 0.25.
      CHECK(std::abs(y[j].halfrange() - ystar[j].halfrange()) <= 0.25 + 1e-12);
      CHECK(std::abs(y[j].center() - ystar[j].center()) <= 1);
    }
  }
  CHECK_THROWS_AS(disturb(ystar, {-1, 0}, rng), DomainError);
}

TEST_CASE("linearity error scales") {
  const IntervalVariabled ystar{"Y", {Intervald(-2, 4), Intervald(1, 10)}};
  const auto low = linearity_error_spec(ystar, Linearity::low);
  CHECK(low.a_scale == doctest::Approx(6));  // (|-2| + |10|) / 2
  CHECK(low.b_scale == doctest::Approx(3));
  const auto high = linearity_error_spec(ystar, Linearity::high);
  CHECK(high.a_scale == doctest::Approx(0.75));
  CHECK(high.b_scale == doctest::Approx(3.0 / 8));
}

TEST_CASE("noiseless cells recover the truth") {
  auto cfg = small_study1();
  cfg.a_scales = {0};
  cfg.b_scales = {0};
  const auto rep = run_study1(cfg);
  REQUIRE(rep.cells.size() == 1);
  const auto& c = rep.cells[0];
  CHECK(c.omega.mean == doctest::Approx(1).epsilon(1e-10));
  CHECK(c.rmse_m.mean <= 1e-8);
  for (double v : c.mse) CHECK(v <= 1e-16);
}

TEST_CASE("study output is deterministic and independent of thread count") {
  auto cfg = small_study1();
  const std::string one = report_csv(run_study1(cfg));
  CHECK(one == report_csv(run_study1(cfg)));
  cfg.threads = 3;
  CHECK(one == report_csv(run_study1(cfg)));
  cfg.seed = 100;
  CHECK(one != report_csv(run_study1(cfg)));
}

TEST_CASE("study report layout") {
  const auto rep = run_study1(small_study1());
  REQUIRE(rep.cells.size() == 4);
  CHECK(rep.cells[1].a_scale == 0);
  CHECK(rep.cells[1].b_scale == 2);
  CHECK(rep.cells[2].a_scale == 5);
  CHECK(rep.param_names == std::vector<std::string>{"alpha", "beta", "gamma"});
  std::istringstream csv(report_csv(rep));
  std::string header, row;
  std::getline(csv, header);
  std::getline(csv, row);
  CHECK(header.rfind("study,cell,m,variability,linearity,a_scale,b_scale,replications,omega_mean", 0) == 0);
  CHECK(count_fields(header) == 16 + 9);
  CHECK(count_fields(row) == count_fields(header));

  StudyConfig s2;
  s2.study = 2;
  s2.truth = DsdCoefficientsd::from_packed((Eigen::VectorXd(7) << 2, 1, 0.5, 3, 1.5, 1, -1).finished());
  s2.variability_levels = {Variability::mixed};
  s2.linearity = {Linearity::high, Linearity::low};
  s2.m_values = {10, 30};
  s2.replications = 3;
  s2.microdata_count = 50;
  s2.threads = 1;
  const auto rep2 = run_study(s2);
  REQUIRE(rep2.cells.size() == 4);
  CHECK(rep2.cells[0].linearity == "high");
  CHECK(rep2.cells[1].m == 30);
  CHECK(rep2.cells[2].linearity == "low");
  CHECK(rep2.param_names.front() == "alpha1");
  std::istringstream csv2(report_csv(rep2));
  std::getline(csv2, header);
  std::getline(csv2, row);
  CHECK(count_fields(header) == 16 + 21);
  CHECK(row.find(",mixed,high,,,3,") != std::string::npos);
}

TEST_CASE("invalid study configurations") {
  auto cfg = small_study1();
  cfg.variability = {Variability::low, Variability::low};
  CHECK_THROWS_AS(run_study1(cfg), DomainError);
  cfg = small_study1();
  cfg.truth = DsdCoefficientsd::single(-1, 1, 0);
  CHECK_THROWS_AS(run_study1(cfg), DomainError);
  cfg = small_study1();
  cfg.study = 2;
  CHECK_THROWS_AS(run_study1(cfg), DomainError);
  CHECK_THROWS_AS(run_study(cfg), DomainError);
}

TEST_CASE("parameter MSE does not grow with m under high linearity") {
  // 10 seeded macro-replications at reduced scale; each parameter's MSE must be
  // non-increasing across m in at least 9 of them.
  StudyConfig cfg;
  cfg.study = 2;
  cfg.truth = DsdCoefficientsd::single(2, 1, -1);
  cfg.variability_levels = {Variability::low};
  cfg.linearity = {Linearity::high};
  cfg.m_values = {10, 30, 100, 250};
  cfg.replications = 200;
  cfg.microdata_count = 500;
  cfg.threads = 1;
  std::vector<int> monotone(3, 0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.seed = seed;
    const auto rep = run_study2(cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      bool ok = true;
      for (std::size_t c = 1; c < rep.cells.size(); ++c) ok = ok && rep.cells[c].mse[i] <= rep.cells[c - 1].mse[i];
      monotone[i] += ok;
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    INFO("parameter " << i << ": monotone in " << monotone[i] << " of 10");
    CHECK(monotone[i] >= 9);
  }
}
