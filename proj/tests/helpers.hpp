#pragma once

#include <random>
#include <string>
#include <vector>

#include "dsd/interval.hpp"

namespace testutil {

inline std::vector<std::string> labels(std::size_t m) {
  std::vector<std::string> l;
  for (std::size_t j = 0; j < m; ++j) l.push_back("u" + std::to_string(j));
  return l;
}

inline dsd::IntervalVariabled var(const std::string& name, std::vector<std::pair<double, double>> bounds) {
  dsd::IntervalVariabled v{name, {}};
  for (auto [l, u] : bounds) v.values.emplace_back(l, u);
  return v;
}

inline dsd::Intervald random_interval(std::mt19937_64& rng, double lo = -10, double hi = 10, double max_r = 5) {
  std::uniform_real_distribution<double> c(lo, hi), r(0, max_r);
  return dsd::Intervald::from_center_halfrange(c(rng), r(rng));
}

inline dsd::IntervalVariabled random_variable(std::mt19937_64& rng, const std::string& name, std::size_t m,
                                              double lo = -10, double hi = 10, double max_r = 5) {
  dsd::IntervalVariabled v{name, {}};
  for (std::size_t j = 0; j < m; ++j) v.values.push_back(random_interval(rng, lo, hi, max_r));
  return v;
}

}  // namespace testutil
