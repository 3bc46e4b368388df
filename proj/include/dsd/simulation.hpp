#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsd/interval.hpp"
#include "dsd/philox.hpp"
#include "dsd/solver.hpp"

namespace dsd {

enum class Variability { low, high, mixed };
enum class Linearity { low, high };

std::string to_string(Variability v);
std::string to_string(Linearity l);
Variability parse_variability(const std::string& s);
Linearity parse_linearity(const std::string& s);

/// Per-unit support of the microdata: lower end drawn from U(lo_min, lo_max), upper end from
/// U(hi_min, hi_max).
struct DeltaPair {
  double lo_min, lo_max, hi_min, hi_max;
};

struct VariabilitySpec {
  Variability level = Variability::low;
  /// One option per unit, picked uniformly when there are several.
  std::vector<DeltaPair> options;
  int microdata_count = 5000;

  /// Standard supports for predictor k (0-based; k = 0 is also the single-predictor design).
  static VariabilitySpec standard(Variability level, std::size_t k);
};

struct ErrorSpec {
  double a_scale = 0;
  double b_scale = 0;
};

/// Noise scales for a linearity level: a within (ml + mu) / 2, b within mr, scaled by 1 for
/// low and 1/8 for high linearity.
ErrorSpec linearity_error_spec(const IntervalVariabled& ystar, Linearity level);

IntervalVariabled gen_explicative(const VariabilitySpec& spec, std::size_t m, Stream& rng,
                                  const std::string& name = "X");

/// Noiseless model output Y* for each unit.
IntervalVariabled noiseless_response(const DsdCoefficientsd& truth, const std::vector<IntervalVariabled>& xs);

/// Adds a_j ~ U(-s_a, s_a) to each center and b_j ~ U(-b, b) to each half-range, with
/// b = min(s_b, min_j r_Y*(j)) so half-ranges stay non-negative.
IntervalVariabled disturb(const IntervalVariabled& ystar, const ErrorSpec& error, Stream& rng);

IntervalVariabled gen_response(const DsdCoefficientsd& truth, const std::vector<IntervalVariabled>& xs,
                               const ErrorSpec& error, Stream& rng);

struct StudyConfig {
  int study = 1;  ///< 1 or 2
  DsdCoefficientsd truth;
  std::vector<Variability> variability;  ///< Study I: one level per predictor
  std::vector<Variability> variability_levels;  ///< Study II: levels crossed in the design
  std::vector<std::size_t> m_values;
  std::vector<double> a_scales;  ///< Study I
  std::vector<double> b_scales;  ///< Study I
  std::vector<Linearity> linearity;  ///< Study II
  int replications = 1000;
  std::uint64_t seed = 1;
  int microdata_count = 5000;
  int threads = 0;  ///< 0: DSD_THREADS or hardware concurrency
};

struct SampleSummary {
  double mean = 0;
  double sd = 0;
};

struct CellReport {
  std::size_t index = 0;
  std::size_t m = 0;
  std::string variability;
  std::string linearity;  ///< empty in Study I
  double a_scale = 0;  ///< Study I only
  double b_scale = 0;  ///< Study I only
  int replications = 0;
  SampleSummary omega, rmse_m, rmse_l, rmse_u;
  std::vector<SampleSummary> params;  ///< packed order
  std::vector<double> mse;            ///< packed order
};

struct StudyReport {
  int study = 1;
  std::vector<std::string> param_names;
  std::vector<CellReport> cells;
};

SampleSummary summarize(const std::vector<double>& values);

StudyReport run_study1(const StudyConfig& config);
StudyReport run_study2(const StudyConfig& config);
StudyReport run_study(const StudyConfig& config);

/// CSV with one row per cell; identical columns for both studies.
std::string report_csv(const StudyReport& report);

}  // namespace dsd
