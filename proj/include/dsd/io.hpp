#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsd/baselines.hpp"
#include "dsd/interval.hpp"
#include "dsd/simulation.hpp"
#include "dsd/solver.hpp"

namespace dsd {

/// All interval variables of a CSV file, in column order.
struct Dataset {
  std::vector<std::string> unit_labels;
  std::vector<IntervalVariabled> variables;

  const IntervalVariabled& variable(const std::string& name) const;
  bool has(const std::string& name) const;
};

/// CSV: header `unit,V_lb,V_ub,...`; one row per unit. `source` names the input in errors.
Dataset parse_dataset(std::istream& in, const std::string& source);
Dataset read_dataset(const std::string& path);

/// Writes bounds with 17 significant digits so that reading back is lossless.
void write_dataset(const Dataset& data, std::ostream& out);
void write_dataset(const Dataset& data, const std::string& path);

/// Selects response and predictors; an empty predictor list takes every other variable.
SymbolicTabled make_table(const Dataset& data, const std::string& response,
                          const std::vector<std::string>& predictors = {});

SymbolicTabled read_table(const std::string& path, const std::string& response,
                          const std::vector<std::string>& predictors = {});
void write_table(const SymbolicTabled& table, const std::string& path);

/// Replaces variable `name` by ln(bounds + shift).
void apply_log_shift(Dataset& data, const std::string& name, double shift);

/// "VAR:SHIFT" -> (VAR, SHIFT).
std::pair<std::string, double> parse_log_shift(const std::string& spec);

/// A fitted model of any method, as stored in a model file.
struct StoredModel {
  std::string method;  ///< dsd, cm, minmax, crm or ccrm
  std::string response;
  std::vector<std::string> predictors;
  std::vector<std::pair<std::string, double>> log_shifts;
  std::size_t m = 0;
  std::optional<double> omega;
  DsdCoefficientsd dsd;
  BaselineModel<double> baseline;

  std::vector<PredictedBounds<double>> predict(const SymbolicTabled& table) const;
  std::vector<PredictedBounds<double>> predict(const Dataset& data) const;
};

/// Flat `key = value` text; coefficients at 17 significant digits.
void write_model(const StoredModel& model, std::ostream& out);
void write_model(const StoredModel& model, const std::string& path);
StoredModel parse_model(std::istream& in, const std::string& source);
StoredModel read_model(const std::string& path);

/// Flat `key = value` pairs; '#' starts a comment. Duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source);

StudyConfig parse_study_config(std::istream& in, const std::string& source);
StudyConfig read_study_config(const std::string& path);

std::string format_double(double v, int digits = 17);

}  // namespace dsd
