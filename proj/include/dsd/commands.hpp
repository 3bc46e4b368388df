#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsd/io.hpp"
#include "dsd/metrics.hpp"

namespace dsd {

struct DataOptions {
  std::string table_path;
  std::string response;
  std::vector<std::string> predictors;  ///< empty: all non-response variables
  std::vector<std::pair<std::string, double>> log_shifts;
};

/// Reads the table and applies the log shifts.
SymbolicTabled load_table(const DataOptions& opts);

/// Fits `method` (dsd, cm, minmax, crm, ccrm).
StoredModel fit_model(const SymbolicTabled& table, const std::string& method,
                      const std::vector<std::pair<std::string, double>>& log_shifts = {});

FitReport<double> training_report(const StoredModel& model, const SymbolicTabled& table);

/// Header and row of the fit report CSV.
std::string fit_report_header();
std::string fit_report_row(const StoredModel& model, const FitReport<double>& report);

/// Writes the model file (if `model_path` is non-empty) and the report CSV to `report_path`
/// or, when empty, to `out`.
void cmd_fit(const DataOptions& opts, const std::string& method, const std::string& model_path,
             const std::string& report_path, std::ostream& out);

/// Predicted bounds per unit as CSV, to `out_path` or `out`.
void cmd_predict(const std::string& model_path, const std::string& table_path, const std::string& out_path,
                 std::ostream& out);

/// One fit-report row per method: dsd, cm, minmax, crm, ccrm.
void cmd_compare(const DataOptions& opts, std::ostream& out);

/// Observed and leave-one-out predicted bounds per unit.
void cmd_loo(const DataOptions& opts, std::ostream& out);

struct StudyOverrides {
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void cmd_study(const std::string& config_path, const StudyOverrides& overrides, const std::string& out_path,
               std::ostream& out);

}  // namespace dsd
