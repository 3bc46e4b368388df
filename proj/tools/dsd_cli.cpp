#include <CLI11.hpp>

#include <iostream>

#include "dsd/commands.hpp"

namespace {

void add_data_options(CLI::App* cmd, dsd::DataOptions& opts, std::vector<std::string>& shifts) {
  cmd->add_option("table", opts.table_path, "Interval table (CSV with V_lb,V_ub column pairs)")->required();
  cmd->add_option("--response,-r", opts.response, "Response variable")->required();
  cmd->add_option("--predictors,-x", opts.predictors, "Predictor variables (default: all others)")->delimiter(',');
  cmd->add_option("--log-shift", shifts, "Replace VAR by ln(VAR + SHIFT) before fitting, as VAR:SHIFT");
}

std::vector<std::pair<std::string, double>> parse_shifts(const std::vector<std::string>& specs) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& s : specs) out.push_back(dsd::parse_log_shift(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval-valued regression: DSD model, baselines and simulation studies"};
  app.require_subcommand(1);

  dsd::DataOptions data;
  std::vector<std::string> shifts;
  std::string method = "dsd", model_out, report_out, model_in, out_path, config;
  dsd::StudyOverrides overrides;
  int replications = 0, threads = 0;
  std::uint64_t seed = 0;

  auto* fit = app.add_subcommand("fit", "Fit one method and report training-set goodness of fit");
  add_data_options(fit, data, shifts);
  fit->add_option("--method,-m", method, "dsd, cm, minmax, crm or ccrm")
      ->check(CLI::IsMember({"dsd", "cm", "minmax", "crm", "ccrm"}));
  fit->add_option("--out,-o", model_out, "Write the fitted model to this file");
  fit->add_option("--report", report_out, "Write the report CSV here instead of stdout");

  auto* predict = app.add_subcommand("predict", "Predict intervals from a saved model");
  predict->add_option("model", model_in, "Model file written by fit --out")->required();
  predict->add_option("table", data.table_path, "Table holding the predictor variables")->required();
  predict->add_option("--out,-o", out_path, "Write predictions here instead of stdout");

  auto* compare = app.add_subcommand("compare", "Fit all five methods and compare goodness of fit");
  add_data_options(compare, data, shifts);

  auto* loo = app.add_subcommand("loo", "Leave-one-out DSD predictions");
  add_data_options(loo, data, shifts);

  auto* study = app.add_subcommand("study", "Run a simulation study from a key = value config");
  study->add_option("--config,-c", config, "Study config file")->required();
  auto* rep_opt = study->add_option("--replications", replications, "Override the replication count")
                      ->check(CLI::PositiveNumber);
  auto* seed_opt = study->add_option("--seed", seed, "Override the seed");
  auto* thr_opt = study->add_option("--threads", threads, "Worker threads (default: DSD_THREADS or all cores)")
                      ->check(CLI::PositiveNumber);
  study->add_option("--out,-o", out_path, "Write the report CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    data.log_shifts = parse_shifts(shifts);
    if (fit->parsed()) {
      dsd::cmd_fit(data, method, model_out, report_out, std::cout);
    } else if (predict->parsed()) {
      dsd::cmd_predict(model_in, data.table_path, out_path, std::cout);
    } else if (compare->parsed()) {
      dsd::cmd_compare(data, std::cout);
    } else if (loo->parsed()) {
      dsd::cmd_loo(data, std::cout);
    } else if (study->parsed()) {
      if (*rep_opt) overrides.replications = replications;
      if (*seed_opt) overrides.seed = seed;
      if (*thr_opt) overrides.threads = threads;
      dsd::cmd_study(config, overrides, out_path, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
