#include "dsd/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "dsd/model.hpp"

namespace dsd {

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write output file '" + path + "'");
  f << text;
}

std::string csv_double(double v) { return format_double(v, 10); }

std::string describe(const StoredModel& model) {
  std::ostringstream s;
  auto affine = [&](const char* tag, const Eigen::VectorXd& b) {
    s << tag << "=" << csv_double(b(0));
    for (std::size_t k = 0; k < model.predictors.size(); ++k) {
      s << (b(Eigen::Index(k) + 1) < 0 ? "" : "+") << csv_double(b(Eigen::Index(k) + 1)) << "*" << model.predictors[k];
    }
  };
  if (model.method == "dsd") {
    s << "gamma=" << csv_double(model.dsd.gamma);
    for (std::size_t k = 0; k < model.predictors.size(); ++k) {
      s << ";alpha." << model.predictors[k] << "=" << csv_double(model.dsd.alphas(Eigen::Index(k)));
      s << ";beta." << model.predictors[k] << "=" << csv_double(model.dsd.betas(Eigen::Index(k)));
    }
    return s.str();
  }
  const auto& b = model.baseline;
  switch (b.method) {
    case BaselineMethod::CM: affine("center", b.center_fit); break;
    case BaselineMethod::MinMax:
      affine("lower", b.lower_fit);
      s << ";";
      affine("upper", b.upper_fit);
      break;
    case BaselineMethod::CRM:
    case BaselineMethod::CCRM:
      affine("center", b.center_fit);
      s << ";";
      affine("halfrange", b.range_fit);
      break;
  }
  return s.str();
}

}  // namespace

SymbolicTabled load_table(const DataOptions& opts) {
  Dataset data = read_dataset(opts.table_path);
  for (const auto& [name, shift] : opts.log_shifts) apply_log_shift(data, name, shift);
  return make_table(data, opts.response, opts.predictors);
}

StoredModel fit_model(const SymbolicTabled& table, const std::string& method,
                      const std::vector<std::pair<std::string, double>>& log_shifts) {
  StoredModel model;
  model.method = method;
  model.response = table.response().name;
  for (const auto& x : table.explicatives()) model.predictors.push_back(x.name);
  for (const auto& ls : log_shifts)
    if (ls.first != model.response) model.log_shifts.push_back(ls);
  model.m = table.units();
  if (method == "dsd") {
    const auto fitted = fit(table);
    model.dsd = fitted.coefficients;
    model.omega = fitted.omega;
    return model;
  }
  const auto tag = parse_baseline_method(method);
  if (!tag) throw DomainError("unknown method '" + method + "' (expected dsd, cm, minmax, crm or ccrm)");
  model.baseline = fit_baseline(*tag, table);
  return model;
}

FitReport<double> training_report(const StoredModel& model, const SymbolicTabled& table) {
  return fit_report(table.response(), model.predict(table), model.omega);
}

std::string fit_report_header() { return "method,m,p,omega,rmse_l,rmse_u,rmse_m,model\n"; }

std::string fit_report_row(const StoredModel& model, const FitReport<double>& r) {
  std::ostringstream s;
  s << model.method << ',' << model.m << ',' << model.predictors.size() << ','
    << (r.omega ? csv_double(*r.omega) : "") << ',' << csv_double(r.rmse_l) << ',' << csv_double(r.rmse_u) << ','
    << csv_double(r.rmse_m) << ',' << describe(model) << '\n';
  return s.str();
}

void cmd_fit(const DataOptions& opts, const std::string& method, const std::string& model_path,
             const std::string& report_path, std::ostream& out) {
  const SymbolicTabled table = load_table(opts);
  const StoredModel model = fit_model(table, method, opts.log_shifts);
  if (!model_path.empty()) write_model(model, model_path);
  emit(fit_report_header() + fit_report_row(model, training_report(model, table)), report_path, out);
}

void cmd_predict(const std::string& model_path, const std::string& table_path, const std::string& out_path,
                 std::ostream& out) {
  const StoredModel model = read_model(model_path);
  const Dataset data = read_dataset(table_path);
  const auto pred = model.predict(data);
  std::ostringstream s;
  s << "unit," << model.response << "_lb," << model.response << "_ub\n";
  for (std::size_t j = 0; j < pred.size(); ++j) {
    s << data.unit_labels[j] << ',' << format_double(pred[j].lower) << ',' << format_double(pred[j].upper) << '\n';
  }
  emit(s.str(), out_path, out);
}

void cmd_compare(const DataOptions& opts, std::ostream& out) {
  const SymbolicTabled table = load_table(opts);
  out << fit_report_header();
  for (const char* method : {"dsd", "cm", "minmax", "crm", "ccrm"}) {
    const StoredModel model = fit_model(table, method, opts.log_shifts);
    out << fit_report_row(model, training_report(model, table));
  }
}

void cmd_loo(const DataOptions& opts, std::ostream& out) {
  const SymbolicTabled table = load_table(opts);
  const auto pred = loo_predict(table);
  out << "unit,observed_lb,observed_ub,predicted_lb,predicted_ub\n";
  for (std::size_t j = 0; j < pred.size(); ++j) {
    const auto& y = table.response()[j];
    out << table.unit_labels()[j] << ',' << format_double(y.lower()) << ',' << format_double(y.upper()) << ','
        << format_double(pred[j].lower()) << ',' << format_double(pred[j].upper()) << '\n';
  }
}

void cmd_study(const std::string& config_path, const StudyOverrides& overrides, const std::string& out_path,
               std::ostream& out) {
  StudyConfig cfg = read_study_config(config_path);
  if (overrides.replications) {
    if (*overrides.replications < 1) throw DomainError("replications must be at least 1");
    cfg.replications = *overrides.replications;
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.threads) cfg.threads = *overrides.threads;
  emit(report_csv(run_study(cfg)), out_path, out);
}

}  // namespace dsd
