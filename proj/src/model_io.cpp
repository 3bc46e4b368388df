#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dsd/io.hpp"
#include "dsd/metrics.hpp"
#include "dsd/model.hpp"

namespace dsd {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::string vector_text(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v(i));
  return s;
}

double number(const std::string& key, const std::string& s, const std::string& source) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v)) {
    throw ParseError(source + ": key '" + key + "': '" + s + "' is not a finite number");
  }
  return v;
}

Eigen::VectorXd vector_value(const std::string& key, const std::string& s, const std::string& source,
                             Eigen::Index expected) {
  const auto items = split(s);
  if (Eigen::Index(items.size()) != expected) {
    throw ParseError(source + ": key '" + key + "' has " + std::to_string(items.size()) + " values, expected " +
                     std::to_string(expected));
  }
  Eigen::VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) v(i) = number(key, items[std::size_t(i)], source);
  return v;
}

}  // namespace

std::vector<PredictedBounds<double>> StoredModel::predict(const SymbolicTabled& table) const {
  if (table.predictors() != predictors.size()) {
    throw DomainError("model expects " + std::to_string(predictors.size()) + " predictors, table has " +
                      std::to_string(table.predictors()));
  }
  if (method == "dsd") return as_bounds(predict_table(dsd, table));
  return predict_baseline_table(baseline, table);
}

std::vector<PredictedBounds<double>> StoredModel::predict(const Dataset& data) const {
  Dataset d = data;
  for (const auto& [name, shift] : log_shifts)
    if (d.has(name)) apply_log_shift(d, name, shift);
  std::vector<IntervalVariabled> xs;
  for (const auto& p : predictors) xs.push_back(d.variable(p));
  // The response is not needed for prediction; reuse the first predictor as a placeholder.
  const SymbolicTabled table(d.unit_labels, xs.front(), xs);
  return predict(table);
}

void write_model(const StoredModel& model, std::ostream& out) {
  out << "method = " << model.method << '\n';
  out << "response = " << model.response << '\n';
  out << "predictors = " << join(model.predictors) << '\n';
  for (const auto& [name, shift] : model.log_shifts) out << "log_shift." << name << " = " << format_double(shift) << '\n';
  out << "m = " << model.m << '\n';
  out << "p = " << model.predictors.size() << '\n';
  if (model.method == "dsd") {
    out << "alphas = " << vector_text(model.dsd.alphas) << '\n';
    out << "betas = " << vector_text(model.dsd.betas) << '\n';
    out << "gamma = " << format_double(model.dsd.gamma) << '\n';
  } else {
    const auto& b = model.baseline;
    if (b.center_fit.size()) out << "center_fit = " << vector_text(b.center_fit) << '\n';
    if (b.range_fit.size()) out << "range_fit = " << vector_text(b.range_fit) << '\n';
    if (b.lower_fit.size()) out << "lower_fit = " << vector_text(b.lower_fit) << '\n';
    if (b.upper_fit.size()) out << "upper_fit = " << vector_text(b.upper_fit) << '\n';
  }
  if (model.omega) out << "omega = " << format_double(*model.omega) << '\n';
}

void write_model(const StoredModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write model file '" + path + "'");
  write_model(model, out);
}

StoredModel parse_model(std::istream& in, const std::string& source) {
  auto kv = parse_key_values(in, source);
  auto need = [&](const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(source + ": missing key '" + key + "'");
    return it->second;
  };

  StoredModel model;
  model.method = need("method");
  model.response = need("response");
  model.predictors = split(need("predictors"));
  if (model.predictors.empty()) throw ParseError(source + ": no predictors");
  const auto p = Eigen::Index(model.predictors.size());
  if (number("p", need("p"), source) != double(p)) throw ParseError(source + ": p disagrees with predictors");
  model.m = std::size_t(number("m", need("m"), source));
  for (const auto& [key, value] : kv) {
    if (key.rfind("log_shift.", 0) == 0) model.log_shifts.emplace_back(key.substr(10), number(key, value, source));
  }
  if (kv.count("omega")) model.omega = number("omega", kv.at("omega"), source);

  if (model.method == "dsd") {
    model.dsd.alphas = vector_value("alphas", need("alphas"), source, p);
    model.dsd.betas = vector_value("betas", need("betas"), source, p);
    model.dsd.gamma = number("gamma", need("gamma"), source);
    return model;
  }
  const auto method = parse_baseline_method(model.method);
  if (!method) throw ParseError(source + ": unknown method '" + model.method + "'");
  auto& b = model.baseline;
  b.method = *method;
  if (*method == BaselineMethod::MinMax) {
    b.lower_fit = vector_value("lower_fit", need("lower_fit"), source, p + 1);
    b.upper_fit = vector_value("upper_fit", need("upper_fit"), source, p + 1);
  } else {
    b.center_fit = vector_value("center_fit", need("center_fit"), source, p + 1);
    if (*method != BaselineMethod::CM) b.range_fit = vector_value("range_fit", need("range_fit"), source, p + 1);
  }
  return model;
}

StoredModel read_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  return parse_model(in, path);
}

}  // namespace dsd
