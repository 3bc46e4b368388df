#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dsd/io.hpp"

namespace dsd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& s, const std::string& source) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v)) {
    throw ParseError(source + ": key '" + key + "': '" + s + "' is not a finite number");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& s, const std::string& source) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw ParseError(source + ": key '" + key + "': '" + s + "' is not an integer");
  return v;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source + ": line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(source + ": line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ParseError(source + ": line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

StudyConfig parse_study_config(std::istream& in, const std::string& source) {
  auto kv = parse_key_values(in, source);
  auto take = [&](const std::string& key, bool required) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      if (required) throw ParseError(source + ": missing key '" + key + "'");
      return std::nullopt;
    }
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  StudyConfig cfg;
  cfg.study = int(to_integer("study", *take("study", true), source));
  if (cfg.study != 1 && cfg.study != 2) throw ParseError(source + ": study must be 1 or 2");

  std::vector<double> truth;
  for (const auto& t : split_list(*take("truth", true))) truth.push_back(to_double("truth", t, source));
  if (truth.size() < 3 || truth.size() % 2 == 0) {
    throw ParseError(source + ": truth must list alpha_1,beta_1,...,alpha_p,beta_p,gamma");
  }
  cfg.truth = DsdCoefficientsd::from_packed(Eigen::Map<Eigen::VectorXd>(truth.data(), Eigen::Index(truth.size())));

  for (const auto& m : split_list(*take("m", true))) {
    const long long v = to_integer("m", m, source);
    if (v < 2) throw ParseError(source + ": sample sizes must be at least 2");
    cfg.m_values.push_back(std::size_t(v));
  }

  try {
    if (cfg.study == 1) {
      for (const auto& v : split_list(*take("variability", true))) cfg.variability.push_back(parse_variability(v));
      if (Eigen::Index(cfg.variability.size()) == 1 && cfg.truth.predictors() > 1) {
        cfg.variability.assign(std::size_t(cfg.truth.predictors()), cfg.variability.front());
      }
      for (const auto& a : split_list(*take("a_scales", true))) cfg.a_scales.push_back(to_double("a_scales", a, source));
      for (const auto& b : split_list(*take("b_scales", true))) cfg.b_scales.push_back(to_double("b_scales", b, source));
    } else {
      for (const auto& v : split_list(*take("variability", true))) {
        cfg.variability_levels.push_back(parse_variability(v));
      }
      for (const auto& l : split_list(*take("linearity", true))) cfg.linearity.push_back(parse_linearity(l));
    }
  } catch (const DomainError& e) {
    throw ParseError(source + ": " + e.what());
  }

  if (auto r = take("replications", false)) {
    cfg.replications = int(to_integer("replications", *r, source));
    if (cfg.replications < 1) throw ParseError(source + ": replications must be at least 1");
  }
  if (auto s = take("seed", false)) cfg.seed = std::uint64_t(to_integer("seed", *s, source));
  if (auto n = take("microdata", false)) {
    cfg.microdata_count = int(to_integer("microdata", *n, source));
    if (cfg.microdata_count < 2) throw ParseError(source + ": microdata must be at least 2");
  }
  if (auto t = take("threads", false)) cfg.threads = int(to_integer("threads", *t, source));

  if (!kv.empty()) throw ParseError(source + ": unknown key '" + kv.begin()->first + "'");
  return cfg;
}

StudyConfig read_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  return parse_study_config(in, path);
}

}  // namespace dsd
