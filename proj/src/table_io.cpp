#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
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

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string format_double(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

const IntervalVariabled& Dataset::variable(const std::string& name) const {
  for (const auto& v : variables)
    if (v.name == name) return v;
  std::string known;
  for (const auto& v : variables) known += (known.empty() ? "" : ", ") + v.name;
  throw DomainError("no variable '" + name + "' (available: " + known + ")");
}

bool Dataset::has(const std::string& name) const {
  for (const auto& v : variables)
    if (v.name == name) return true;
  return false;
}

Dataset parse_dataset(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto where = [&](std::size_t col) {
    return source + ": row " + std::to_string(line_no) + ", column " + std::to_string(col) + ": ";
  };

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.empty()) throw ParseError(source + ": empty file, expected a header row");
  if (header.size() < 3 || (header.size() - 1) % 2 != 0) {
    throw ParseError(source + ": header must be a unit column followed by V_lb,V_ub pairs");
  }

  Dataset data;
  std::set<std::string> names;
  for (std::size_t c = 1; c < header.size(); c += 2) {
    const std::string& lb = header[c];
    const std::string& ub = header[c + 1];
    if (!ends_with(lb, "_lb") || !ends_with(ub, "_ub") || lb.substr(0, lb.size() - 3) != ub.substr(0, ub.size() - 3) ||
        lb.size() == 3) {
      throw ParseError(source + ": header columns " + std::to_string(c + 1) + "-" + std::to_string(c + 2) + " ('" +
                       lb + "', '" + ub + "') are not an adjacent V_lb,V_ub pair");
    }
    const std::string name = lb.substr(0, lb.size() - 3);
    if (!names.insert(name).second) throw ParseError(source + ": variable '" + name + "' appears twice in header");
    data.variables.push_back({name, {}});
  }

  std::set<std::string> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ParseError(source + ": row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(header.size()));
    }
    if (cells[0].empty()) throw ParseError(where(1) + "empty unit label");
    if (!labels.insert(cells[0]).second) throw ParseError(where(1) + "duplicate unit label '" + cells[0] + "'");
    data.unit_labels.push_back(cells[0]);

    std::vector<double> v(cells.size());
    for (std::size_t c = 1; c < cells.size(); ++c) {
      const char* s = cells[c].c_str();
      char* end = nullptr;
      errno = 0;
      v[c] = std::strtod(s, &end);
      if (cells[c].empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v[c])) {
        throw ParseError(where(c + 1) + "'" + cells[c] + "' is not a finite number (" + header[c] + ")");
      }
    }
    for (std::size_t c = 1; c < cells.size(); c += 2) {
      if (v[c] > v[c + 1]) {
        throw ParseError(where(c + 1) + "lower bound " + cells[c] + " exceeds upper bound " + cells[c + 1] +
                         " for variable '" + data.variables[(c - 1) / 2].name + "'");
      }
      data.variables[(c - 1) / 2].values.emplace_back(v[c], v[c + 1]);
    }
  }
  if (data.unit_labels.empty()) throw ParseError(source + ": no data rows");
  return data;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file '" + path + "'");
  return parse_dataset(in, path);
}

void write_dataset(const Dataset& data, std::ostream& out) {
  out << "unit";
  for (const auto& v : data.variables) out << ',' << v.name << "_lb," << v.name << "_ub";
  out << '\n';
  for (std::size_t j = 0; j < data.unit_labels.size(); ++j) {
    out << data.unit_labels[j];
    for (const auto& v : data.variables) out << ',' << format_double(v[j].lower()) << ',' << format_double(v[j].upper());
    out << '\n';
  }
}

void write_dataset(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write table file '" + path + "'");
  write_dataset(data, out);
}

SymbolicTabled make_table(const Dataset& data, const std::string& response,
                          const std::vector<std::string>& predictors) {
  IntervalVariabled y = data.variable(response);
  std::vector<IntervalVariabled> xs;
  if (predictors.empty()) {
    for (const auto& v : data.variables)
      if (v.name != response) xs.push_back(v);
  } else {
    for (const auto& p : predictors) {
      if (p == response) throw DomainError("variable '" + p + "' is both response and predictor");
      xs.push_back(data.variable(p));
    }
  }
  return SymbolicTabled(data.unit_labels, std::move(y), std::move(xs));
}

SymbolicTabled read_table(const std::string& path, const std::string& response,
                          const std::vector<std::string>& predictors) {
  return make_table(read_dataset(path), response, predictors);
}

void write_table(const SymbolicTabled& table, const std::string& path) {
  Dataset d;
  d.unit_labels = table.unit_labels();
  d.variables.push_back(table.response());
  for (const auto& x : table.explicatives()) d.variables.push_back(x);
  write_dataset(d, path);
}

void apply_log_shift(Dataset& data, const std::string& name, double shift) {
  for (auto& v : data.variables) {
    if (v.name == name) {
      v = log_shift_transform(v, shift, &data.unit_labels);
      return;
    }
  }
  data.variable(name);  // throws with the list of known names
}

std::pair<std::string, double> parse_log_shift(const std::string& spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
    throw DomainError("log shift '" + spec + "' must look like VAR:SHIFT");
  }
  const std::string num = spec.substr(colon + 1);
  char* end = nullptr;
  const double shift = std::strtod(num.c_str(), &end);
  if (*end != '\0' || !std::isfinite(shift)) throw DomainError("log shift '" + spec + "' has a non-numeric shift");
  return {spec.substr(0, colon), shift};
}

}  // namespace dsd
