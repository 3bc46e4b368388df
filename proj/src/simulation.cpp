#include "dsd/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "dsd/metrics.hpp"
#include "dsd/model.hpp"

namespace dsd {

std::string to_string(Variability v) {
  switch (v) {
    case Variability::low: return "low";
    case Variability::high: return "high";
    case Variability::mixed: return "mixed";
  }
  return "?";
}

std::string to_string(Linearity l) { return l == Linearity::low ? "low" : "high"; }

Variability parse_variability(const std::string& s) {
  if (s == "low") return Variability::low;
  if (s == "high") return Variability::high;
  if (s == "mixed") return Variability::mixed;
  throw DomainError("unknown variability level '" + s + "' (expected low, high or mixed)");
}

Linearity parse_linearity(const std::string& s) {
  if (s == "low") return Linearity::low;
  if (s == "high") return Linearity::high;
  throw DomainError("unknown linearity level '" + s + "' (expected low or high)");
}

VariabilitySpec VariabilitySpec::standard(Variability level, std::size_t k) {
  static const DeltaPair low[3] = {{-2, 0, 4, 6}, {1, 3, 3, 5}, {4, 6, 9, 11}};
  static const DeltaPair high[3] = {{-14, -12, 16, 18}, {1, 3, 25, 27}, {-16, -14, -1, 1}};
  if (level != Variability::mixed && k > 2) {
    throw DomainError("standard variability supports are defined for at most 3 predictors");
  }
  VariabilitySpec s;
  s.level = level;
  switch (level) {
    case Variability::low: s.options = {low[k]}; break;
    case Variability::high: s.options = {high[k]}; break;
    case Variability::mixed:
      s.options = {{-2, 0, 0, 2}, {-1, 1, 2, 4}, {-3, -1, 9, 11}, {-11, -9, 29, 31}, {-1, 1, 19, 21}};
      break;
  }
  return s;
}

IntervalVariabled gen_explicative(const VariabilitySpec& spec, std::size_t m, Stream& rng,
                                  const std::string& name) {
  if (spec.microdata_count < 2) throw DomainError("microdata count must be at least 2");
  if (spec.options.empty()) throw DomainError("variability spec has no support options");
  IntervalVariabled x{name, {}};
  x.values.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const DeltaPair& d =
        spec.options.size() == 1 ? spec.options[0] : spec.options[rng.below(std::uint32_t(spec.options.size()))];
    const double lo = rng.uniform(d.lo_min, d.lo_max);
    const double hi = rng.uniform(d.hi_min, d.hi_max);
    double mn = rng.uniform(lo, hi);
    double mx = mn;
    for (int i = 1; i < spec.microdata_count; ++i) {
      const double v = rng.uniform(lo, hi);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    x.values.emplace_back(mn, mx);
  }
  return x;
}

IntervalVariabled noiseless_response(const DsdCoefficientsd& truth, const std::vector<IntervalVariabled>& xs) {
  if (Eigen::Index(xs.size()) != truth.predictors()) {
    throw DomainError("truth has " + std::to_string(truth.predictors()) + " predictors, got " +
                      std::to_string(xs.size()) + " variables");
  }
  const std::size_t m = xs.front().size();
  IntervalVariabled y{"Y", {}};
  y.values.reserve(m);
  std::vector<Intervald> row(xs.size());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < xs.size(); ++k) row[k] = xs[k][j];
    y.values.push_back(predict_interval(truth, row));
  }
  return y;
}

ErrorSpec linearity_error_spec(const IntervalVariabled& ystar, Linearity level) {
  double lo = ystar[0].lower(), hi = ystar[0].upper(), mr = ystar[0].halfrange();
  for (const auto& i : ystar.values) {
    lo = std::min(lo, i.lower());
    hi = std::max(hi, i.upper());
    mr = std::min(mr, i.halfrange());
  }
  const double k = level == Linearity::low ? 1.0 : 1.0 / 8.0;
  return {k * (std::abs(lo) + std::abs(hi)) / 2.0, k * mr};
}

IntervalVariabled disturb(const IntervalVariabled& ystar, const ErrorSpec& error, Stream& rng) {
  if (error.a_scale < 0 || error.b_scale < 0) throw DomainError("error scales must be non-negative");
  double mr = ystar[0].halfrange();
  for (const auto& i : ystar.values) mr = std::min(mr, i.halfrange());
  const double b_eff = std::min(error.b_scale, mr);
  IntervalVariabled y{ystar.name, {}};
  y.values.reserve(ystar.size());
  for (const auto& i : ystar.values) {
    const double a = rng.uniform(-error.a_scale, error.a_scale);
    const double b = rng.uniform(-b_eff, b_eff);
    // b_eff <= r, so r + b >= 0 up to rounding.
    y.values.push_back(Intervald::from_center_halfrange(i.center() + a, std::max(0.0, i.halfrange() + b)));
  }
  return y;
}

IntervalVariabled gen_response(const DsdCoefficientsd& truth, const std::vector<IntervalVariabled>& xs,
                               const ErrorSpec& error, Stream& rng) {
  return disturb(noiseless_response(truth, xs), error, rng);
}

SampleSummary summarize(const std::vector<double>& values) {
  SampleSummary s;
  if (values.empty()) return s;
  CompensatedSum<double> sum;
  for (double v : values) sum.add(v);
  s.mean = sum.value() / double(values.size());
  if (values.size() > 1) {
    CompensatedSum<double> sq;
    for (double v : values) sq.add((v - s.mean) * (v - s.mean));
    s.sd = std::sqrt(sq.value() / double(values.size() - 1));
  }
  return s;
}

namespace {

struct Replicate {
  double omega = 0, rmse_m = 0, rmse_l = 0, rmse_u = 0;
  DsdCoefficientsd coeffs;
};

struct CellPlan {
  std::size_t m = 0;
  std::vector<VariabilitySpec> specs;
  std::string variability;
  bool by_linearity = false;
  Linearity linearity = Linearity::high;
  ErrorSpec error;
};

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DSD_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Replicate replicate(const StudyConfig& cfg, const CellPlan& plan, std::uint32_t cell, std::uint32_t rep) {
  Stream rng(cfg.seed, cell, rep);
  std::vector<IntervalVariabled> xs;
  for (std::size_t k = 0; k < plan.specs.size(); ++k) {
    xs.push_back(gen_explicative(plan.specs[k], plan.m, rng, "X" + std::to_string(k + 1)));
  }
  const IntervalVariabled ystar = noiseless_response(cfg.truth, xs);
  const ErrorSpec error = plan.by_linearity ? linearity_error_spec(ystar, plan.linearity) : plan.error;
  IntervalVariabled y = disturb(ystar, error, rng);

  std::vector<std::string> labels(plan.m);
  for (std::size_t j = 0; j < plan.m; ++j) labels[j] = std::to_string(j);
  const SymbolicTabled table(std::move(labels), std::move(y), std::move(xs));

  Replicate r;
  r.coeffs = solve_constrained_ls(table).first;
  const auto fitted = predict_table(r.coeffs, table);
  r.omega = omega(table.response(), IntervalVariabled{"fitted", fitted});
  r.rmse_m = rmse_m(table.response(), fitted);
  std::tie(r.rmse_l, r.rmse_u) = rmse_bounds(table.response(), fitted);
  return r;
}

CellReport run_cell(const StudyConfig& cfg, const CellPlan& plan, std::size_t cell) {
  if (cfg.replications < 1) throw DomainError("replications must be at least 1");
  const auto n = std::size_t(cfg.replications);
  std::vector<Replicate> results(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = replicate(cfg, plan, std::uint32_t(cell), std::uint32_t(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
        return;
      }
    }
  };
  const int threads = std::min<int>(thread_count(cfg.threads), int(n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  CellReport rep;
  rep.index = cell;
  rep.m = plan.m;
  rep.variability = plan.variability;
  rep.linearity = plan.by_linearity ? to_string(plan.linearity) : "";
  rep.a_scale = plan.error.a_scale;
  rep.b_scale = plan.error.b_scale;
  rep.replications = cfg.replications;

  std::vector<double> om, rm, rl, ru;
  std::vector<DsdCoefficientsd> est;
  for (const auto& r : results) {
    om.push_back(r.omega);
    rm.push_back(r.rmse_m);
    rl.push_back(r.rmse_l);
    ru.push_back(r.rmse_u);
    est.push_back(r.coeffs);
  }
  rep.omega = summarize(om);
  rep.rmse_m = summarize(rm);
  rep.rmse_l = summarize(rl);
  rep.rmse_u = summarize(ru);
  const Eigen::VectorXd truth = cfg.truth.packed();
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    std::vector<double> v;
    for (const auto& e : est) v.push_back(e.packed()(i));
    rep.params.push_back(summarize(v));
  }
  const Eigen::VectorXd mse = mse_params(est, cfg.truth);
  rep.mse.assign(mse.data(), mse.data() + mse.size());
  return rep;
}

std::vector<std::string> param_names(Eigen::Index p) {
  std::vector<std::string> names;
  for (Eigen::Index k = 1; k <= p; ++k) {
    const std::string s = p == 1 ? "" : std::to_string(k);
    names.push_back("alpha" + s);
    names.push_back("beta" + s);
  }
  names.push_back("gamma");
  return names;
}

void check_common(const StudyConfig& cfg) {
  if (cfg.truth.predictors() < 1) throw DomainError("study truth needs at least one predictor");
  if ((cfg.truth.alphas.array() < 0).any() || (cfg.truth.betas.array() < 0).any()) {
    throw DomainError("study truth alphas and betas must be non-negative");
  }
  if (cfg.m_values.empty()) throw DomainError("study needs at least one sample size m");
  for (auto m : cfg.m_values)
    if (m < 2) throw DomainError("sample sizes must be at least 2");
}

std::vector<VariabilitySpec> specs_for(const std::vector<Variability>& levels, int microdata) {
  std::vector<VariabilitySpec> specs;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    specs.push_back(VariabilitySpec::standard(levels[k], k));
    specs.back().microdata_count = microdata;
  }
  return specs;
}

std::string join_levels(const std::vector<Variability>& levels) {
  std::string s;
  for (std::size_t k = 0; k < levels.size(); ++k) s += (k ? "/" : "") + to_string(levels[k]);
  return s;
}

}  // namespace

StudyReport run_study1(const StudyConfig& cfg) {
  if (cfg.study != 1) throw DomainError("run_study1 needs a Study I configuration");
  check_common(cfg);
  if (Eigen::Index(cfg.variability.size()) != cfg.truth.predictors()) {
    throw DomainError("Study I needs one variability level per predictor");
  }
  if (cfg.a_scales.empty() || cfg.b_scales.empty()) throw DomainError("Study I needs a_scales and b_scales");

  StudyReport report;
  report.study = 1;
  report.param_names = param_names(cfg.truth.predictors());
  std::size_t cell = 0;
  for (std::size_t m : cfg.m_values) {
    for (double a : cfg.a_scales) {
      for (double b : cfg.b_scales) {
        CellPlan plan;
        plan.m = m;
        plan.specs = specs_for(cfg.variability, cfg.microdata_count);
        plan.variability = join_levels(cfg.variability);
        plan.error = {a, b};
        report.cells.push_back(run_cell(cfg, plan, cell++));
      }
    }
  }
  return report;
}

StudyReport run_study2(const StudyConfig& cfg) {
  if (cfg.study != 2) throw DomainError("run_study2 needs a Study II configuration");
  check_common(cfg);
  if (cfg.variability_levels.empty() || cfg.linearity.empty()) {
    throw DomainError("Study II needs variability levels and linearity levels");
  }

  StudyReport report;
  report.study = 2;
  report.param_names = param_names(cfg.truth.predictors());
  std::size_t cell = 0;
  for (Variability v : cfg.variability_levels) {
    for (Linearity lin : cfg.linearity) {
      for (std::size_t m : cfg.m_values) {
        CellPlan plan;
        plan.m = m;
        plan.specs = specs_for(std::vector<Variability>(std::size_t(cfg.truth.predictors()), v), cfg.microdata_count);
        plan.variability = to_string(v);
        plan.by_linearity = true;
        plan.linearity = lin;
        report.cells.push_back(run_cell(cfg, plan, cell++));
      }
    }
  }
  return report;
}

StudyReport run_study(const StudyConfig& cfg) {
  if (cfg.study == 1) return run_study1(cfg);
  if (cfg.study == 2) return run_study2(cfg);
  throw DomainError("study must be 1 or 2, got " + std::to_string(cfg.study));
}

std::string report_csv(const StudyReport& report) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "study,cell,m,variability,linearity,a_scale,b_scale,replications,"
         "omega_mean,omega_sd,rmse_m_mean,rmse_m_sd,rmse_l_mean,rmse_l_sd,rmse_u_mean,rmse_u_sd";
  for (const auto& p : report.param_names) out << ',' << p << "_mean," << p << "_sd," << p << "_mse";
  out << '\n';
  for (const auto& c : report.cells) {
    out << report.study << ',' << c.index << ',' << c.m << ',' << c.variability << ',' << c.linearity << ',';
    if (c.linearity.empty()) out << num(c.a_scale) << ',' << num(c.b_scale);
    else out << ',';
    out << ',' << c.replications;
    for (const auto* s : {&c.omega, &c.rmse_m, &c.rmse_l, &c.rmse_u}) out << ',' << num(s->mean) << ',' << num(s->sd);
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      out << ',' << num(c.params[i].mean) << ',' << num(c.params[i].sd) << ',' << num(c.mse[i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dsd
