// Copyright 2026 The cct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "cct/corr.hpp"
#include "cct/csv.hpp"
#include "cct/errors.hpp"
#include "cct/mc.hpp"
#include "cct/pvalue_io.hpp"
#include "cct/stats.hpp"
#include "cct/svg.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_path;
  std::string svg_path;
};

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Writes to --out when given, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw cct::config_error("cannot open for writing: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw cct::config_error("write failed");
    }
  }

 private:
  std::ofstream file_;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cct::config_error("cannot open config: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw cct::config_error(std::string("config parse error: ") + e.what());
  }
}

void require_known_keys(const json& j, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.find(it.key()) == allowed.end()) {
      throw cct::config_error("unknown config key '" + it.key() + "'");
    }
  }
}

double get_double(const json& j, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw cct::config_error("config key '" + key + "' is required");
  }
  if (!j.at(key).is_number()) {
    throw cct::config_error("config key '" + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

long long get_int(const json& j, const std::string& key,
                  std::optional<long long> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw cct::config_error("config key '" + key + "' is required");
  }
  if (!j.at(key).is_number_integer()) {
    throw cct::config_error("config key '" + key + "' must be an integer");
  }
  return j.at(key).get<long long>();
}

std::string get_string(const json& j, const std::string& key,
                       std::optional<std::string> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw cct::config_error("config key '" + key + "' is required");
  }
  if (!j.at(key).is_string()) {
    throw cct::config_error("config key '" + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

std::vector<double> get_double_list(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw cct::config_error("config key '" + key + "' must be an array");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) {
      throw cct::config_error("config key '" + key +
                              "' must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

cct::CorrelationMatrix matrix_from_model(const std::string& model, int d,
                                         std::optional<double> rho,
                                         std::optional<int> d0) {
  auto need_rho = [&]() -> double {
    if (!rho) throw cct::config_error("model '" + model + "' requires rho");
    return *rho;
  };
  if (model == "ar1") return cct::ar1_correlation(d, need_rho());
  if (model == "polydecay") return cct::polydecay_correlation(d, need_rho());
  if (model == "singular") return cct::singular_correlation(d, need_rho());
  if (model == "exchangeable") return cct::exchangeable_correlation(d, need_rho());
  if (model == "banded") {
    if (!d0) throw cct::config_error("model 'banded' requires d0");
    return cct::banded_from_ar1(d, need_rho(), *d0);
  }
  throw cct::config_error(
      "unknown model '" + model +
      "'; valid models: ar1, polydecay, singular, exchangeable, banded");
}

cct::CorrelationMatrix matrix_from_config(const json& j) {
  if (j.contains("matrix_csv")) {
    return cct::load_correlation(get_string(j, "matrix_csv"));
  }
  std::optional<double> rho;
  if (j.contains("rho")) rho = get_double(j, "rho");
  std::optional<int> d0;
  if (j.contains("d0")) d0 = static_cast<int>(get_int(j, "d0"));
  return matrix_from_model(get_string(j, "model"),
                           static_cast<int>(get_int(j, "d")), rho, d0);
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

// ---- combine ----

struct CombineOpts {
  std::string input;
  std::string weights_path;
  std::string method = "CCT";
  std::string format = "plain";
  bool clamp = false;
};

int run_combine(const CombineOpts& opts, const GlobalOpts& g) {
  cct::Method method = cct::parse_method(opts.method);
  if (method == cct::Method::HC || method == cct::Method::BJ) {
    throw cct::config_error(
        "method '" + opts.method +
        "' has no analytic combined p-value; combine supports: CCT, MinP");
  }
  cct::PValueFile file = cct::read_pvalue_file(opts.input);
  std::vector<double> weights = file.weights;
  if (weights.empty() && !opts.weights_path.empty()) {
    weights = cct::read_weights_file(opts.weights_path);
  }
  if (!weights.empty() && weights.size() != file.values.size()) {
    throw cct::data_error("weight count " + std::to_string(weights.size()) +
                          " does not match p-value count " +
                          std::to_string(file.values.size()));
  }
  for (std::size_t i = 0; i < file.values.size(); ++i) {
    double v = file.values[i];
    if (opts.clamp && v >= 0.0 && v <= 1.0) {
      v = std::min(std::max(v, cct::kPvalueFloor), cct::kPvalueCeil);
      file.values[i] = v;
    }
    if (!(v > 0.0 && v < 1.0)) {
      throw cct::data_error("line " + std::to_string(file.lines[i]) +
                            ": p-value must lie strictly in (0,1)");
    }
  }
  cct::PValueVector pv = cct::make_pvalues(file.values, weights);
  cct::CombinedResult result = method == cct::Method::CCT
                                   ? cct::cct_combine(pv)
                                   : cct::minp_combine_independent(pv);
  OutputTarget target(g.out_path);
  std::ostream& out = target.stream();
  if (opts.format == "plain") {
    out << "method: " << result.method << "\n"
        << "d: " << result.d << "\n"
        << "statistic: " << fmt12(result.statistic) << "\n"
        << "p_value: " << fmt12(result.p_value) << "\n";
  } else if (opts.format == "json-lines") {
    out << "{\"method\":\"" << result.method << "\",\"d\":" << result.d
        << ",\"statistic\":" << fmt12(result.statistic)
        << ",\"p_value\":" << fmt12(result.p_value) << "}\n";
  } else if (opts.format == "csv") {
    cct::write_combined_csv(out, result);
  } else {
    throw cct::config_error("unknown format '" + opts.format +
                            "'; valid formats: plain, json-lines, csv");
  }
  target.close();
  return 0;
}

// ---- size-sim ----

int run_size_sim(const std::string& config_path, const GlobalOpts& g) {
  json j = load_config(config_path);
  require_known_keys(
      j, {"model", "d", "rho", "d0", "matrix_csv", "n_samples", "alphas",
          "noise", "nu", "variance_deflation", "weights_mode", "experiment_id"});
  cct::SizeConfig cfg{matrix_from_config(j)};
  cfg.n_samples = get_int(j, "n_samples", 1000000);
  if (j.contains("alphas")) cfg.alphas = get_double_list(j, "alphas");
  std::string noise = get_string(j, "noise", std::string("gaussian"));
  if (noise == "student_t") {
    cfg.noise = cct::NoiseKind::student_t;
    cfg.nu = get_double(j, "nu", 4.0);
  } else if (noise != "gaussian") {
    throw cct::config_error("unknown noise '" + noise +
                            "'; valid: gaussian, student_t");
  }
  cfg.variance_deflation = get_double(j, "variance_deflation", 1.0);
  std::string wm = get_string(j, "weights_mode", std::string("equal"));
  if (wm == "random_dirichlet") {
    cfg.weights_mode = cct::WeightsMode::random_dirichlet;
  } else if (wm != "equal") {
    throw cct::config_error("unknown weights_mode '" + wm +
                            "'; valid: equal, random_dirichlet");
  }
  std::uint64_t exp_id = static_cast<std::uint64_t>(
      get_int(j, "experiment_id", static_cast<long long>(cct::kSizeExperiment)));
  cct::SizeReport report = cct::empirical_size(cfg, g.seed, g.threads, exp_id);
  print_warnings(report.warnings);
  OutputTarget target(g.out_path);
  cct::write_size_csv(target.stream(), report);
  target.close();
  if (!g.svg_path.empty()) cct::svg_size_boxplot(g.svg_path, report);
  return 0;
}

// ---- power-sim ----

std::vector<cct::Method> methods_from_config(const json& j) {
  if (!j.contains("methods")) {
    return {cct::Method::CCT, cct::Method::MinP, cct::Method::HC,
            cct::Method::BJ};
  }
  if (!j.at("methods").is_array()) {
    throw cct::config_error("config key 'methods' must be an array");
  }
  std::vector<cct::Method> out;
  for (const auto& v : j.at("methods")) {
    if (!v.is_string()) {
      throw cct::config_error("config key 'methods' must contain strings");
    }
    out.push_back(cct::parse_method(v.get<std::string>()));
  }
  return out;
}

int run_power_sim(const std::string& config_path, const GlobalOpts& g) {
  json j = load_config(config_path);
  std::string experiment = get_string(j, "experiment", std::string("figure3"));
  if (experiment == "theorem3_trend") {
    require_known_keys(j, {"experiment", "gamma", "r", "d_list", "bandwidth",
                           "alpha", "n_samples", "experiment_id"});
    std::vector<int> d_list;
    for (double v : get_double_list(j, "d_list")) {
      d_list.push_back(static_cast<int>(v));
    }
    cct::PowerReport report = cct::power_trend_theorem3(
        get_double(j, "gamma"), get_double(j, "r"), d_list,
        static_cast<int>(get_int(j, "bandwidth", 3)),
        get_double(j, "alpha", 0.05), get_int(j, "n_samples", 10000), g.seed,
        g.threads,
        static_cast<std::uint64_t>(get_int(
            j, "experiment_id", static_cast<long long>(cct::kTrendExperimentBase))));
    print_warnings(report.warnings);
    OutputTarget target(g.out_path);
    cct::write_trend_csv(target.stream(), report);
    target.close();
    if (!g.svg_path.empty()) cct::svg_power_lines(g.svg_path, report, "d");
    return 0;
  }
  if (experiment != "figure3") {
    throw cct::config_error("unknown experiment '" + experiment +
                            "'; valid: figure3, theorem3_trend");
  }
  require_known_keys(j, {"experiment", "d", "signal_fraction", "rho_grid",
                         "alpha", "n_crit_samples", "n_power_samples",
                         "methods", "signal_strength_rule", "r", "mu0",
                         "experiment_id"});
  cct::PowerConfig cfg;
  cfg.d = static_cast<int>(get_int(j, "d", 20));
  cfg.signal_fraction = get_double(j, "signal_fraction", 0.1);
  cfg.rho_grid = get_double_list(j, "rho_grid");
  cfg.alpha = get_double(j, "alpha", 0.05);
  cfg.n_crit_samples = get_int(j, "n_crit_samples", 10000);
  cfg.n_power_samples = get_int(j, "n_power_samples", 5000);
  cfg.methods = methods_from_config(j);
  std::string rule = get_string(j, "signal_strength_rule",
                                std::string("paper_42"));
  if (rule == "paper_42") {
    cfg.signal_strength_rule = cct::SignalRule::paper_42;
  } else if (rule == "theorem_3") {
    cfg.signal_strength_rule = cct::SignalRule::theorem_3;
    cfg.r = get_double(j, "r");
  } else if (rule == "fixed") {
    cfg.signal_strength_rule = cct::SignalRule::fixed;
    cfg.mu0_fixed = get_double(j, "mu0");
  } else {
    throw cct::config_error("unknown signal_strength_rule '" + rule +
                            "'; valid: paper_42, theorem_3, fixed");
  }
  std::uint64_t exp_base = static_cast<std::uint64_t>(get_int(
      j, "experiment_id", static_cast<long long>(cct::kPowerExperimentBase)));
  cct::PowerReport report = cct::power_grid(cfg, g.seed, g.threads, exp_base);
  print_warnings(report.warnings);
  OutputTarget target(g.out_path);
  cct::write_power_csv(target.stream(), report);
  target.close();
  if (!g.svg_path.empty()) cct::svg_power_lines(g.svg_path, report, "rho");
  return 0;
}

// ---- crit ----

struct CritOpts {
  std::string method = "CCT";
  std::string model;
  std::string matrix_csv;
  int d = 0;
  double rho = 0.0;
  bool has_rho = false;
  int d0 = 3;
  double alpha = 0.05;
  long long n = 100000;
  bool analytic = false;
};

int run_crit(const CritOpts& opts, const GlobalOpts& g) {
  cct::Method method = cct::parse_method(opts.method);
  OutputTarget target(g.out_path);
  std::ostream& out = target.stream();
  if (opts.analytic) {
    if (method != cct::Method::CCT) {
      throw cct::config_error("--analytic is only available for method CCT");
    }
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) {
      throw cct::config_error("alpha must lie in (0, 1)");
    }
    out << "critical_value: " << fmt12(cct::cauchy_upper_quantile(opts.alpha))
        << "\nquantile_se: 0\n";
    target.close();
    return 0;
  }
  std::unique_ptr<cct::CorrelationMatrix> sigma;
  if (!opts.matrix_csv.empty()) {
    sigma = std::make_unique<cct::CorrelationMatrix>(
        cct::load_correlation(opts.matrix_csv));
  } else if (!opts.model.empty()) {
    if (opts.d < 1) throw cct::config_error("crit requires --d with --model");
    std::optional<double> rho;
    if (opts.has_rho) rho = opts.rho;
    sigma = std::make_unique<cct::CorrelationMatrix>(
        matrix_from_model(opts.model, opts.d, rho, opts.d0));
  } else {
    throw cct::config_error("crit requires --model or --matrix");
  }
  cct::CriticalValue cv = cct::critical_value(method, *sigma, opts.alpha,
                                              opts.n, g.seed,
                                              cct::kCritExperimentBase,
                                              g.threads);
  out << "critical_value: " << fmt12(cv.value) << "\nquantile_se: "
      << fmt12(cv.se) << "\n";
  target.close();
  return 0;
}

// ---- gen-corr ----

struct GenCorrOpts {
  std::string model;
  int d = 0;
  double rho = 0.0;
  bool has_rho = false;
  int d0 = 3;
};

int run_gen_corr(const GenCorrOpts& opts, const GlobalOpts& g) {
  if (g.out_path.empty()) {
    throw cct::config_error("gen-corr requires --out <path>");
  }
  std::optional<double> rho;
  if (opts.has_rho) rho = opts.rho;
  cct::CorrelationMatrix sigma =
      matrix_from_model(opts.model, opts.d, rho, opts.d0);
  cct::save_correlation(g.out_path, sigma);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cauchy combination test: p-value aggregation and Monte Carlo studies"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Master seed for all random streams");
  app.add_option("--threads", g.threads,
                 "Worker threads (0 = all cores); never affects results");
  app.add_option("--out", g.out_path, "Output file (default: stdout)");
  app.add_option("--svg", g.svg_path, "Also write an SVG chart to this path");

  CombineOpts combine_opts;
  CLI::App* combine = app.add_subcommand(
      "combine", "Combine a file of p-values into one p-value");
  combine->add_option("input", combine_opts.input, "P-value file (one per line)")
      ->required();
  combine->add_option("--weights", combine_opts.weights_path,
                      "Weights file (one per line)");
  combine->add_option("--method", combine_opts.method,
                      "CCT or MinP (MinP assumes independence)");
  combine->add_option("--format", combine_opts.format,
                      "plain, json-lines, or csv");
  combine->add_flag("--clamp", combine_opts.clamp,
                    "Pull boundary p-values 0 and 1 into the open interval");

  std::string size_config;
  CLI::App* size_sim = app.add_subcommand(
      "size-sim", "Empirical size of the analytic CCT p-value (CSV report)");
  size_sim->add_option("config", size_config, "JSON experiment config")
      ->required();

  std::string power_config;
  CLI::App* power_sim = app.add_subcommand(
      "power-sim", "Power comparison across methods (CSV report)");
  power_sim->add_option("config", power_config, "JSON experiment config")
      ->required();

  CritOpts crit_opts;
  CLI::App* crit = app.add_subcommand(
      "crit", "Simulated critical value of a method's null statistic");
  crit->add_option("--method", crit_opts.method, "CCT, MinP, HC, or BJ");
  crit->add_option("--model", crit_opts.model,
                   "ar1, polydecay, singular, exchangeable, or banded");
  crit->add_option("--matrix", crit_opts.matrix_csv, "Correlation matrix CSV");
  crit->add_option("--d", crit_opts.d, "Dimension for --model");
  crit->add_option("--rho", crit_opts.rho, "Model correlation parameter");
  crit->add_option("--d0", crit_opts.d0, "Bandwidth for the banded model");
  crit->add_option("--alpha", crit_opts.alpha, "Significance level")->required();
  crit->add_option("--n", crit_opts.n, "Null replicates (default 100000)");
  crit->add_flag("--analytic", crit_opts.analytic,
                 "Closed-form Cauchy quantile (CCT only, no simulation)");

  GenCorrOpts gen_opts;
  CLI::App* gen_corr = app.add_subcommand(
      "gen-corr", "Write a model correlation matrix as CSV (--out required)");
  gen_corr->add_option("--model", gen_opts.model,
                       "ar1, polydecay, singular, exchangeable, or banded")
      ->required();
  gen_corr->add_option("--d", gen_opts.d, "Dimension")->required();
  gen_corr->add_option("--rho", gen_opts.rho, "Model correlation parameter");
  gen_corr->add_option("--d0", gen_opts.d0, "Bandwidth for the banded model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  crit_opts.has_rho = crit->count("--rho") > 0;
  gen_opts.has_rho = gen_corr->count("--rho") > 0;

  try {
    if (*combine) return run_combine(combine_opts, g);
    if (*size_sim) return run_size_sim(size_config, g);
    if (*power_sim) return run_power_sim(power_config, g);
    if (*crit) return run_crit(crit_opts, g);
    if (*gen_corr) return run_gen_corr(gen_opts, g);
  } catch (const cct::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cct::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
