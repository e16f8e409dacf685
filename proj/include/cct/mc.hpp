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

#ifndef CCT_MC_HPP_
#define CCT_MC_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cct/corr.hpp"
#include "cct/errors.hpp"
#include "cct/philox.hpp"
#include "cct/sampling.hpp"
#include "cct/special.hpp"
#include "cct/stats.hpp"

// Reproducibility contract. Every replicate draws from the stream
// (master_seed, experiment_id, replicate_index) in a fixed order:
//   1. signal positions (alternative draws with random placement only)
//   2. z normals feeding the factor
//   3. the chi-square denominator (Student-t noise only)
//   4. Dirichlet weights (random-weights mode only)
// Workers claim fixed-size replicate blocks and write integer counts or
// per-replicate slots; reduction never depends on scheduling, so reports
// are bit-identical for any thread count.

namespace cct {

enum class Method { CCT, MinP, HC, BJ };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::CCT: return "CCT";
    case Method::MinP: return "MinP";
    case Method::HC: return "HC";
    case Method::BJ: return "BJ";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  std::string lower(s);
  for (char& c : lower) c = static_cast<char>(std::tolower(c));
  if (lower == "cct") return Method::CCT;
  if (lower == "minp") return Method::MinP;
  if (lower == "hc") return Method::HC;
  if (lower == "bj") return Method::BJ;
  throw config_error("unknown method '" + s +
                     "'; valid methods: CCT, MinP, HC, BJ");
}

// Default experiment identifiers. Phases of one run must use distinct ids
// so their streams never overlap; grid experiments offset from these bases.
inline constexpr std::uint64_t kSizeExperiment = 1;
inline constexpr std::uint64_t kCritExperimentBase = 1000;
inline constexpr std::uint64_t kPowerExperimentBase = 2000;
inline constexpr std::uint64_t kTrendExperimentBase = 3000;
inline constexpr std::uint64_t kOracleExperiment = 4000;

enum class NoiseKind { gaussian, student_t };
enum class WeightsMode { equal, random_dirichlet };
enum class SignalRule { paper_42, theorem_3, fixed };

namespace detail {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested > 256 ? 256 : requested;
  unsigned hc = std::thread::hardware_concurrency();
  if (hc == 0) return 1;
  return hc > 256 ? 256 : static_cast<int>(hc);
}

inline constexpr long long kBlockSize = 8192;

// Runs fn(block_index, begin, end) over [0, n) split into fixed blocks.
template <typename Fn>
void run_blocks(long long n, int threads, Fn&& fn) {
  long long nblocks = (n + kBlockSize - 1) / kBlockSize;
  int nt = resolve_threads(threads);
  if (nt > nblocks) nt = static_cast<int>(nblocks);
  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&]() {
    try {
      for (;;) {
        long long b = next.fetch_add(1, std::memory_order_relaxed);
        if (b >= nblocks || failed.load(std::memory_order_relaxed)) return;
        long long begin = b * kBlockSize;
        long long end = begin + kBlockSize < n ? begin + kBlockSize : n;
        fn(b, begin, end);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

// Per-worker scratch buffers.
struct StatWork {
  std::vector<double> z;
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> sorted;
  std::vector<double> w;
  std::vector<std::uint32_t> idx;
};

inline void zscores_to_pvalues_inplace(const std::vector<double>& x,
                                       NoiseKind noise, double nu,
                                       std::vector<double>* p) {
  p->resize(x.size());
  if (noise == NoiseKind::gaussian) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      (*p)[i] = std::min(std::max(normal_sf2(x[i]), 1e-300), kPvalueCeil);
    }
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) {
      (*p)[i] = std::min(std::max(student_t_sf2(x[i], nu), 1e-300), kPvalueCeil);
    }
  }
}

inline double cct_evidence_equal(const std::vector<double>& p) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : p) sum = neumaier_add(sum, cauchy_transform(v), &comp);
  return (sum + comp) / static_cast<double>(p.size());
}

inline double cct_evidence_weighted(const std::vector<double>& p,
                                    const std::vector<double>& w) {
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum = neumaier_add(sum, w[i] * cauchy_transform(p[i]), &comp);
  }
  return sum + comp;
}

// Evidence scale: larger means more significant for every method. MinP uses
// the negated minimum so this holds uniformly.
inline void evidence_for(const std::vector<Method>& methods, StatWork* work,
                         double* out) {
  bool need_sorted = false;
  for (Method m : methods) {
    if (m == Method::HC || m == Method::BJ) need_sorted = true;
  }
  if (need_sorted) {
    work->sorted = work->p;
    std::sort(work->sorted.begin(), work->sorted.end());
  }
  for (std::size_t k = 0; k < methods.size(); ++k) {
    switch (methods[k]) {
      case Method::CCT:
        out[k] = cct_evidence_equal(work->p);
        break;
      case Method::MinP: {
        double m = work->p[0];
        for (double v : work->p) m = v < m ? v : m;
        out[k] = -m;
        break;
      }
      case Method::HC:
        out[k] = hc_sorted(work->sorted.data(), work->sorted.size());
        break;
      case Method::BJ:
        out[k] = bj_sorted(work->sorted.data(), work->sorted.size());
        break;
    }
  }
}

// Upper-alpha empirical quantile: order statistic ceil((1-alpha)n), the
// higher value on ties. The 1e-8 backoff keeps exact-integer targets from
// rounding up one index in floating point. The reported spread-based SE
// uses order statistics one binomial deviation away.
inline double upper_quantile_sorted(const std::vector<double>& v, double alpha,
                                    double* se) {
  long long n = static_cast<long long>(v.size());
  double target = (1.0 - alpha) * static_cast<double>(n);
  long long k = static_cast<long long>(std::ceil(target - 1e-8));
  if (k < 1) k = 1;
  if (k > n) k = n;
  if (se != nullptr) {
    long long delta = static_cast<long long>(
        std::llround(std::sqrt(static_cast<double>(n) * alpha * (1.0 - alpha))));
    if (delta < 1) delta = 1;
    long long lo = k - 1 - delta;
    long long hi = k - 1 + delta;
    if (lo < 0) lo = 0;
    if (hi > n - 1) hi = n - 1;
    *se = 0.5 * (v[hi] - v[lo]);
  }
  return v[k - 1];
}

}  // namespace detail

// Configuration for an empirical size study.
struct SizeConfig {
  CorrelationMatrix sigma;
  long long n_samples = 1000000;
  std::vector<double> alphas{1e-1, 1e-2, 1e-3};
  NoiseKind noise = NoiseKind::gaussian;
  double nu = 4.0;
  double variance_deflation = 1.0;
  WeightsMode weights_mode = WeightsMode::equal;
};

struct SizeRow {
  double alpha = 0.0;
  double empirical_size = 0.0;
  double ratio = 0.0;
  double mc_se = 0.0;  // binomial SE of the ratio
};

struct SizeReport {
  std::vector<SizeRow> rows;
  long long n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

inline std::vector<std::string> validate_size_config(const SizeConfig& cfg) {
  if (cfg.n_samples < 1) throw config_error("n_samples must be positive");
  if (cfg.alphas.empty()) throw config_error("alphas must be non-empty");
  double amin = 1.0;
  for (double a : cfg.alphas) {
    if (!(a > 0.0 && a < 0.5)) {
      throw config_error("significance levels must lie in (0, 0.5)");
    }
    amin = a < amin ? a : amin;
  }
  if (!(cfg.variance_deflation > 0.0 && cfg.variance_deflation <= 1.0)) {
    throw config_error("variance_deflation must lie in (0, 1]");
  }
  if (cfg.noise == NoiseKind::student_t && !(cfg.nu >= 1.0)) {
    throw config_error("Student-t degrees of freedom must be at least 1");
  }
  std::vector<std::string> warnings;
  if (static_cast<double>(cfg.n_samples) * amin < 100.0) {
    warnings.push_back(
        "n_samples * min(alpha) is below 100; the tail estimate is unstable");
  }
  return warnings;
}

// Empirical size of the analytic CCT p-value under the null.
inline SizeReport empirical_size(const SizeConfig& cfg,
                                 std::uint64_t master_seed, int threads = 0,
                                 std::uint64_t experiment_id = kSizeExperiment) {
  SizeReport report;
  report.warnings = validate_size_config(cfg);
  report.n_samples = cfg.n_samples;
  report.seed = master_seed;
  SamplerFactor f = factorize(cfg.sigma);
  int d = f.dim;
  std::size_t na = cfg.alphas.size();
  long long n = cfg.n_samples;
  long long nblocks = (n + detail::kBlockSize - 1) / detail::kBlockSize;
  std::vector<long long> counts(static_cast<std::size_t>(nblocks) * na, 0);
  double scale = std::sqrt(cfg.variance_deflation);
  bool student = cfg.noise == NoiseKind::student_t;
  bool dirichlet = cfg.weights_mode == WeightsMode::random_dirichlet;
  detail::run_blocks(n, threads, [&](long long b, long long begin, long long end) {
    detail::StatWork work;
    work.x.resize(d);
    long long* slot = counts.data() + static_cast<std::size_t>(b) * na;
    for (long long rep = begin; rep < end; ++rep) {
      Sampler sampler(RngStream{master_seed, experiment_id,
                                static_cast<std::uint64_t>(rep)});
      work.z.resize(f.rank);
      for (int i = 0; i < f.rank; ++i) work.z[i] = sampler.normal();
      f.apply(work.z.data(), work.x.data());
      if (student) {
        double denom = std::sqrt(sampler.chi_square(cfg.nu) / cfg.nu);
        for (int i = 0; i < d; ++i) work.x[i] /= denom;
      }
      if (scale != 1.0) {
        for (int i = 0; i < d; ++i) work.x[i] *= scale;
      }
      detail::zscores_to_pvalues_inplace(work.x, cfg.noise, cfg.nu, &work.p);
      double t;
      if (dirichlet) {
        work.w.resize(d);
        sampler.dirichlet_uniform(d, work.w.data());
        t = detail::cct_evidence_weighted(work.p, work.w);
      } else {
        t = detail::cct_evidence_equal(work.p);
      }
      double pc = cct_pvalue(t);
      for (std::size_t a = 0; a < na; ++a) {
        if (pc <= cfg.alphas[a]) ++slot[a];
      }
    }
  });
  for (std::size_t a = 0; a < na; ++a) {
    long long total = 0;
    for (long long b = 0; b < nblocks; ++b) {
      total += counts[static_cast<std::size_t>(b) * na + a];
    }
    double alpha = cfg.alphas[a];
    SizeRow row;
    row.alpha = alpha;
    row.empirical_size = static_cast<double>(total) / static_cast<double>(n);
    row.ratio = row.empirical_size / alpha;
    row.mc_se = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(n)) / alpha;
    report.rows.push_back(row);
  }
  return report;
}

namespace detail {

// Simulates null evidence for each requested method; out[m][rep].
inline void simulate_null_evidence(const SamplerFactor& f,
                                   const std::vector<Method>& methods,
                                   long long n, std::uint64_t master_seed,
                                   std::uint64_t experiment_id, int threads,
                                   std::vector<std::vector<double>>* out) {
  out->assign(methods.size(), std::vector<double>(n));
  int d = f.dim;
  run_blocks(n, threads, [&](long long, long long begin, long long end) {
    StatWork work;
    work.x.resize(d);
    std::vector<double> ev(methods.size());
    for (long long rep = begin; rep < end; ++rep) {
      Sampler sampler(RngStream{master_seed, experiment_id,
                                static_cast<std::uint64_t>(rep)});
      work.z.resize(f.rank);
      for (int i = 0; i < f.rank; ++i) work.z[i] = sampler.normal();
      f.apply(work.z.data(), work.x.data());
      zscores_to_pvalues_inplace(work.x, NoiseKind::gaussian, 0.0, &work.p);
      evidence_for(methods, &work, ev.data());
      for (std::size_t m = 0; m < methods.size(); ++m) {
        (*out)[m][rep] = ev[m];
      }
    }
  });
}

}  // namespace detail

struct CriticalValue {
  double value = 0.0;  // conventional scale: a p-value threshold for MinP
  double se = 0.0;
};

// Simulated upper-alpha critical value of a method's null statistic.
inline CriticalValue critical_value(Method method,
                                    const CorrelationMatrix& sigma,
                                    double alpha, long long n_samples,
                                    std::uint64_t master_seed,
                                    std::uint64_t experiment_id = kCritExperimentBase,
                                    int threads = 0) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw config_error("alpha must lie in (0, 1)");
  }
  if (static_cast<double>(n_samples) * alpha < 50.0) {
    throw config_error(
        "critical_value needs n_samples * alpha >= 50 for a stable quantile");
  }
  SamplerFactor f = factorize(sigma);
  std::vector<std::vector<double>> ev;
  detail::simulate_null_evidence(f, {method}, n_samples, master_seed,
                                 experiment_id, threads, &ev);
  std::sort(ev[0].begin(), ev[0].end());
  CriticalValue cv;
  cv.value = detail::upper_quantile_sorted(ev[0], alpha, &cv.se);
  if (method == Method::MinP) cv.value = -cv.value;
  return cv;
}

// Configuration for the power comparison over a correlation grid.
struct PowerConfig {
  int d = 20;
  double signal_fraction = 0.1;
  std::vector<double> rho_grid;
  double alpha = 0.05;
  long long n_crit_samples = 10000;
  long long n_power_samples = 5000;
  std::vector<Method> methods{Method::CCT, Method::MinP, Method::HC,
                              Method::BJ};
  SignalRule signal_strength_rule = SignalRule::paper_42;
  double r = 1.2;          // theorem_3 rule parameter
  double mu0_fixed = 0.0;  // fixed rule value
};

struct PowerRow {
  double x = 0.0;  // rho for grids, d for the trend experiment
  Method method = Method::CCT;
  double power = 0.0;
  double mc_se = 0.0;
  double critical_value = 0.0;  // conventional scale
};

struct PowerReport {
  std::vector<PowerRow> rows;
  long long n_crit_samples = 0;
  long long n_power_samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

inline int signal_count(double fraction, int d) {
  long long s = std::llround(fraction * static_cast<double>(d));
  if (s < 1) s = 1;
  if (s > d) s = d;
  return static_cast<int>(s);
}

inline double signal_strength(SignalRule rule, int d, int s, double r,
                              double mu0_fixed) {
  switch (rule) {
    case SignalRule::paper_42:
      return std::sqrt(3.0 * std::log(static_cast<double>(d))) /
             std::cbrt(static_cast<double>(s));
    case SignalRule::theorem_3:
      return std::sqrt(2.0 * r * std::log(static_cast<double>(d)));
    case SignalRule::fixed:
      return mu0_fixed;
  }
  return 0.0;
}

inline std::vector<std::string> validate_power_config(const PowerConfig& cfg) {
  if (cfg.d < 1) throw config_error("d must be positive");
  if (!(cfg.signal_fraction > 0.0 && cfg.signal_fraction < 1.0)) {
    throw config_error("signal_fraction must lie in (0, 1)");
  }
  if (cfg.rho_grid.empty()) throw config_error("rho_grid must be non-empty");
  for (double rho : cfg.rho_grid) {
    if (!(rho >= 0.0 && rho < 1.0)) {
      throw config_error("exchangeable rho must lie in [0, 1)");
    }
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw config_error("alpha must lie in (0, 1)");
  }
  if (cfg.n_power_samples < 1) throw config_error("n_power_samples must be positive");
  if (cfg.methods.empty()) throw config_error("methods must be non-empty");
  if (static_cast<double>(cfg.n_crit_samples) * cfg.alpha < 50.0) {
    throw config_error(
        "critical_value needs n_samples * alpha >= 50 for a stable quantile");
  }
  if (cfg.signal_strength_rule == SignalRule::fixed && cfg.mu0_fixed < 0.0) {
    throw config_error("fixed signal strength must be nonnegative");
  }
  return {};
}

// Power of each method over the exchangeable-correlation grid. Critical
// values are simulated per grid point; alternative draws share streams
// across methods (common random numbers). Signal positions re-randomize
// per replicate.
inline PowerReport power_grid(const PowerConfig& cfg, std::uint64_t master_seed,
                              int threads = 0,
                              std::uint64_t experiment_base = kPowerExperimentBase) {
  PowerReport report;
  report.warnings = validate_power_config(cfg);
  report.n_crit_samples = cfg.n_crit_samples;
  report.n_power_samples = cfg.n_power_samples;
  report.seed = master_seed;
  int d = cfg.d;
  int s = signal_count(cfg.signal_fraction, d);
  double mu0 = signal_strength(cfg.signal_strength_rule, d, s, cfg.r,
                               cfg.mu0_fixed);
  std::size_t nm = cfg.methods.size();
  for (std::size_t g = 0; g < cfg.rho_grid.size(); ++g) {
    double rho = cfg.rho_grid[g];
    CorrelationMatrix sigma = exchangeable_correlation(d, rho);
    SamplerFactor f = factorize(sigma);
    std::uint64_t crit_id = experiment_base + 2 * g;
    std::uint64_t alt_id = experiment_base + 2 * g + 1;
    std::vector<std::vector<double>> ev;
    detail::simulate_null_evidence(f, cfg.methods, cfg.n_crit_samples,
                                   master_seed, crit_id, threads, &ev);
    std::vector<double> crit(nm);
    for (std::size_t m = 0; m < nm; ++m) {
      std::sort(ev[m].begin(), ev[m].end());
      crit[m] = detail::upper_quantile_sorted(ev[m], cfg.alpha, nullptr);
    }
    long long n = cfg.n_power_samples;
    long long nblocks = (n + detail::kBlockSize - 1) / detail::kBlockSize;
    std::vector<long long> counts(static_cast<std::size_t>(nblocks) * nm, 0);
    detail::run_blocks(n, threads, [&](long long b, long long begin,
                                       long long end) {
      detail::StatWork work;
      work.x.resize(d);
      std::vector<double> evr(nm);
      long long* slot = counts.data() + static_cast<std::size_t>(b) * nm;
      for (long long rep = begin; rep < end; ++rep) {
        Sampler sampler(RngStream{master_seed, alt_id,
                                  static_cast<std::uint64_t>(rep)});
        sampler.sample_indices(d, s, &work.idx);
        work.z.resize(f.rank);
        for (int i = 0; i < f.rank; ++i) work.z[i] = sampler.normal();
        f.apply(work.z.data(), work.x.data());
        for (std::uint32_t pos : work.idx) work.x[pos] += mu0;
        detail::zscores_to_pvalues_inplace(work.x, NoiseKind::gaussian, 0.0,
                                           &work.p);
        detail::evidence_for(cfg.methods, &work, evr.data());
        for (std::size_t m = 0; m < nm; ++m) {
          if (evr[m] > crit[m]) ++slot[m];
        }
      }
    });
    for (std::size_t m = 0; m < nm; ++m) {
      long long total = 0;
      for (long long b = 0; b < nblocks; ++b) {
        total += counts[static_cast<std::size_t>(b) * nm + m];
      }
      PowerRow row;
      row.x = rho;
      row.method = cfg.methods[m];
      row.power = static_cast<double>(total) / static_cast<double>(n);
      row.mc_se = std::sqrt(row.power * (1.0 - row.power) /
                            static_cast<double>(n));
      row.critical_value =
          cfg.methods[m] == Method::MinP ? -crit[m] : crit[m];
      report.rows.push_back(row);
    }
  }
  return report;
}

// CCT power along increasing dimension under banded dependence:
// s = ceil(d^gamma) signals of strength sqrt(2 r log d) in the leading
// block, Sigma = banded AR(1) with rho = 0.5, analytic critical value.
// Power converges to 1 when r clears the detection boundary.
inline PowerReport power_trend_theorem3(double gamma, double r,
                                        const std::vector<int>& d_list,
                                        int bandwidth, double alpha,
                                        long long n_samples,
                                        std::uint64_t master_seed,
                                        int threads = 0,
                                        std::uint64_t experiment_base = kTrendExperimentBase) {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw config_error("gamma must lie in (0, 1/2)");
  }
  if (d_list.empty()) throw config_error("d_list must be non-empty");
  for (int d : d_list) {
    if (d < 1) throw config_error("dimensions must be positive");
  }
  if (bandwidth < 1) throw config_error("bandwidth must be positive");
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw config_error("significance levels must lie in (0, 0.5)");
  }
  if (n_samples < 1) throw config_error("n_samples must be positive");
  PowerReport report;
  report.n_crit_samples = 0;
  report.n_power_samples = n_samples;
  report.seed = master_seed;
  double boundary = (1.0 - std::sqrt(gamma)) * (1.0 - std::sqrt(gamma));
  if (r <= boundary) {
    report.warnings.push_back(
        "r is at or below the detection boundary (1 - sqrt(gamma))^2; "
        "the theorem's power guarantee does not apply");
  }
  double crit = cauchy_upper_quantile(alpha);
  for (std::size_t k = 0; k < d_list.size(); ++k) {
    int d = d_list[k];
    int s = static_cast<int>(std::ceil(std::pow(static_cast<double>(d), gamma)));
    if (s > d) s = d;
    double mu0 = std::sqrt(2.0 * r * std::log(static_cast<double>(d)));
    SamplerFactor f = factorize(banded_from_ar1(d, 0.5, bandwidth));
    long long n = n_samples;
    long long nblocks = (n + detail::kBlockSize - 1) / detail::kBlockSize;
    std::vector<long long> counts(nblocks, 0);
    std::uint64_t exp_id = experiment_base + k;
    detail::run_blocks(n, threads, [&](long long b, long long begin,
                                       long long end) {
      detail::StatWork work;
      work.x.resize(d);
      for (long long rep = begin; rep < end; ++rep) {
        Sampler sampler(RngStream{master_seed, exp_id,
                                  static_cast<std::uint64_t>(rep)});
        work.z.resize(f.rank);
        for (int i = 0; i < f.rank; ++i) work.z[i] = sampler.normal();
        f.apply(work.z.data(), work.x.data());
        for (int i = 0; i < s; ++i) work.x[i] += mu0;
        detail::zscores_to_pvalues_inplace(work.x, NoiseKind::gaussian, 0.0,
                                           &work.p);
        if (detail::cct_evidence_equal(work.p) > crit) ++counts[b];
      }
    });
    long long total = 0;
    for (long long c : counts) total += c;
    PowerRow row;
    row.x = static_cast<double>(d);
    row.method = Method::CCT;
    row.power = static_cast<double>(total) / static_cast<double>(n);
    row.mc_se =
        std::sqrt(row.power * (1.0 - row.power) / static_cast<double>(n));
    row.critical_value = crit;
    report.rows.push_back(row);
  }
  return report;
}

struct OracleEstimate {
  double p = 0.0;
  double se = 0.0;
};

// Brute-force null tail probability P(statistic >= observed) under Sigma.
// `observed` uses the conventional scale (a p-value threshold for MinP).
inline OracleEstimate mc_pvalue_oracle(Method method,
                                       const CorrelationMatrix& sigma,
                                       double observed, long long n_samples,
                                       std::uint64_t master_seed,
                                       std::uint64_t experiment_id = kOracleExperiment,
                                       int threads = 0) {
  if (n_samples < 10000) {
    throw config_error("mc_pvalue_oracle needs n_samples >= 10000");
  }
  SamplerFactor f = factorize(sigma);
  double observed_ev = method == Method::MinP ? -observed : observed;
  int d = f.dim;
  long long n = n_samples;
  long long nblocks = (n + detail::kBlockSize - 1) / detail::kBlockSize;
  std::vector<long long> counts(nblocks, 0);
  std::vector<Method> methods{method};
  detail::run_blocks(n, threads, [&](long long b, long long begin,
                                     long long end) {
    detail::StatWork work;
    work.x.resize(d);
    double ev = 0.0;
    for (long long rep = begin; rep < end; ++rep) {
      Sampler sampler(RngStream{master_seed, experiment_id,
                                static_cast<std::uint64_t>(rep)});
      work.z.resize(f.rank);
      for (int i = 0; i < f.rank; ++i) work.z[i] = sampler.normal();
      f.apply(work.z.data(), work.x.data());
      detail::zscores_to_pvalues_inplace(work.x, NoiseKind::gaussian, 0.0,
                                         &work.p);
      detail::evidence_for(methods, &work, &ev);
      if (ev >= observed_ev) ++counts[b];
    }
  });
  long long total = 0;
  for (long long c : counts) total += c;
  OracleEstimate est;
  est.p = static_cast<double>(total) / static_cast<double>(n);
  est.se = std::sqrt(est.p * (1.0 - est.p) / static_cast<double>(n));
  return est;
}

}  // namespace cct

#endif  // CCT_MC_HPP_
