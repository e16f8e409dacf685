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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cct/mc.hpp"

using namespace cct;

namespace {

const SizeRow& row_at(const SizeReport& report, double alpha) {
  for (const SizeRow& row : report.rows) {
    if (row.alpha == alpha) return row;
  }
  REQUIRE(false);
  return report.rows.front();
}

const PowerRow& power_at(const PowerReport& report, double x, Method m) {
  for (const PowerRow& row : report.rows) {
    if (row.x == x && row.method == m) return row;
  }
  REQUIRE(false);
  return report.rows.front();
}

}  // namespace

TEST_CASE("method names parse both ways") {
  CHECK(parse_method("CCT") == Method::CCT);
  CHECK(parse_method("minp") == Method::MinP);
  CHECK(parse_method("Hc") == Method::HC);
  CHECK(parse_method("BJ") == Method::BJ);
  CHECK(std::string(method_name(Method::MinP)) == "MinP");
  CHECK_THROWS_WITH_AS(parse_method("fisher"),
                       "unknown method 'fisher'; valid methods: CCT, MinP, "
                       "HC, BJ",
                       config_error);
}

TEST_CASE("upper quantile order statistic") {
  std::vector<double> v(1000);
  for (int i = 0; i < 1000; ++i) v[i] = static_cast<double>(i + 1);
  double se = 0.0;
  CHECK(detail::upper_quantile_sorted(v, 0.05, &se) == 950.0);
  CHECK(se > 0.0);
  CHECK(detail::upper_quantile_sorted(v, 0.5, nullptr) == 500.0);

  // (1 - alpha) * n landing on an exact integer must not round upward.
  std::vector<double> w(20);
  for (int i = 0; i < 20; ++i) w[i] = static_cast<double>(i + 1);
  CHECK(detail::upper_quantile_sorted(w, 0.05, nullptr) == 19.0);

  // Ties resolve to the higher order statistic by construction.
  std::vector<double> t{1, 1, 1, 1, 2, 2, 2, 2, 2, 2};
  CHECK(detail::upper_quantile_sorted(t, 0.5, nullptr) == 2.0);
}

TEST_CASE("size config validation") {
  SizeConfig cfg{exchangeable_correlation(3, 0.0)};
  CHECK(validate_size_config(cfg).empty());

  cfg.alphas = {0.5};
  CHECK_THROWS_AS(validate_size_config(cfg), config_error);
  cfg.alphas = {0.0};
  CHECK_THROWS_AS(validate_size_config(cfg), config_error);
  cfg.alphas = {};
  CHECK_THROWS_AS(validate_size_config(cfg), config_error);

  cfg.alphas = {1e-3};
  cfg.n_samples = 50000;
  std::vector<std::string> warnings = validate_size_config(cfg);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("below 100") != std::string::npos);

  cfg.n_samples = 0;
  CHECK_THROWS_AS(validate_size_config(cfg), config_error);
  cfg.n_samples = 1000000;

  cfg.variance_deflation = 0.0;
  CHECK_THROWS_AS(validate_size_config(cfg), config_error);
  cfg.variance_deflation = 1.5;
  CHECK_THROWS_AS(validate_size_config(cfg), config_error);
  cfg.variance_deflation = 1.0;

  cfg.noise = NoiseKind::student_t;
  cfg.nu = 0.5;
  CHECK_THROWS_AS(validate_size_config(cfg), config_error);
}

TEST_CASE("size is exactly uniform for a single independent p-value") {
  SizeConfig cfg{exchangeable_correlation(1, 0.0)};
  cfg.n_samples = 1000000;
  cfg.alphas = {1e-2};
  SizeReport report = empirical_size(cfg, 20260825);
  const SizeRow& row = row_at(report, 1e-2);
  CHECK(row.ratio > 0.97);
  CHECK(row.ratio < 1.03);
  CHECK(row.empirical_size >= 0.0);
  CHECK(row.empirical_size <= 1.0);
  CHECK(row.ratio == row.empirical_size / row.alpha);
  CHECK(report.n_samples == 1000000);
  CHECK(report.seed == 20260825);
}

TEST_CASE("size ratio near one for the dependent reference case") {
  SizeConfig cfg{ar1_correlation(20, 0.4)};
  cfg.n_samples = 1000000;
  cfg.alphas = {1e-3};
  SizeReport report = empirical_size(cfg, 11);
  const SizeRow& row = row_at(report, 1e-3);
  CHECK(row.ratio > 0.8);
  CHECK(row.ratio < 1.2);
}

TEST_CASE("variance deflation keeps the test conservative") {
  SizeConfig cfg{exchangeable_correlation(10, 0.0)};
  cfg.n_samples = 1000000;
  cfg.alphas = {1e-3};
  cfg.variance_deflation = 0.8;
  SizeReport report = empirical_size(cfg, 12);
  const SizeRow& row = row_at(report, 1e-3);
  CHECK(row.ratio <= 1.0 + 3.0 * row.mc_se);
}

TEST_CASE("random Dirichlet weights keep the size ratio in band") {
  SizeConfig cfg{ar1_correlation(20, 0.4)};
  cfg.n_samples = 1000000;
  cfg.alphas = {1e-3};
  cfg.weights_mode = WeightsMode::random_dirichlet;
  SizeReport report = empirical_size(cfg, 13);
  const SizeRow& row = row_at(report, 1e-3);
  CHECK(row.ratio > 0.7);
  CHECK(row.ratio < 1.3);
}

TEST_CASE("tail accuracy improves from alpha 0.1 to alpha 0.001") {
  SizeConfig cfg{ar1_correlation(20, 0.6)};
  cfg.n_samples = 1000000;
  cfg.alphas = {1e-1, 1e-3};
  SizeReport report = empirical_size(cfg, 14);
  const SizeRow& coarse = row_at(report, 1e-1);
  const SizeRow& fine = row_at(report, 1e-3);
  double combined_se = fine.mc_se + coarse.mc_se;
  CHECK(std::fabs(fine.ratio - 1.0) <=
        std::fabs(coarse.ratio - 1.0) + 2.0 * combined_se);
}

TEST_CASE("Student-t noise with matched conversion holds its size") {
  SizeConfig cfg{ar1_correlation(5, 0.2)};
  cfg.n_samples = 200000;
  cfg.alphas = {1e-2};
  cfg.noise = NoiseKind::student_t;
  cfg.nu = 4.0;
  SizeReport report = empirical_size(cfg, 15);
  const SizeRow& row = row_at(report, 1e-2);
  CHECK(row.ratio > 0.8);
  CHECK(row.ratio < 1.2);
}

TEST_CASE("size reports are independent of the thread count") {
  SizeConfig cfg{ar1_correlation(10, 0.6)};
  cfg.n_samples = 200000;
  cfg.alphas = {1e-1, 1e-2};
  SizeReport one = empirical_size(cfg, 16, 1);
  SizeReport three = empirical_size(cfg, 16, 3);
  REQUIRE(one.rows.size() == three.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].empirical_size == three.rows[i].empirical_size);
    CHECK(one.rows[i].ratio == three.rows[i].ratio);
  }
}

TEST_CASE("simulated CCT critical value matches the Cauchy quantile") {
  CriticalValue cv = critical_value(Method::CCT,
                                    exchangeable_correlation(5, 0.0), 0.05,
                                    100000, 17);
  CHECK(cv.se > 0.0);
  CHECK(std::fabs(cv.value - 6.3137515146750430990) <= 3.0 * cv.se);
}

TEST_CASE("simulated MinP critical value matches the closed-form inverse") {
  CriticalValue cv = critical_value(Method::MinP,
                                    exchangeable_correlation(10, 0.0), 0.05,
                                    100000, 18);
  // Conventional scale: a p-value threshold c with 1 - (1-c)^10 = 0.05.
  CHECK(std::fabs(cv.value - 0.0051161968918237011) <= 3.0 * cv.se);
  CHECK(cv.value > 0.0);
}

TEST_CASE("critical value at alpha one half sits at the Cauchy median") {
  CriticalValue cv = critical_value(Method::CCT,
                                    exchangeable_correlation(3, 0.0), 0.5,
                                    20000, 19);
  CHECK(std::fabs(cv.value) <= 3.0 * cv.se);
}

TEST_CASE("critical value preconditions") {
  CorrelationMatrix id = exchangeable_correlation(3, 0.0);
  CHECK_THROWS_AS(critical_value(Method::CCT, id, 0.001, 1000, 0),
                  config_error);  // n * alpha = 1 < 50
  CHECK_THROWS_AS(critical_value(Method::CCT, id, 0.0, 100000, 0),
                  config_error);
  CHECK_THROWS_AS(critical_value(Method::CCT, id, 1.0, 100000, 0),
                  config_error);
}

TEST_CASE("signal helpers") {
  CHECK(signal_count(0.05, 20) == 1);
  CHECK(signal_count(0.10, 20) == 2);
  CHECK(signal_count(0.20, 20) == 4);
  CHECK(signal_count(0.01, 20) == 1);  // floor at one signal
  CHECK(signal_count(0.5, 3) == 2);

  CHECK(signal_strength(SignalRule::paper_42, 20, 2, 0.0, 0.0) ==
        doctest::Approx(2.3794073268253482384).epsilon(1e-14));
  CHECK(signal_strength(SignalRule::paper_42, 20, 4, 0.0, 0.0) ==
        doctest::Approx(1.8885368468316996056).epsilon(1e-14));
  CHECK(signal_strength(SignalRule::theorem_3, 20, 2, 1.2, 0.0) ==
        doctest::Approx(std::sqrt(2.4 * std::log(20.0))).epsilon(1e-14));
  CHECK(signal_strength(SignalRule::fixed, 20, 2, 0.0, 1.75) == 1.75);
}

TEST_CASE("power config validation") {
  PowerConfig cfg;
  cfg.rho_grid = {0.0, 0.2};
  CHECK(validate_power_config(cfg).empty());

  PowerConfig bad = cfg;
  bad.signal_fraction = 0.0;
  CHECK_THROWS_AS(validate_power_config(bad), config_error);
  bad = cfg;
  bad.rho_grid = {1.0};
  CHECK_THROWS_AS(validate_power_config(bad), config_error);
  bad = cfg;
  bad.rho_grid.clear();
  CHECK_THROWS_AS(validate_power_config(bad), config_error);
  bad = cfg;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(validate_power_config(bad), config_error);
  bad = cfg;
  bad.methods.clear();
  CHECK_THROWS_AS(validate_power_config(bad), config_error);
  bad = cfg;
  bad.n_crit_samples = 100;  // 100 * 0.05 = 5 < 50
  CHECK_THROWS_AS(validate_power_config(bad), config_error);
}

TEST_CASE("power equals size when the signal strength is zero") {
  PowerConfig cfg;
  cfg.d = 10;
  cfg.signal_fraction = 0.2;
  cfg.rho_grid = {0.4};
  cfg.alpha = 0.05;
  cfg.n_crit_samples = 5000;
  cfg.n_power_samples = 5000;
  cfg.signal_strength_rule = SignalRule::fixed;
  cfg.mu0_fixed = 0.0;
  PowerReport report = power_grid(cfg, 21);
  REQUIRE(report.rows.size() == 4);
  for (const PowerRow& row : report.rows) {
    double se = std::sqrt(0.05 * 0.95 / 5000.0);
    CHECK_MESSAGE(std::fabs(row.power - 0.05) <= 3.0 * std::sqrt(2.0) * se,
                  method_name(row.method));
  }
}

TEST_CASE("power grows with the signal strength under shared streams") {
  PowerConfig cfg;
  cfg.d = 20;
  cfg.signal_fraction = 0.1;
  cfg.rho_grid = {0.2};
  cfg.alpha = 0.05;
  cfg.n_crit_samples = 2000;
  cfg.n_power_samples = 4000;
  cfg.signal_strength_rule = SignalRule::fixed;
  std::vector<double> powers;
  for (double mu0 : {0.5, 1.0, 1.5}) {
    cfg.mu0_fixed = mu0;
    PowerReport report = power_grid(cfg, 22);
    powers.push_back(power_at(report, 0.2, Method::CCT).power);
  }
  CHECK(powers[0] <= powers[1]);
  CHECK(powers[1] <= powers[2]);
}

TEST_CASE("dense weak signals favor BJ over MinP under independence") {
  PowerConfig cfg;
  cfg.d = 20;
  cfg.signal_fraction = 0.2;
  cfg.rho_grid = {0.0};
  cfg.alpha = 0.05;
  cfg.n_crit_samples = 10000;
  cfg.n_power_samples = 5000;
  PowerReport report = power_grid(cfg, 23);
  const PowerRow& bj = power_at(report, 0.0, Method::BJ);
  const PowerRow& minp = power_at(report, 0.0, Method::MinP);
  double joint_se = std::sqrt(bj.mc_se * bj.mc_se + minp.mc_se * minp.mc_se);
  CHECK(bj.power - minp.power >= 2.0 * joint_se);
  // MinP critical values are reported on the conventional p-value scale.
  CHECK(minp.critical_value > 0.0);
  CHECK(minp.critical_value < 0.05);
}

TEST_CASE("power reports are independent of the thread count") {
  PowerConfig cfg;
  cfg.d = 10;
  cfg.signal_fraction = 0.1;
  cfg.rho_grid = {0.0, 0.3};
  cfg.alpha = 0.05;
  cfg.n_crit_samples = 4000;
  cfg.n_power_samples = 4000;
  PowerReport one = power_grid(cfg, 24, 1);
  PowerReport three = power_grid(cfg, 24, 3);
  REQUIRE(one.rows.size() == three.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].power == three.rows[i].power);
    CHECK(one.rows[i].critical_value == three.rows[i].critical_value);
  }
}

TEST_CASE("theorem-3 trend power climbs toward one") {
  PowerReport report = power_trend_theorem3(0.2, 1.2, {50, 200}, 3, 0.05,
                                            2000, 25);
  REQUIRE(report.rows.size() == 2);
  CHECK(report.warnings.empty());
  for (const PowerRow& row : report.rows) {
    CHECK(row.method == Method::CCT);
    CHECK(row.critical_value == cauchy_upper_quantile(0.05));
    CHECK(row.power > 0.5);
    CHECK(row.power <= 1.0);
  }
  CHECK(report.rows[1].power + 2.0 * (report.rows[1].mc_se +
                                      report.rows[0].mc_se) >=
        report.rows[0].power);
}

TEST_CASE("theorem-3 trend warns below the detection boundary") {
  PowerReport report = power_trend_theorem3(0.2, 0.2, {50}, 3, 0.05, 1000,
                                            26);
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("detection boundary") != std::string::npos);

  CHECK_THROWS_AS(power_trend_theorem3(0.6, 1.2, {50}, 3, 0.05, 1000, 26),
                  config_error);
  CHECK_THROWS_AS(power_trend_theorem3(0.2, 1.2, {}, 3, 0.05, 1000, 26),
                  config_error);
  CHECK_THROWS_AS(power_trend_theorem3(0.2, 1.2, {50}, 0, 0.05, 1000, 26),
                  config_error);
}

TEST_CASE("oracle accepts everything at negative infinity") {
  OracleEstimate est = mc_pvalue_oracle(
      Method::CCT, exchangeable_correlation(3, 0.0), -1e308, 10000, 27);
  CHECK(est.p == 1.0);
}

TEST_CASE("oracle under independence matches the analytic tail") {
  OracleEstimate est = mc_pvalue_oracle(Method::CCT,
                                        exchangeable_correlation(3, 0.0),
                                        6.3137515146750430990, 50000, 28);
  CHECK(std::fabs(est.p - 0.05) <= 3.0 * est.se);
}

TEST_CASE("oracle agrees with the analytic tail under ar1 dependence") {
  double observed = cauchy_upper_quantile(1e-3);
  OracleEstimate est = mc_pvalue_oracle(Method::CCT,
                                        ar1_correlation(10, 0.5), observed,
                                        200000, 29);
  CHECK(std::fabs(est.p - 1e-3) <= 3.0 * std::max(est.se, 1e-12));
}

TEST_CASE("oracle converts MinP thresholds from the conventional scale") {
  OracleEstimate est = mc_pvalue_oracle(Method::MinP,
                                        exchangeable_correlation(10, 0.0),
                                        0.0051161968918237011, 100000, 30);
  CHECK(std::fabs(est.p - 0.05) <= 3.0 * est.se);
  CHECK_THROWS_AS(mc_pvalue_oracle(Method::CCT,
                                   exchangeable_correlation(3, 0.0), 0.0,
                                   5000, 30),
                  config_error);
}
