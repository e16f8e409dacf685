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

#ifndef CCT_CSV_HPP_
#define CCT_CSV_HPP_

#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <string>

#include "cct/mc.hpp"
#include "cct/stats.hpp"

// Report serialization. All numbers print at 12 significant digits so that
// identical reports are byte-identical files.

namespace cct {

namespace detail {

inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string fmt_u64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

}  // namespace detail

inline void write_size_csv(std::ostream& out, const SizeReport& report) {
  out << "alpha,method,empirical_size,ratio,mc_se,n_samples,seed\n";
  for (const SizeRow& row : report.rows) {
    out << detail::fmt12(row.alpha) << ",CCT," << detail::fmt12(row.empirical_size)
        << ',' << detail::fmt12(row.ratio) << ',' << detail::fmt12(row.mc_se)
        << ',' << report.n_samples << ',' << detail::fmt_u64(report.seed)
        << '\n';
  }
}

inline void write_power_csv(std::ostream& out, const PowerReport& report) {
  out << "rho,method,power,mc_se,critical_value,n_crit,n_power,seed\n";
  for (const PowerRow& row : report.rows) {
    out << detail::fmt12(row.x) << ',' << method_name(row.method) << ','
        << detail::fmt12(row.power) << ',' << detail::fmt12(row.mc_se) << ','
        << detail::fmt12(row.critical_value) << ',' << report.n_crit_samples
        << ',' << report.n_power_samples << ',' << detail::fmt_u64(report.seed)
        << '\n';
  }
}

inline void write_trend_csv(std::ostream& out, const PowerReport& report) {
  out << "d,method,power,mc_se,critical_value,n_samples,seed\n";
  for (const PowerRow& row : report.rows) {
    out << detail::fmt12(row.x) << ',' << method_name(row.method) << ','
        << detail::fmt12(row.power) << ',' << detail::fmt12(row.mc_se) << ','
        << detail::fmt12(row.critical_value) << ',' << report.n_power_samples
        << ',' << detail::fmt_u64(report.seed) << '\n';
  }
}

inline void write_combined_csv(std::ostream& out, const CombinedResult& r) {
  out << "method,d,statistic,p_value\n"
      << r.method << ',' << r.d << ',' << detail::fmt12(r.statistic) << ','
      << detail::fmt12(r.p_value) << '\n';
}

}  // namespace cct

#endif  // CCT_CSV_HPP_
