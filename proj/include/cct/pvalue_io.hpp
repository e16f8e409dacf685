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

#ifndef CCT_PVALUE_IO_HPP_
#define CCT_PVALUE_IO_HPP_

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "cct/errors.hpp"

namespace cct {

// One p-value per line, optional second column with its weight, '#' starts
// a comment. Inline weights must appear on every line or none.
struct PValueFile {
  std::vector<double> values;
  std::vector<double> weights;  // empty unless every line carried one
  std::vector<int> lines;       // source line of each value, for messages
};

namespace detail {

inline const char* skip_blank(const char* p, const char* end) {
  while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == ',')) ++p;
  return p;
}

}  // namespace detail

inline PValueFile read_pvalue_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open: " + path);
  PValueFile file;
  std::string line;
  int lineno = 0;
  bool any_weight = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    p = detail::skip_blank(p, end);
    if (p == end) continue;
    double value = 0.0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc()) {
      throw data_error("line " + std::to_string(lineno) +
                       ": expected a numeric p-value");
    }
    p = detail::skip_blank(next, end);
    if (p != end) {
      double weight = 0.0;
      auto [wnext, wec] = std::from_chars(p, end, weight);
      if (wec != std::errc()) {
        throw data_error("line " + std::to_string(lineno) +
                         ": expected a numeric weight");
      }
      p = detail::skip_blank(wnext, end);
      if (p != end) {
        throw data_error("line " + std::to_string(lineno) +
                         ": unexpected trailing content");
      }
      if (!any_weight && !file.values.empty()) {
        throw data_error("line " + std::to_string(lineno) +
                         ": weight column must appear on every line or none");
      }
      any_weight = true;
      file.weights.push_back(weight);
    } else if (any_weight) {
      throw data_error("line " + std::to_string(lineno) +
                       ": weight column must appear on every line or none");
    }
    file.values.push_back(value);
    file.lines.push_back(lineno);
  }
  if (file.values.empty()) {
    throw data_error("no p-values found in " + path);
  }
  return file;
}

// One weight per line; '#' comments allowed.
inline std::vector<double> read_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open: " + path);
  std::vector<double> weights;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    p = detail::skip_blank(p, end);
    if (p == end) continue;
    double value = 0.0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || detail::skip_blank(next, end) != end) {
      throw data_error("line " + std::to_string(lineno) +
                       ": expected a numeric weight");
    }
    weights.push_back(value);
  }
  return weights;
}

}  // namespace cct

#endif  // CCT_PVALUE_IO_HPP_
