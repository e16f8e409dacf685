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

#ifndef CCT_ERRORS_HPP_
#define CCT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cct {

// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: invalid parameters, malformed configs, unusable files.
// The CLI maps this to exit code 2.
class config_error : public error {
 public:
  explicit config_error(const std::string& what) : error(what) {}
};

// Bad data: values outside their domain, malformed numeric content.
// The CLI maps this to exit code 3.
class data_error : public error {
 public:
  explicit data_error(const std::string& what) : error(what) {}
};

// Mathematical domain violation (a data error raised by the stats layer).
class domain_error : public data_error {
 public:
  explicit domain_error(const std::string& what) : data_error(what) {}
};

}  // namespace cct

#endif  // CCT_ERRORS_HPP_
