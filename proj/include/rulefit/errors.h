/*
 * Copyright 2026 The RuleFit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RULEFIT_ERRORS_H_
#define RULEFIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rulefit {

// Malformed input file (bad token, ragged row). Message names the row.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Column declarations do not match the file or the model.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a numerical operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent or out-of-range configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rulefit

#endif  // RULEFIT_ERRORS_H_
