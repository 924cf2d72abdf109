// Copyright 2026 The stpart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STPART_SCENARIO_IO_HPP_
#define STPART_SCENARIO_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "stpart/scenario.hpp"

namespace stpart {

inline constexpr int kFormatVersion = 1;

/// Malformed scenario document. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error
{
public:
  ParseError(const std::string & field, int line, const std::string & what);

  const std::string & field() const { return field_; }
  int line() const { return line_; }

private:
  std::string field_;
  int line_;
};

/**
 * @brief Strict scenario reader.
 *
 * Every field is required, unknown fields are rejected and numbers must be
 * finite. Scenario invariants are not checked here; call Scenario::validate.
 */
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path & path);

/// Pretty-printed document that parse_scenario reads back to an equal scenario.
std::string dump_scenario(const Scenario & scn);

}  // namespace stpart

#endif  // STPART_SCENARIO_IO_HPP_
