// Copyright 2026 The ddmag Authors
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

#pragma once

// Built-in invariant suite behind the `validate` subcommand.

#include <string>
#include <vector>

#include "ddmag/scenarios.hpp"

namespace ddmag {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every check; none of them throws.
std::vector<CheckResult> run_invariant_suite(unsigned threads);

/// Writes validation.txt and lists failed checks in `failures`.
ScenarioResult run_validate(const ScenarioOptions& opt);

}  // namespace ddmag
