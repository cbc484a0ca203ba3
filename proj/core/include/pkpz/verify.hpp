/*
   Copyright 2026 The pkpz authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// End-to-end verification suites: exact identities, formula equivalences,
// tail asymptotics, scaled-limit checks, the conditional limit law, CDF
// structural properties, ring-simulation convergence, and reproducibility.
// Each check records the measured figure against its pinned requirement.

#pragma once

#include <string>
#include <vector>

namespace pkpz::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double required = 0.0;  // pass iff measured <= required
  bool pass = false;
  double seconds = 0.0;
};

// identities, equivalence, tail, scaled-limit, conditional, structural,
// tasep, reproducibility.
std::vector<std::string> suite_names();

// Runs one suite ("all" runs every suite in order).
std::vector<CheckResult> run_suite(const std::string& name);

}  // namespace pkpz::verify
