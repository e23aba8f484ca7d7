// Copyright 2026 The biphoton-bench Authors
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

// One PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

#include <cstdio>
#include <exception>
#include <string>

#include "acceptance.h"

namespace acc = biphoton::acceptance;

int main() {
  int failed = 0;
  for (int c = 1; c <= acc::kCriteria; ++c) {
    std::string detail;
    bool pass = true;
    try {
      const auto rows = acc::run_criterion(c);
      pass = acc::all_pass(rows, c);
      for (const acc::Row& r : rows) {
        if (!detail.empty()) detail += "; ";
        detail += r.quantity + " = " + acc::format_value(r.value);
        if (r.info) detail += " (info)";
        if (!r.pass) detail += " [outside " + r.reference + " +/- " + r.tolerance + "]";
      }
    } catch (const std::exception& e) {
      pass = false;
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", c, acc::title(c), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", acc::kCriteria - failed, acc::kCriteria);
  return failed == 0 ? 0 : 1;
}
