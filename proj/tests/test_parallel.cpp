// Copyright 2026 The survproj Authors
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

#include "survproj/parallel.hpp"

#include <doctest.h>

#include <stdexcept>
#include <vector>

using namespace survproj;

TEST_CASE("parallel_for visits every index once for any worker count") {
  const int before = thread_count();
  for (int threads : {1, 2, 5}) {
    set_thread_count(threads);
    std::vector<int> hits(1000, 0);
    parallel_for(1000, [&](Eigen::Index k) { hits[static_cast<std::size_t>(k)] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  set_thread_count(before);
}

TEST_CASE("parallel_for rethrows the failure with the lowest index") {
  const int before = thread_count();
  set_thread_count(4);
  try {
    parallel_for(200, [](Eigen::Index k) {
      if (k % 37 == 5) throw std::runtime_error("task " + std::to_string(k));
    });
    FAIL("no exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "task 5");
  }
  set_thread_count(before);
}

TEST_CASE("nested parallel_for runs inline") {
  const int before = thread_count();
  set_thread_count(3);
  std::vector<long> sums(20, 0);
  parallel_for(20, [&](Eigen::Index i) {
    parallel_for(50, [&](Eigen::Index j) { sums[static_cast<std::size_t>(i)] += j; });
  });
  for (long s : sums) CHECK(s == 1225);
  set_thread_count(before);
}
