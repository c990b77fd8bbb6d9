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

#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

namespace survproj {

namespace {

int initial_threads() {
  if (const char* env = std::getenv("SURVPROJ_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& threads_setting() {
  static std::atomic<int> value{initial_threads()};
  return value;
}

thread_local bool inside_worker = false;

}  // namespace

int thread_count() { return threads_setting().load(); }

void set_thread_count(int threads) { threads_setting().store(threads < 1 ? 1 : threads); }

void parallel_for(Eigen::Index count, const std::function<void(Eigen::Index)>& fn) {
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<Eigen::Index>(thread_count(), count));
  if (workers <= 1 || inside_worker) {
    for (Eigen::Index k = 0; k < count; ++k) fn(k);
    return;
  }

  std::atomic<Eigen::Index> next{0};
  std::mutex failure_mutex;
  Eigen::Index failed_index = count;
  std::exception_ptr failure;

  auto work = [&] {
    inside_worker = true;
    for (Eigen::Index k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
      try {
        fn(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (k < failed_index) {
          failed_index = k;
          failure = std::current_exception();
        }
      }
    }
    inside_worker = false;
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace survproj
