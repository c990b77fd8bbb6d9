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

#pragma once

#include <Eigen/Core>

#include <atomic>
#include <exception>
#include <functional>
#include <vector>

namespace survproj {

/// Worker count used by parallel_for. Initialized from SURVPROJ_THREADS when
/// set, otherwise from the hardware concurrency.
int thread_count();
void set_thread_count(int threads);

/// Runs fn(k) for k in [0, count). Tasks are independent and write to their
/// own slots, so results do not depend on the worker count. Calls made from
/// inside a worker run sequentially. If any task throws, the exception of the
/// lowest failing index is rethrown after all workers finish.
void parallel_for(Eigen::Index count, const std::function<void(Eigen::Index)>& fn);

}  // namespace survproj
