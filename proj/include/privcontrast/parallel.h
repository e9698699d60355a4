//
// Copyright 2026 The PrivContrast Authors
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
//

#ifndef PRIVCONTRAST_PARALLEL_H_
#define PRIVCONTRAST_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace privcontrast {

// Worker count: PRIVCONTRAST_THREADS when set to a positive integer,
// otherwise the hardware concurrency.
std::size_t default_thread_count();

// Calls fn(i) for i in [0, n) across up to `threads` workers (0 selects
// default_thread_count()). Without exceptions each index runs exactly once;
// after one, remaining indices may be skipped, and the first exception is
// rethrown once all workers join.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace privcontrast

#endif  // PRIVCONTRAST_PARALLEL_H_
