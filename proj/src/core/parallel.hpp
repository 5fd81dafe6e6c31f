// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace hom4 {

/// Process-wide worker count used by parallel_for; 0 or negative selects
/// std::thread::hardware_concurrency().
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Calls made from inside a running
/// parallel_for execute serially on the calling thread. If any body throws,
/// the exception of the smallest failing index is rethrown after all workers
/// finish, so error reports do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hom4
