#pragma once

#include <cstddef>
#include <functional>

namespace anyent {

/// Worker count: ANYON_ENT_THREADS when set and positive, else hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n); each index exactly once, any order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

} // namespace anyent
