// parallel.hpp
// Minimal fork-join helper for embarrassingly parallel evaluation. The
// SELFTEST_THREADS environment variable caps the worker count.

#pragma once

#include <cstddef>
#include <functional>

namespace selftest::detail {

int thread_cap();

// Runs body(0..n-1), possibly across threads; rethrows the first exception.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace selftest::detail
