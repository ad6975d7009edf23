/**
 * @file parallel.h
 * @brief Row-parallel loop helper with a process-wide thread budget
 *
 * Work is split into contiguous row blocks; each output element is written by
 * exactly one thread with a fixed summation order, so results do not depend on
 * the thread count.
 */
#pragma once

#include <functional>

namespace astroimg {

/// Sets the worker count used by parallelFor (values < 1 are treated as 1).
void setThreadCount(int n);
int threadCount();

/// Calls body(begin, end) over disjoint sub-ranges covering [0, n).
void parallelFor(int n, const std::function<void(int, int)>& body);

}  // namespace astroimg
