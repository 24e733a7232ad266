#pragma once

#include <functional>

namespace rzspec {

/// Worker count from RZSPEC_THREADS (a positive integer), else the number of
/// logical cores. Throws DomainError if the variable is set but malformed.
int worker_count();

/// Runs body(k) for k in [0, count) on up to `workers` threads. Rows are dealt
/// out round-robin, so each k is handled by exactly one thread and results
/// written to disjoint slots do not depend on the worker count. The first
/// exception (lowest k) is rethrown after all workers finish.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

}  // namespace rzspec
