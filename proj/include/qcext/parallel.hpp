#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace qcext {

/// Upper bound on worker threads used by parallel_for (the CLI's --threads).
/// 0 means hardware concurrency.
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs body(i) for i in [0, count) on up to max_threads() threads. Each index
/// runs exactly once; callers write into per-index slots and reduce in index
/// order afterwards, so results do not depend on the thread count. The first
/// exception thrown (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace qcext
