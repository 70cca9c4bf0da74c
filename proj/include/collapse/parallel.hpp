#pragma once

#include <cstddef>
#include <functional>

namespace collapse::parallel {

/// Worker count used by ensemble drivers: $COLLAPSE_LAB_WORKERS when set,
/// else an explicit `set_workers` value, else the hardware concurrency.
unsigned workers();
void set_workers(unsigned n);

/// Runs body(i) for i in [0, n). Bodies must write only to slot i of
/// pre-sized outputs; that keeps results independent of the worker count.
/// The exception thrown for the lowest index is rethrown.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace collapse::parallel
