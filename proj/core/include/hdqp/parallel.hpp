#pragma once

#include <functional>

namespace hdqp::parallel {

/// Runs fn(0..count-1) on `threads` workers pulling indices from a shared
/// counter. Each index must be an independent unit of work writing only to
/// its own slot; the first exception is rethrown after all workers join.
/// Results are therefore identical for any thread count.
void for_indexed(int count, int threads, const std::function<void(int)>& fn);

}  // namespace hdqp::parallel
