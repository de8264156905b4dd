#pragma once

#include <functional>
#include <optional>

namespace levysim {

/// Effective worker count: explicit request (CLI flag) wins, then the
/// LEVYSIM_THREADS environment variable, then the config value, then
/// hardware concurrency.
unsigned resolve_threads(std::optional<unsigned> requested,
                         std::optional<unsigned> config_value = std::nullopt);

/// Runs task(0..count-1) on a pool of `threads` workers pulling task indices
/// from a shared counter. Output determinism is the caller's job: tasks write
/// to disjoint, index-addressed slots and reductions run in index order after
/// the pool drains, so results never depend on the worker count. The first
/// exception thrown by a task is rethrown after all workers stop.
void run_tasks(std::size_t count, unsigned threads,
               const std::function<void(std::size_t)>& task);

}  // namespace levysim
