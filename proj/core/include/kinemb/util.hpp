#pragma once

#include <cstddef>
#include <functional>

namespace kinemb {

/// Worker count for `requested` (0 = consult KINEMB_THREADS, then hardware).
std::size_t resolve_threads(std::size_t requested);

/// Runs fn(begin, end) over disjoint chunks of [0, count) on up to `threads`
/// workers. Chunking is fixed by `count` alone, and workers write only their
/// own chunk, so results never depend on the worker count.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace kinemb
