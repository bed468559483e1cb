#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace walklocus {

// Thread count from an explicit request, else WALKLOCUS_THREADS, else the
// hardware concurrency. Always >= 1.
unsigned resolve_threads(unsigned requested);

// Runs body(i) for i in [begin, end) on `threads` workers that claim indices
// from a shared counter. Results must be written to per-index slots so that
// aggregation does not depend on scheduling. Stops claiming new indices once
// `stop` becomes true. Rethrows the first exception raised by a body.
void parallel_for(std::size_t begin, std::size_t end, unsigned threads,
                  const std::function<void(std::size_t)>& body,
                  const std::atomic<bool>* stop = nullptr);

}  // namespace walklocus
