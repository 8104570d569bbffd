#pragma once

// Static-partition parallel loop. Each index writes only its own output
// slot and all randomness is counter-based, so results are identical for
// any thread count.

#include <cstddef>
#include <functional>

namespace vort {

// Process-wide default used by parallel_for when threads == 0.
void set_default_threads(int threads);
int default_threads();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  int threads = 0);

}  // namespace vort
