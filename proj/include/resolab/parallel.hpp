#pragma once

#include <functional>

namespace resolab {

// Runs f(0..n-1) on up to `threads` workers. Each index writes only its own
// slot, so results do not depend on the thread count. The exception from the
// lowest failing index is rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& f);

}  // namespace resolab
