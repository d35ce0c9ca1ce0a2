#pragma once

#include "vnm/common.hpp"

#include <functional>

namespace vnm {

/// Worker cap for internal loops. Defaults to hardware concurrency, further
/// capped by the VNMKIT_THREADS environment variable when set.
int max_threads();
void set_max_threads(int threads);

/// Runs body(i) for i in [begin, end) over contiguous chunks. Each index is
/// visited exactly once; callers write disjoint outputs so results do not
/// depend on the split. If chunks throw, the exception of the lowest chunk is rethrown.
void parallel_for(Index begin, Index end, const std::function<void(Index)>& body);

}  // namespace vnm
