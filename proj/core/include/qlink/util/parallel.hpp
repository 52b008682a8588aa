#pragma once

#include <cstddef>
#include <functional>

namespace qlink {

/// Run body(i) for i in [0, n) on up to `workers` threads (<= 0 means one per
/// hardware thread). Returns after every index finished; the exception from
/// the lowest failing index is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace qlink
