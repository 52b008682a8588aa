#include "qlink/util/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qlink {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  std::size_t nthreads = workers > 0 ? static_cast<std::size_t>(workers)
                                     : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, n);

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_index = n;
  std::exception_ptr err;

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };

  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (std::size_t k = 1; k < nthreads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace qlink
