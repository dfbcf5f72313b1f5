#ifndef LANDSCAPE_PARALLEL_HPP
#define LANDSCAPE_PARALLEL_HPP

#include <algorithm>
#include <thread>
#include <vector>

namespace landscape {

// Runs f(i) for i in [0, n). Each index is computed independently and results
// must be written to index-addressed storage by the caller, so the outcome is
// identical for any job count.
template <typename F>
void parallel_for(int n, int jobs, F&& f) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  jobs = std::min(jobs, n);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (int i = w; i < n; i += jobs) f(i);
    });
  }
  for (auto& t : workers) t.join();
}

}  // namespace landscape

#endif
