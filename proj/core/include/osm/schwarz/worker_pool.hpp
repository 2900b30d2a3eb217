// SPDX-License-Identifier: Apache-2.0

#ifndef OSM_SCHWARZ_WORKER_POOL_HPP
#define OSM_SCHWARZ_WORKER_POOL_HPP

#include <condition_variable>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace osm
{

//
// Fixed set of threads running supersteps: run(n, fn) executes fn(i) for i in [0, n),
// task i on worker i % workers, and returns when all tasks are done. With zero workers
// tasks run inline in index order. If tasks throw, the exception of the lowest failing
// index is rethrown after the superstep completes.
//
class WorkerPool
{
public:
  explicit WorkerPool(int workers = 0);
  ~WorkerPool();
  WorkerPool(const WorkerPool &) = delete;
  WorkerPool &operator=(const WorkerPool &) = delete;

  int workers() const { return count_; }
  bool sequential() const { return count_ == 0; }

  void run(int tasks, const std::function<void(int)> &fn);

private:
  void loop(int worker, std::stop_token stop);

  int count_ = 0;
  std::vector<std::jthread> threads_;
  std::mutex mutex_;
  std::condition_variable_any start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(int)> *job_ = nullptr;
  int tasks_ = 0;
  unsigned long generation_ = 0;
  int pending_ = 0;
  std::vector<std::exception_ptr> errors_;
};

}  // namespace osm

#endif  // OSM_SCHWARZ_WORKER_POOL_HPP
