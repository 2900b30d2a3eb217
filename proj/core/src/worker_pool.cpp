// SPDX-License-Identifier: Apache-2.0

#include "osm/schwarz/worker_pool.hpp"

namespace osm
{

WorkerPool::WorkerPool(int workers) : count_(workers < 0 ? 0 : workers)
{
  for (int w = 0; w < count_; ++w)
  {
    threads_.emplace_back([this, w](std::stop_token stop) { loop(w, stop); });
  }
}

WorkerPool::~WorkerPool()
{
  for (auto &t : threads_)
  {
    t.request_stop();
  }
  start_cv_.notify_all();
  threads_.clear();
}

void WorkerPool::run(int tasks, const std::function<void(int)> &fn)
{
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(tasks));
  if (threads_.empty())
  {
    for (int i = 0; i < tasks; ++i)
    {
      try
      {
        fn(i);
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  }
  else
  {
    std::unique_lock lock(mutex_);
    job_ = &fn;
    tasks_ = tasks;
    errors_ = std::move(errors);
    pending_ = workers();
    ++generation_;
    start_cv_.notify_all();
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    job_ = nullptr;
    errors = std::move(errors_);
  }
  for (auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

void WorkerPool::loop(int worker, std::stop_token stop)
{
  unsigned long seen = 0;
  while (true)
  {
    const std::function<void(int)> *job = nullptr;
    int tasks = 0;
    {
      std::unique_lock lock(mutex_);
      if (!start_cv_.wait(lock, stop, [&] { return generation_ != seen; }))
      {
        return;
      }
      seen = generation_;
      job = job_;
      tasks = tasks_;
    }
    std::vector<std::pair<int, std::exception_ptr>> failures;
    for (int i = worker; i < tasks; i += workers())
    {
      try
      {
        (*job)(i);
      }
      catch (...)
      {
        failures.emplace_back(i, std::current_exception());
      }
    }
    std::lock_guard lock(mutex_);
    for (auto &[i, e] : failures)
    {
      errors_[i] = e;
    }
    if (--pending_ == 0)
    {
      done_cv_.notify_one();
    }
  }
}

}  // namespace osm
