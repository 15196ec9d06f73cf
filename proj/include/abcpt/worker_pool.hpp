// Copyright 2026 The abcpt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ABCPT_WORKER_POOL_HPP
#define ABCPT_WORKER_POOL_HPP

#include <barrier>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace abcpt {

/// Fixed set of threads that run an indexed task to completion and then meet
/// at a barrier. Index k always runs on worker k % size(); the caller thread
/// acts as worker 0.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers)
      : size_(workers == 0 ? 1 : workers), sync_(static_cast<std::ptrdiff_t>(size_)),
        errors_(size_) {
    threads_.reserve(size_ - 1);
    for (std::size_t w = 1; w < size_; ++w) threads_.emplace_back([this, w] { worker_loop(w); });
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    if (size_ > 1) {
      stop_ = true;
      sync_.arrive_and_wait();
    }
  }

  std::size_t size() const noexcept { return size_; }

  /// Runs task(k) for k in [0, n) and returns once every call finished.
  /// The first exception thrown by any task is rethrown here.
  void run(std::size_t n, const std::function<void(std::size_t)>& task) {
    if (size_ == 1) {
      for (std::size_t k = 0; k < n; ++k) task(k);
      return;
    }
    task_ = &task;
    count_ = n;
    sync_.arrive_and_wait();  // start
    work(0);
    sync_.arrive_and_wait();  // done
    task_ = nullptr;
    for (auto& e : errors_) {
      if (e) {
        auto err = e;
        for (auto& x : errors_) x = nullptr;
        std::rethrow_exception(err);
      }
    }
  }

 private:
  void work(std::size_t w) {
    try {
      for (std::size_t k = w; k < count_; k += size_) (*task_)(k);
    } catch (...) {
      errors_[w] = std::current_exception();
    }
  }

  void worker_loop(std::size_t w) {
    for (;;) {
      sync_.arrive_and_wait();
      if (stop_) return;
      work(w);
      sync_.arrive_and_wait();
    }
  }

  std::size_t size_;
  std::barrier<> sync_;
  std::vector<std::exception_ptr> errors_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t count_ = 0;
  bool stop_ = false;
  std::vector<std::jthread> threads_;
};

}  // namespace abcpt

#endif  // ABCPT_WORKER_POOL_HPP
