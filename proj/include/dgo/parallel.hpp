#pragma once

// Evaluation backends. A batch of children is split into one contiguous chunk
// per worker, each worker decodes and evaluates its chunk, and the driver
// gathers the values in canonical index order before reducing them.

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dgo/bitcodec.hpp"
#include "dgo/neighborhood.hpp"
#include "dgo/objective.hpp"

namespace dgo {

struct IndexRange {
  std::size_t begin;
  std::size_t end;
  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Per-worker contiguous ranges over the child sequence. Ranges are ordered,
/// cover [0, count) without gaps, and differ in size by at most one.
struct Assignment {
  std::vector<IndexRange> ranges;

  std::size_t max_chunk() const noexcept {
    std::size_t m = 0;
    for (const auto& r : ranges) m = std::max(m, r.size());
    return m;
  }
};

/// Balanced static partition; the first count % workers ranges get one extra
/// element. When workers > count the trailing ranges are empty.
inline Assignment partition_children(std::size_t count, std::size_t workers) {
  if (workers == 0) throw std::invalid_argument("partition_children: workers must be positive");
  if (count == 0) throw std::invalid_argument("partition_children: count must be positive");
  Assignment a;
  a.ranges.reserve(workers);
  const std::size_t base = count / workers;
  const std::size_t extra = count % workers;
  std::size_t next = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    a.ranges.push_back({next, next + len});
    next += len;
  }
  return a;
}

/// Fixed set of threads that execute one job per worker and then park. A job
/// is a callable taking the worker ordinal; `run` blocks until every worker has
/// finished and rethrows the first exception raised by any of them.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers) {
    if (workers == 0) throw std::invalid_argument("WorkerPool: workers must be positive");
    threads_.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads_.emplace_back([this, w] { loop(w); });
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    {
      std::lock_guard lock(mutex_);
      stopping_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::size_t size() const noexcept { return threads_.size(); }

  void run(const std::function<void(std::size_t)>& job) {
    std::lock_guard serial(run_mutex_);
    std::unique_lock lock(mutex_);
    job_ = &job;
    pending_ = threads_.size();
    error_ = nullptr;
    ++generation_;
    wake_.notify_all();
    done_.wait(lock, [this] { return pending_ == 0; });
    job_ = nullptr;
    if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
  }

 private:
  void loop(std::size_t worker) {
    std::size_t seen = 0;
    for (;;) {
      const std::function<void(std::size_t)>* job = nullptr;
      {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return stopping_ || generation_ != seen; });
        if (stopping_) return;
        seen = generation_;
        job = job_;
      }
      std::exception_ptr err;
      try {
        (*job)(worker);
      } catch (...) {
        err = std::current_exception();
      }
      {
        std::lock_guard lock(mutex_);
        if (err && !error_) error_ = err;
        if (--pending_ == 0) done_.notify_one();
      }
    }
  }

  std::vector<std::thread> threads_;
  std::mutex run_mutex_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  std::exception_ptr error_;
  bool stopping_ = false;
};

/// Either the sequential baseline or a data-parallel worker pool. Copies share
/// the same pool; a pool serializes concurrent batches.
class EvalBackend {
 public:
  static EvalBackend sequential() { return EvalBackend{}; }

  static EvalBackend worker_pool(std::size_t workers) {
    EvalBackend b;
    b.pool_ = std::make_shared<WorkerPool>(workers);
    return b;
  }

  bool is_sequential() const noexcept { return pool_ == nullptr; }
  std::size_t workers() const noexcept { return pool_ ? pool_->size() : 1; }
  std::string describe() const {
    return pool_ ? "pool:" + std::to_string(pool_->size()) : std::string("seq");
  }

  /// Calls fn(begin, end) over a partition of [0, count).
  void for_each_chunk(std::size_t count,
                      const std::function<void(std::size_t, std::size_t)>& fn) const {
    if (count == 0) return;
    if (!pool_) {
      fn(0, count);
      return;
    }
    const Assignment a = partition_children(count, pool_->size());
    pool_->run([&](std::size_t w) {
      const auto r = a.ranges[w];
      if (r.size() > 0) fn(r.begin, r.end);
    });
  }

 private:
  EvalBackend() = default;
  std::shared_ptr<WorkerPool> pool_;
};

struct ChildValue {
  std::size_t index;
  double value;
  friend bool operator==(const ChildValue&, const ChildValue&) = default;
};

/// values[i] = objective(decode(children[i])) in canonical order, non-finite
/// values replaced by +inf.
inline std::vector<ChildValue> evaluate_batch(const ChildSet& children, const Objective& objective,
                                              const Quantizer& q, const EvalBackend& backend) {
  if (objective.dims() != q.dims())
    throw std::invalid_argument("evaluate_batch: objective and quantizer dims differ");
  std::vector<ChildValue> values(children.size());
  backend.for_each_chunk(children.size(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(q.dims());
    for (std::size_t i = begin; i < end; ++i) {
      decode_point_into(children[i], q, x);
      values[i] = {i, sanitize_value(objective(x))};
    }
  });
  return values;
}

/// Minimum value, smallest index on ties; independent of input order.
inline ChildValue reduce_min(std::span<const ChildValue> values) {
  if (values.empty()) throw std::invalid_argument("reduce_min: empty input");
  ChildValue best{values.front().index, sanitize_value(values.front().value)};
  for (const auto& cv : values.subspan(1)) {
    const double v = sanitize_value(cv.value);
    if (v < best.value || (v == best.value && cv.index < best.index)) best = {cv.index, v};
  }
  return best;
}

}  // namespace dgo
