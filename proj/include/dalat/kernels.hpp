#pragma once

// Traversal kernels shared by every per-vertex computation that follows the
// origin tree (path products, discrete integrals) plus a flat index loop.
//
// The serial variants are the reference: they visit vertices in tree order.
// The parallel variants process one breadth-first layer at a time; a vertex
// only reads its parent, which lives in an earlier layer, so both variants
// perform the same floating-point operations in the same order per vertex
// and produce bitwise-identical output.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>

#include "dalat/lattice.hpp"

namespace dalat::kernels {

/// Layers smaller than this run on the calling thread.
inline constexpr std::size_t kParallelGrain = 64;

/// Exceptions must not leave an OpenMP region; the first one is kept and
/// rethrown once the region has finished.
class ExceptionSlot {
 public:
  template <class Fn>
  void run(Fn&& fn) noexcept {
    try {
      fn();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

/// step(parent, v) for every non-root vertex, parents before children.
template <class Step>
void tree_walk_serial(const OriginTree& tree, Step&& step) {
  for (std::size_t k = 1; k < tree.order.size(); ++k) {
    const auto v = tree.order[k];
    step(tree.parent[v], v);
  }
}

template <class Step>
void tree_walk_parallel(const OriginTree& tree, Step&& step) {
  for (std::size_t layer = 1; layer < tree.layer_count(); ++layer) {
    const auto begin = static_cast<std::int64_t>(tree.layer_offsets[layer]);
    const auto end = static_cast<std::int64_t>(tree.layer_offsets[layer + 1]);
    ExceptionSlot slot;
#pragma omp parallel for schedule(static) if (end - begin >= std::int64_t(kParallelGrain))
    for (std::int64_t k = begin; k < end; ++k) {
      const auto v = tree.order[static_cast<std::size_t>(k)];
      slot.run([&] { step(tree.parent[v], v); });
    }
    slot.rethrow();
  }
}

template <class Step>
void tree_walk(Exec exec, const OriginTree& tree, Step&& step) {
  if (exec == Exec::parallel) {
    tree_walk_parallel(tree, step);
  } else {
    tree_walk_serial(tree, step);
  }
}

/// body(i) for i in [0, n); iterations must be independent.
template <class Body>
void for_each_index(Exec exec, std::size_t n, Body&& body) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<std::int64_t>(n);
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic) if (count > 1)
  for (std::int64_t i = 0; i < count; ++i) slot.run([&] { body(static_cast<std::size_t>(i)); });
  slot.rethrow();
}

}  // namespace dalat::kernels
