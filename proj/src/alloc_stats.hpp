#pragma once

#include <atomic>
#include <cstdint>

namespace sph {

/// Plain snapshot of allocation counters.
struct AllocCounts {
  std::uint64_t meshes_created = 0;
  std::uint64_t meshes_copied = 0;
  std::uint64_t elements_written = 0;
};

/// Accumulates mesh allocation activity for one measurement scope.
/// Counters are atomic so concurrent library calls can share a scope.
class AllocStats {
 public:
  void note_created() { created_.fetch_add(1, std::memory_order_relaxed); }
  void note_copied() { copied_.fetch_add(1, std::memory_order_relaxed); }
  void note_written(std::uint64_t n) { written_.fetch_add(n, std::memory_order_relaxed); }

  AllocCounts counts() const {
    return {created_.load(std::memory_order_relaxed),
            copied_.load(std::memory_order_relaxed),
            written_.load(std::memory_order_relaxed)};
  }

  void reset() {
    created_.store(0, std::memory_order_relaxed);
    copied_.store(0, std::memory_order_relaxed);
    written_.store(0, std::memory_order_relaxed);
  }

 private:
  std::atomic<std::uint64_t> created_{0};
  std::atomic<std::uint64_t> copied_{0};
  std::atomic<std::uint64_t> written_{0};
};

/// Installs `stats` as the accounting sink for mesh operations on the
/// current thread. Scopes nest; the previous sink is restored on exit.
class AllocScope {
 public:
  explicit AllocScope(AllocStats& stats);
  ~AllocScope();
  AllocScope(const AllocScope&) = delete;
  AllocScope& operator=(const AllocScope&) = delete;

 private:
  AllocStats* prev_;
};

namespace detail {
AllocStats* current_alloc_sink();

inline void count_created() {
  if (auto* s = current_alloc_sink()) s->note_created();
}
inline void count_copied() {
  if (auto* s = current_alloc_sink()) s->note_copied();
}
inline void count_written(std::uint64_t n) {
  if (auto* s = current_alloc_sink()) s->note_written(n);
}
}  // namespace detail

}  // namespace sph
