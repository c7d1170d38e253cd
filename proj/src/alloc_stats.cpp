#include "alloc_stats.hpp"

namespace sph {

namespace {
thread_local AllocStats* g_sink = nullptr;
}

AllocScope::AllocScope(AllocStats& stats) : prev_(g_sink) { g_sink = &stats; }
AllocScope::~AllocScope() { g_sink = prev_; }

namespace detail {
AllocStats* current_alloc_sink() { return g_sink; }
}

}  // namespace sph
