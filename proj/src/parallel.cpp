#include "hpd/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace hpd {

namespace {

std::size_t default_threads() {
  if (const char* env = std::getenv("HPD_DEPTH_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<std::size_t> g_threads{0};

}  // namespace

bool& detail::in_parallel_region() {
  thread_local bool flag = false;
  return flag;
}

void set_thread_count(std::size_t n) { g_threads = n; }

std::size_t thread_count() {
  const std::size_t n = g_threads.load();
  return n == 0 ? default_threads() : n;
}

}  // namespace hpd
