#include "qsplit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qsplit/errors.hpp"

namespace qsplit {

namespace {

int initial_threads() {
  try {
    if (int n = threads_from_env(); n > 0) return n;
  } catch (const Error&) {
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<int>& workers() {
  static std::atomic<int> n{initial_threads()};
  return n;
}

}  // namespace

int threads_from_env() {
  const char* env = std::getenv("QSPLIT_THREADS");
  if (!env || !*env) return 0;
  const std::string text(env);
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || n <= 0)
    throw Error(ErrorKind::Config, "QSPLIT_THREADS must be a positive integer, got '" + text + "'");
  return n;
}

int thread_count() { return workers().load(); }

void set_thread_count(int n) { workers().store(std::max(1, n)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (nt <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex guard;
  const std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qsplit
