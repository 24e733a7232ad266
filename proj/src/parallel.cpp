#include "rzspec/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "rzspec/error.hpp"

namespace rzspec {

int worker_count() {
  if (const char* env = std::getenv("RZSPEC_THREADS"); env != nullptr && *env != '\0') {
    int value = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc() || ptr != end || value < 1) {
      throw DomainError("RZSPEC_THREADS must be a positive integer, got '" + std::string(env) + "'");
    }
    return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (count <= 0) return;
  workers = std::max(1, std::min(workers, count));
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](int w) {
    for (int k = w; k < count; k += workers) {
      try {
        body(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rzspec
