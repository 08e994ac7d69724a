#include "eemimo/parallel.hpp"

#include <cstdlib>
#include <string>

namespace eemimo {

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("EE_MIMO_THREADS")) {
    try {
      const long v = std::stol(cap);
      if (v >= 1) n = std::min<unsigned long>(n, static_cast<unsigned long>(v));
    } catch (const std::exception&) {
    }
  }
  return n;
}

}  // namespace eemimo
