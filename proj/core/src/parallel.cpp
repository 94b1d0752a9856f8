#include "pcgraph/parallel.hpp"

#include <cstdlib>
#include <string>

namespace pcgraph {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PCGRAPH_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace pcgraph
