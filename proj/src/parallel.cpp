#include "nvlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace nvlab {

unsigned worker_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* cap = std::getenv("NVLAB_THREADS")) {
        try {
            const long requested = std::stol(cap);
            if (requested < 1) return 1;
            if (static_cast<unsigned>(requested) < n) n = static_cast<unsigned>(requested);
        } catch (...) {
            // Unparseable cap: keep the hardware default.
        }
    }
    return n;
}

}  // namespace nvlab
