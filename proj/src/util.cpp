#include "nvlab/util.hpp"

#include <bit>
#include <cstdio>

namespace nvlab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, double delta, int trial) {
    const std::uint64_t d = std::bit_cast<std::uint64_t>(delta);
    return splitmix64(seed ^ splitmix64(d) ^ splitmix64(static_cast<std::uint64_t>(trial) + 0x51ed2701ULL));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace nvlab
