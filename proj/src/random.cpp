#include "moran/random.hpp"

namespace moran {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(splitmix64(splitmix64(master_seed) ^ splitmix64(~index)));
}

}  // namespace moran
