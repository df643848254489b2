#pragma once

#include <cstdint>
#include <random>

namespace moran {

// Seeded stream of uniforms. The 53-bit conversion is done here rather than
// through std::uniform_real_distribution, whose output is implementation-defined,
// so that draws are bit-identical across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Independent stream for task `index` under `master_seed`.
    static RandomStream derive(std::uint64_t master_seed, std::uint64_t index);

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0, 1); zero is rejected.
    double uniform_open() {
        for (;;) {
            const double u = uniform01();
            if (u > 0.0) return u;
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace moran
