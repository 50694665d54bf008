#pragma once

#include <cstdint>
#include <random>

namespace fsb {

/// Seed for the deterministic sampling contract: identical seed and
/// operation sequence give bit-identical streams.
struct RngSeed {
    std::uint64_t value = 0;
};

/// Deterministic random stream. Uniform and normal variates are produced
/// by explicit arithmetic on the raw 64-bit output so streams do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1], for use under logs.
    double uniform01_open_low() { return 1.0 - uniform01(); }

    /// Standard normal via Box-Muller, pairs cached.
    double normal();

    /// Independent substream: mixes the base seed with a stream index.
    static RngSeed derive(RngSeed base, std::uint64_t stream);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fsb
