#pragma once

#include <cstdint>
#include <vector>

#include "firmcomp/types.hpp"

/// Consumer-level simulation of the select-then-accept purchase process.
namespace firmcomp::montecarlo {

/// SplitMix64 used as a counter-based generator: the k-th output of stream `seed` is a pure
/// function of (seed, k), so any consumer's draws can be reproduced without replaying the others.
class SplitMix64 {
public:
    static constexpr std::uint64_t increment = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Output number `counter` (0-based) of the stream started at `seed`.
    static std::uint64_t at(std::uint64_t seed, std::uint64_t counter) { return mix(seed + (counter + 1) * increment); }

    /// Uniform double in [0, 1) from the top 53 bits.
    static double uniform(std::uint64_t seed, std::uint64_t counter) {
        return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
    }
};

struct SimulationConfig {
    Market market;
    std::uint64_t num_consumers = 1;
    std::uint64_t seed = 0;
    std::uint64_t block_size = 1 << 16;  ///< consumers per parallel block
};

struct FirmTally {
    std::uint64_t units_sold = 0;
    double revenue = 0.0;
    double cost = 0.0;
    double profit_estimate = 0.0;  ///< (revenue - cost) / num_consumers
    double standard_error = 0.0;   ///< of profit_estimate
};

struct SimulationReport {
    std::vector<FirmTally> firms;
    std::uint64_t num_consumers = 0;
    std::uint64_t selections = 0;  ///< consumers who examined a product (always all of them)

    std::uint64_t total_units() const {
        std::uint64_t s = 0;
        for (const auto& f : firms) s += f.units_sold;
        return s;
    }
};

/// Each consumer picks one firm from the selection probabilities and then buys from it with the
/// acceptance probability. Consumer k uses draws 2k and 2k+1 of the seed's stream.
/// Throws AllWeightsZero when no firm is selectable.
SimulationReport simulate(const SimulationConfig& config);

}  // namespace firmcomp::montecarlo
