#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace poplab {

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// A (master, stream) pair. Streams are derived hierarchically with child(),
// so a task's randomness depends only on its position in the task tree and
// never on scheduling order.
struct SeedSpec {
    std::uint64_t master = 0;
    std::uint64_t stream = 0;

    SeedSpec child(std::uint64_t index) const noexcept;
    SeedSpec child(std::string_view tag) const noexcept;

    Engine engine() const;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

}  // namespace poplab
