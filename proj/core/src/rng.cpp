#include "poplab/rng.hpp"

namespace poplab {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SeedSpec SeedSpec::child(std::uint64_t index) const noexcept {
    return {master, splitmix64(stream ^ splitmix64(index + 0x632be59bd9b4e019ULL))};
}

SeedSpec SeedSpec::child(std::string_view tag) const noexcept {
    // FNV-1a over the tag, then the numeric path.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return child(h);
}

Engine SeedSpec::engine() const {
    const std::uint64_t a = splitmix64(master);
    const std::uint64_t b = splitmix64(a ^ stream);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Engine(seq);
}

}  // namespace poplab
