#pragma once

#include <cstdint>

namespace raretail {

// Counter-based generator: output i of a stream is a pure function of
// (seed, stream_id, i), so any draw can be reproduced without replaying
// the ones before it. Streams with distinct ids never share state, which
// makes parallel replication a matter of arithmetic on ids.
struct RngStream {
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    std::uint64_t key = 0;
    std::uint64_t ctr = 0;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    RngStream() = default;
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : key(mix(seed + kGamma) ^ mix(stream_id * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL)) {}

    std::uint64_t next_u64() { return mix(key + (++ctr) * kGamma); }

    // uniform on the open interval (0,1); safe for log() and inverse transforms
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }
};

// Stream-id composition. The engine lays out top-level ids as
// (module_tag << 32) | replicate_index; deeper structure (levels, slots,
// steps) is folded in by hashing.
constexpr std::uint64_t stream_id(std::uint32_t module_tag, std::uint32_t replicate) {
    return (static_cast<std::uint64_t>(module_tag) << 32) | replicate;
}

constexpr std::uint64_t compose_id(std::uint64_t a, std::uint64_t b) {
    return RngStream::mix(a + RngStream::kGamma) ^ (b * 0x9FB21C651E98DF25ULL + 0xE7037ED1A0B428DBULL);
}

constexpr std::uint64_t compose_id(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return compose_id(compose_id(a, b), c);
}


// Uniform noise feeding a sampler. The splitting engine serves recorded
// values (possibly perturbed by its refresh moves) through this interface;
// plain Monte Carlo serves a stream directly.
class Noise {
  public:
    virtual ~Noise() = default;
    virtual double u01() = 0;
};

class StreamNoise final : public Noise {
  public:
    explicit StreamNoise(RngStream& s) : s_(&s) {}
    double u01() override { return s_->next_u01(); }

  private:
    RngStream* s_;
};

}  // namespace raretail
