#ifndef SPACESAMP_RNG_HPP
#define SPACESAMP_RNG_HPP

#include <cstdint>

namespace spacesamp {

namespace detail {

// SplitMix64 finalizer (Stafford mix13). Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Counter-based uniform stream. Cheap to construct, so substreams are derived
// by hashing (seed, a, b) rather than by jumping a shared generator; draws on
// one stream never perturb another. All samplers in this library consume only
// uniform01()/next_u64(), which keeps output byte-identical across platforms.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed)
        : state_(detail::mix64(seed + 0x9E3779B97F4A7C15ULL)) {}

    // Stream keyed by (seed, a, b). Distinct keys give independent streams.
    static RngStream derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        std::uint64_t s = detail::mix64(seed + 0x9E3779B97F4A7C15ULL);
        s = detail::mix64(s ^ (a + 0xD1B54A32D192ED03ULL));
        s = detail::mix64(s ^ (b + 0x8CB92BA72F3D8DD7ULL));
        RngStream r(0);
        r.state_ = s;
        return r;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return detail::mix64(state_);
    }

    // Uniform on the open interval (0,1); safe to feed through quantile
    // functions and strict-inequality inversion without edge cases.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    // Uniform integer in {lo, ..., hi} inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

private:
    std::uint64_t state_;
};

} // namespace spacesamp

#endif
