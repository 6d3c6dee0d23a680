// SPDX-License-Identifier: Apache-2.0
//
// o2i-ris: coverage analysis of RIS-assisted outdoor-to-indoor mmWave links
// ------------------------------------------------------------------------

#ifndef O2I_RNG_HPP
#define O2I_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace o2i {

using Engine = std::mt19937_64;

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Named purposes for sub-streams, so independent consumers of one seed
/// never share random numbers.
enum class StreamTag : std::uint64_t {
    Fading = 1,
    CoverageTrials = 2,
    GeometricTrials = 3,
    Penetration = 4,
    Relay = 5,
    Curve = 6,
};

/// A position in the stream tree: (seed, tag, indices...). Deriving the
/// engine from the path alone makes every block of trials reproducible no
/// matter which worker executes it.
class StreamKey {
public:
    explicit StreamKey(std::uint64_t seed) : state_(mix64(seed)) {}

    StreamKey child(std::uint64_t index) const {
        StreamKey k = *this;
        k.state_ = mix64(state_ ^ mix64(index + 0x632be59bd9b4e019ULL));
        return k;
    }
    StreamKey child(StreamTag tag) const { return child(static_cast<std::uint64_t>(tag) << 48); }

    Engine engine() const {
        std::seed_seq seq{static_cast<std::uint32_t>(state_), static_cast<std::uint32_t>(state_ >> 32)};
        return Engine(seq);
    }
    std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_;
};

inline double uniform01(Engine& eng) { return std::uniform_real_distribution<double>(0.0, 1.0)(eng); }

} // namespace o2i

#endif
