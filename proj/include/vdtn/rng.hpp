#pragma once

#include <cstdint>
#include <vector>

namespace vdtn {

// SplitMix64 generator. Deterministic across platforms and build flags,
// unlike the distributions in <random>, so run logs stay byte-stable.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi] inclusive. Rejection-free multiply-shift; the
    // modulo bias is irrelevant at our range sizes but we keep it exact.
    int64_t uniform(int64_t lo, int64_t hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        uint64_t threshold = (0 - span) % span;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return lo + static_cast<int64_t>(r % span);
        }
    }

    double uniform_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform(0, static_cast<int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derives an independent stream, e.g. one per substructure.
    Rng fork(uint64_t salt) {
        return Rng(next_u64() ^ (salt * 0x9e3779b97f4a7c15ULL));
    }

private:
    uint64_t state_;
};

}  // namespace vdtn
