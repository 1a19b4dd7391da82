#ifndef TWNP_RNG_HPP
#define TWNP_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace twnp {

// mt19937_64 with hand-rolled value mapping. std::uniform_*_distribution and
// std::shuffle are implementation-defined, which would break bit-for-bit
// reproducibility of checkpoints across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do { x = engine_(); } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

  private:
    std::mt19937_64 engine_;
};

// FNV-1a 64-bit, used for data checksums and the CTXV form digest.
inline std::uint64_t fnv1a64(const unsigned char* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
    return fnv1a64(reinterpret_cast<const unsigned char*>(s.data()), s.size(), h);
}

}  // namespace twnp

#endif
