#ifndef REM_RNG_HPP
#define REM_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace rem {

// Philox4x32-10 counter-based generator. Independent streams come from the
// high counter words, so replication r can draw from stream r without any
// coordination with other streams.
class Philox4x32 {
public:
    using result_type = std::uint32_t;

    Philox4x32(std::uint64_t seed, std::uint64_t stream) {
        key_ = {static_cast<std::uint32_t>(seed),
                static_cast<std::uint32_t>(seed >> 32)};
        ctr_ = {0u, 0u,
                static_cast<std::uint32_t>(stream),
                static_cast<std::uint32_t>(stream >> 32)};
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint32_t>::max(); }

    result_type operator()() {
        if (pos_ == 4) {
            buf_ = block(ctr_, key_);
            bump();
            pos_ = 0;
        }
        return buf_[pos_++];
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static void mulhilo(std::uint32_t a, std::uint32_t b,
                        std::uint32_t& hi, std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> c,
                                              std::array<std::uint32_t, 2> k) {
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(kM0, c[0], hi0, lo0);
            mulhilo(kM1, c[2], hi1, lo1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
            k[0] += kW0;
            k[1] += kW1;
        }
        return c;
    }

    void bump() {
        if (++ctr_[0] == 0) ++ctr_[1];
    }

    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint32_t, 4> ctr_{};
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

// Convenience draws on top of the engine. All transformations are written out
// explicitly so a (seed, stream) pair reproduces the same values everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(seed, stream) {}

    std::uint64_t u64() {
        const std::uint64_t hi = engine_();
        const std::uint64_t lo = engine_();
        return (hi << 32) | lo;
    }

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double exponential(double mean) {
        return -mean * std::log1p(-uniform());
    }

    double normal(double mu = 0.0, double sigma = 1.0) {
        if (have_cached_) {
            have_cached_ = false;
            return mu + sigma * cached_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return mu + sigma * r * std::cos(a);
    }

    // uniform integer in [0, n)
    std::uint64_t uniform_int(std::uint64_t n) {
        // rejection to remove modulo bias
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = u64();
        } while (x >= limit);
        return x % n;
    }

private:
    Philox4x32 engine_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace rem

#endif
