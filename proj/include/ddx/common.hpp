#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddx {

inline constexpr const char* kToolVersion = "0.1.0";

// Data or input problems: bad files, schema mismatches, out-of-range values.
// CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Configurations that cannot be satisfied: cv folds larger than a class,
// selector asked for more features than exist, and the like. Exit code 3.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// splitmix64; used for substream derivation and content hashing.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Deterministic RNG. The engine is the standardized mt19937_64; all
// distributions are implemented here because the std:: distribution objects
// are not bit-reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    std::uint64_t next() { return eng_(); }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

    // inclusive integer range
    std::int64_t int_range(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("Rng::int_range: lo > hi");
        return lo + static_cast<std::int64_t>(
                        below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // uniform in [0, 1)
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double range(double a, double b) { return a + unit() * (b - a); }

    bool bernoulli(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

    // Derives an independent stream; changing one index never perturbs
    // streams at other indices.
    static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        return Rng(mix64(mix64(seed) ^ mix64(a * 0x9e3779b97f4a7c15ULL + 1)) ^
                   mix64(b + 0x6a09e667f3bcc909ULL));
    }

private:
    std::mt19937_64 eng_;
};

// Compensated (Kahan) accumulator; keeps sums order-insensitive to ~1e-12.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double sum() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Summary statistics with the degenerate policy used throughout: every
// statistic over an empty set is 0, and variance is population variance.
struct SummaryStats {
    double n = 0, tot = 0, mean = 0, var = 0, stdev = 0, min = 0, max = 0;

    static SummaryStats of(std::span<const double> xs);
};

inline std::uint64_t hash_double(double x) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(x));
    __builtin_memcpy(&bits, &x, sizeof(bits));
    return bits;
}

std::uint64_t hash_string(const std::string& s);
std::string to_hex(std::uint64_t v);

}  // namespace ddx
