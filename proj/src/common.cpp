#include "ddx/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ddx {

SummaryStats SummaryStats::of(std::span<const double> xs) {
    SummaryStats s;
    if (xs.empty()) return s;
    s.n = static_cast<double>(xs.size());
    KahanSum tot;
    double mn = xs[0], mx = xs[0];
    for (double x : xs) {
        tot.add(x);
        mn = std::min(mn, x);
        mx = std::max(mx, x);
    }
    s.tot = tot.sum();
    s.mean = s.tot / s.n;
    s.min = mn;
    s.max = mx;
    KahanSum sq;
    for (double x : xs) {
        double d = x - s.mean;
        sq.add(d * d);
    }
    s.var = sq.sum() / s.n;
    if (s.var < 0) s.var = 0;
    s.stdev = std::sqrt(s.var);
    return s;
}

std::uint64_t hash_string(const std::string& s) {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

}  // namespace ddx
