#include "ghl/rng.hpp"

#include <cmath>

namespace ghl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xda942042e4dd58b5ull))) {}

std::uint64_t CounterRng::next_u64() {
    return splitmix64(key_ ^ splitmix64(counter_++));
}

double CounterRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_range(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
}

std::int64_t CounterRng::next_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

bool CounterRng::next_bool(double p_true) {
    return next_unit() < p_true;
}

std::vector<double> CounterRng::next_simplex(std::size_t n) {
    std::vector<double> out(n);
    double total = 0.0;
    for (auto& v : out) {
        // Exponential spacing; 1 - u avoids log(0).
        v = -std::log(1.0 - next_unit());
        total += v;
    }
    for (auto& v : out) v /= total;
    // Normalization can leave the sum a few ulps off 1; push the residual
    // into the largest entry so downstream Pmf validation is exact enough.
    double sum = 0.0;
    for (double v : out) sum += v;
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (out[i] > out[arg]) arg = i;
    }
    out[arg] += 1.0 - sum;
    return out;
}

}  // namespace ghl
