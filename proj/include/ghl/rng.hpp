#pragma once

#include <cstdint>
#include <vector>

namespace ghl {

// Counter-based generator keyed by (seed, stream). Draws depend only on the
// key and the draw index, so parallel trial execution cannot perturb the
// stream and identical seeds reproduce identical bytes on any platform.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit();

    double next_range(double lo, double hi);

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi);

    bool next_bool(double p_true);

    // Random point of the probability simplex via exponential spacings.
    std::vector<double> next_simplex(std::size_t n);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ghl
