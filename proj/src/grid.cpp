#include "ghl/grid.hpp"

#include <cstdlib>
#include <numeric>
#include <string>

namespace ghl {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

RewardTable RewardTable::from_grid(std::vector<std::int64_t> num, std::int64_t denom) {
    if (denom <= 0) throw DomainError("grid denominator must be positive");
    if (num.empty()) throw DomainError("reward table needs at least one outcome");
    std::int64_t g = denom;
    for (std::int64_t n : num) {
        if (std::abs(n) > denom) {
            throw GridOverflow("reward value " + std::to_string(n) + "/" +
                               std::to_string(denom) + " outside [-1, 1]");
        }
        g = gcd64(g, n);
    }
    if (g > 1) {
        denom /= g;
        for (auto& n : num) n /= g;
    }
    RewardTable t;
    t.denom_ = denom;
    t.num_ = std::move(num);
    t.values_.reserve(t.num_.size());
    for (std::int64_t n : t.num_) {
        t.values_.push_back(static_cast<double>(n) / static_cast<double>(denom));
    }
    return t;
}

RewardTable RewardTable::constant(std::size_t n, std::int64_t num, std::int64_t denom) {
    return from_grid(std::vector<std::int64_t>(n, num), denom);
}

RewardTable RewardTable::off_grid(std::vector<double> values) {
    if (values.empty()) throw DomainError("reward table needs at least one outcome");
    for (double v : values) {
        if (!(v >= -1.0 && v <= 1.0)) {
            throw GridOverflow("off-grid reward value outside [-1, 1]");
        }
    }
    RewardTable t;
    t.values_ = std::move(values);
    return t;
}

std::int64_t RewardTable::denom() const {
    if (!denom_) throw DomainError("table is off-grid");
    return *denom_;
}

const std::vector<std::int64_t>& RewardTable::num() const {
    if (!denom_) throw DomainError("table is off-grid");
    return num_;
}

RewardTable RewardTable::positive_part() const {
    if (on_grid()) {
        std::vector<std::int64_t> n = num_;
        for (auto& x : n)
            if (x < 0) x = 0;
        return from_grid(std::move(n), *denom_);
    }
    std::vector<double> v = values_;
    for (auto& x : v)
        if (x < 0.0) x = 0.0;
    return off_grid(std::move(v));
}

RewardTable RewardTable::negated() const {
    if (on_grid()) {
        std::vector<std::int64_t> n = num_;
        for (auto& x : n) x = -x;
        return from_grid(std::move(n), *denom_);
    }
    std::vector<double> v = values_;
    for (auto& x : v) x = -x;
    return off_grid(std::move(v));
}

RewardTable exact_mean(std::span<const RewardTable> tables) {
    if (tables.empty()) throw DomainError("exact_mean of no tables");
    const std::size_t n = tables.front().size();
    std::int64_t common = 1;
    for (const auto& t : tables) {
        if (!t.on_grid()) throw DomainError("exact_mean needs on-grid tables");
        if (t.size() != n) throw DimensionMismatch("exact_mean table sizes differ");
        common = common / gcd64(common, t.denom()) * t.denom();
    }
    const auto count = static_cast<std::int64_t>(tables.size());
    std::vector<std::int64_t> acc(n, 0);
    for (const auto& t : tables) {
        const std::int64_t scale = common / t.denom();
        for (std::size_t o = 0; o < n; ++o) acc[o] += t.num()[o] * scale;
    }
    return RewardTable::from_grid(std::move(acc), common * count);
}

}  // namespace ghl
