#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ghl/errors.hpp"

namespace ghl {

inline constexpr std::int64_t kDefaultGridDenom = 1000;

// Reward values live on a scaled-integer grid (value = num/denom) so that
// codebook deduplication and noise arithmetic are exact. Derived tables
// whose entries leave every representable grid (e.g. posterior means with
// irrational-looking float weights) are stored off-grid at full precision.
class RewardTable {
public:
    static RewardTable from_grid(std::vector<std::int64_t> num, std::int64_t denom);
    static RewardTable constant(std::size_t n, std::int64_t num, std::int64_t denom);
    static RewardTable off_grid(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double value(std::size_t o) const { return values_[o]; }
    const std::vector<double>& values() const { return values_; }

    bool on_grid() const { return denom_.has_value(); }
    std::int64_t denom() const;                    // throws when off-grid
    const std::vector<std::int64_t>& num() const;  // throws when off-grid

    // Entrywise max(value, 0); stays on grid when this table is on grid.
    RewardTable positive_part() const;

    RewardTable negated() const;

    // Grid points are spaced far wider than double resolution, so exact
    // double comparison of values coincides with exact rational comparison.
    bool operator==(const RewardTable& other) const { return values_ == other.values_; }
    bool lex_less(const RewardTable& other) const { return values_ < other.values_; }

private:
    RewardTable() = default;

    std::vector<double> values_;
    std::optional<std::int64_t> denom_;  // canonical (reduced) when present
    std::vector<std::int64_t> num_;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b);

// Mean of on-grid tables with equal weights, exact. All tables must share a
// size; result denominator is reduced.
RewardTable exact_mean(std::span<const RewardTable> tables);

}  // namespace ghl
