#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ghl/errors.hpp"
#include "ghl/extreal.hpp"

namespace ghl {

inline constexpr double kPmfTolerance = 1e-9;

// Probability mass function on an indexed finite support.
class Pmf {
public:
    explicit Pmf(std::vector<double> probs);

    static Pmf uniform(std::size_t n);
    static Pmf point_mass(std::size_t n, std::size_t at);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    bool operator==(const Pmf& other) const { return probs_ == other.probs_; }

private:
    std::vector<double> probs_;
};

// Joint law over a product of two finite supports, row-major in (x, y).
class JointPmf {
public:
    JointPmf(std::size_t nx, std::size_t ny, std::vector<double> table);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double at(std::size_t x, std::size_t y) const { return table_[x * ny_ + y]; }

    Pmf marginal_x() const;
    Pmf marginal_y() const;
    const std::vector<double>& table() const { return table_; }

private:
    std::size_t nx_, ny_;
    std::vector<double> table_;
};

// Shannon entropy in bits; zero-probability terms contribute nothing.
double entropy_bits(const Pmf& p);

// KL divergence in bits; +inf when p puts mass where q has none.
ExtReal kl_divergence_bits(const Pmf& p, const Pmf& q);

// KL divergence between Bernoulli(p) and Bernoulli(q), in bits.
ExtReal kl_bernoulli_bits(double p, double q);

// Mutual information of the joint, in bits. Tiny negative rounding
// residue (within 1e-12) is clamped to zero.
double mutual_information_bits(const JointPmf& joint);

// out[y] = E[values(X) | Y = y]. Every y must carry positive marginal mass.
std::vector<double> conditional_mean(const JointPmf& joint,
                                     std::span<const double> values_x);

}  // namespace ghl
