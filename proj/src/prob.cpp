#include "ghl/prob.hpp"

#include <cmath>
#include <cstdio>

namespace ghl {

ExtReal::ExtReal(double v) : state_(State::Finite), value_(v) {
    if (!std::isfinite(v)) {
        throw DomainError("ExtReal constructed from a non-finite double");
    }
}

double ExtReal::value() const {
    if (state_ != State::Finite) {
        throw DomainError("ExtReal::value() on an infinity");
    }
    return value_;
}

double ExtReal::as_double() const {
    switch (state_) {
        case State::PosInf: return std::numeric_limits<double>::infinity();
        case State::NegInf: return -std::numeric_limits<double>::infinity();
        default: return value_;
    }
}

ExtReal ExtReal::operator-(const ExtReal& rhs) const {
    if (is_finite() && rhs.is_finite()) return ExtReal(value_ - rhs.value_);
    if (is_pos_inf() && rhs.is_pos_inf()) {
        throw DomainError("inf - inf is undefined");
    }
    if (is_neg_inf() && rhs.is_neg_inf()) {
        throw DomainError("-inf - -inf is undefined");
    }
    if (is_pos_inf() || rhs.is_neg_inf()) return infinity();
    return neg_infinity();
}

ExtReal ExtReal::operator+(const ExtReal& rhs) const {
    if (is_finite() && rhs.is_finite()) return ExtReal(value_ + rhs.value_);
    if ((is_pos_inf() && rhs.is_neg_inf()) || (is_neg_inf() && rhs.is_pos_inf())) {
        throw DomainError("inf + -inf is undefined");
    }
    if (is_pos_inf() || rhs.is_pos_inf()) return infinity();
    return neg_infinity();
}

std::partial_ordering ExtReal::operator<=>(const ExtReal& rhs) const {
    auto rank = [](const ExtReal& e) { return e.is_neg_inf() ? -1 : e.is_pos_inf() ? 1 : 0; };
    int a = rank(*this), b = rank(rhs);
    if (a != b) return a <=> b;
    if (a != 0) return std::partial_ordering::equivalent;
    return value_ <=> rhs.value_;
}

bool ExtReal::operator==(const ExtReal& rhs) const {
    return (*this <=> rhs) == std::partial_ordering::equivalent;
}

std::string ExtReal::str() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
}

Pmf::Pmf(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw InvalidPmf("empty support");
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw InvalidPmf("negative or NaN entry");
        total += p;
    }
    if (std::abs(total - 1.0) > kPmfTolerance) {
        throw InvalidPmf("entries sum to " + std::to_string(total));
    }
}

Pmf Pmf::uniform(std::size_t n) {
    if (n == 0) throw InvalidPmf("empty support");
    return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Pmf Pmf::point_mass(std::size_t n, std::size_t at) {
    if (at >= n) throw InvalidPmf("point mass index out of range");
    std::vector<double> p(n, 0.0);
    p[at] = 1.0;
    return Pmf(std::move(p));
}

JointPmf::JointPmf(std::size_t nx, std::size_t ny, std::vector<double> table)
    : nx_(nx), ny_(ny), table_(std::move(table)) {
    if (nx_ == 0 || ny_ == 0) throw InvalidPmf("empty joint support");
    if (table_.size() != nx_ * ny_) throw InvalidPmf("joint table size mismatch");
    double total = 0.0;
    for (double p : table_) {
        if (!(p >= 0.0)) throw InvalidPmf("negative or NaN joint entry");
        total += p;
    }
    if (std::abs(total - 1.0) > kPmfTolerance) {
        throw InvalidPmf("joint entries sum to " + std::to_string(total));
    }
}

Pmf JointPmf::marginal_x() const {
    std::vector<double> m(nx_, 0.0);
    for (std::size_t x = 0; x < nx_; ++x)
        for (std::size_t y = 0; y < ny_; ++y) m[x] += at(x, y);
    return Pmf(std::move(m));
}

Pmf JointPmf::marginal_y() const {
    std::vector<double> m(ny_, 0.0);
    for (std::size_t x = 0; x < nx_; ++x)
        for (std::size_t y = 0; y < ny_; ++y) m[y] += at(x, y);
    return Pmf(std::move(m));
}

double entropy_bits(const Pmf& p) {
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double pi = p[i];
        if (pi > 0.0) h -= pi * std::log2(pi);
    }
    return h < 0.0 ? 0.0 : h;
}

ExtReal kl_divergence_bits(const Pmf& p, const Pmf& q) {
    if (p.size() != q.size()) {
        throw SupportMismatch("kl_divergence on supports of different size");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return ExtReal::infinity();
        d += p[i] * std::log2(p[i] / q[i]);
    }
    return ExtReal(d < 0.0 && d > -1e-12 ? 0.0 : d);
}

ExtReal kl_bernoulli_bits(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
        throw DomainError("Bernoulli parameters must lie in [0,1]");
    }
    double d = 0.0;
    if (p > 0.0) {
        if (q == 0.0) return ExtReal::infinity();
        d += p * std::log2(p / q);
    }
    if (p < 1.0) {
        if (q == 1.0) return ExtReal::infinity();
        d += (1.0 - p) * std::log2((1.0 - p) / (1.0 - q));
    }
    return ExtReal(d < 0.0 && d > -1e-12 ? 0.0 : d);
}

double mutual_information_bits(const JointPmf& joint) {
    Pmf mx = joint.marginal_x();
    Pmf my = joint.marginal_y();
    double info = 0.0;
    for (std::size_t x = 0; x < joint.nx(); ++x) {
        for (std::size_t y = 0; y < joint.ny(); ++y) {
            double j = joint.at(x, y);
            if (j > 0.0) info += j * std::log2(j / (mx[x] * my[y]));
        }
    }
    if (info < 0.0) {
        if (info < -1e-12) throw InvalidPmf("mutual information residue below -1e-12");
        info = 0.0;
    }
    return info;
}

std::vector<double> conditional_mean(const JointPmf& joint,
                                     std::span<const double> values_x) {
    if (values_x.size() != joint.nx()) {
        throw SupportMismatch("conditional_mean values length mismatch");
    }
    Pmf my = joint.marginal_y();
    std::vector<double> out(joint.ny(), 0.0);
    for (std::size_t y = 0; y < joint.ny(); ++y) {
        if (my[y] <= 0.0) {
            throw ZeroMarginal("y = " + std::to_string(y) + " has zero mass");
        }
        double acc = 0.0;
        for (std::size_t x = 0; x < joint.nx(); ++x) {
            acc += values_x[x] * joint.at(x, y);
        }
        out[y] = acc / my[y];
    }
    return out;
}

}  // namespace ghl
