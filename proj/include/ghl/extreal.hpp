#pragma once

#include <compare>
#include <string>

#include "ghl/errors.hpp"

namespace ghl {

// Extended real: a finite double or a signed infinity. Infinities are carried
// as explicit states, never as IEEE sentinels flowing through arithmetic.
class ExtReal {
public:
    ExtReal() : state_(State::Finite), value_(0.0) {}
    ExtReal(double v);  // implicit; requires v finite

    static ExtReal infinity() { return ExtReal(State::PosInf); }
    static ExtReal neg_infinity() { return ExtReal(State::NegInf); }

    bool is_finite() const { return state_ == State::Finite; }
    bool is_pos_inf() const { return state_ == State::PosInf; }
    bool is_neg_inf() const { return state_ == State::NegInf; }

    // Finite value; throws DomainError on an infinity.
    double value() const;

    // IEEE image, for serialization boundaries only.
    double as_double() const;

    ExtReal operator-(const ExtReal& rhs) const;
    ExtReal operator+(const ExtReal& rhs) const;

    std::partial_ordering operator<=>(const ExtReal& rhs) const;
    bool operator==(const ExtReal& rhs) const;

    std::string str() const;

private:
    enum class State { Finite, PosInf, NegInf };
    explicit ExtReal(State s) : state_(s), value_(0.0) {}

    State state_;
    double value_;
};

}  // namespace ghl
