#pragma once

#include <map>
#include <string>

#include "mil/rational.hpp"

namespace mil {

/// Exact half-integer, stored as twice its value.
struct HalfInteger {
    long twice_value = 0;

    static HalfInteger from_integer(long n) { return HalfInteger{2 * n}; }
    static HalfInteger half() { return HalfInteger{1}; }

    bool is_integer() const { return twice_value % 2 == 0; }
    long integer_value() const { return twice_value / 2; }
    Rational to_rational() const { return Rational(twice_value, 2); }

    friend HalfInteger operator+(HalfInteger a, HalfInteger b) {
        return HalfInteger{a.twice_value + b.twice_value};
    }
    friend bool operator==(HalfInteger a, HalfInteger b) = default;
    friend auto operator<=>(HalfInteger a, HalfInteger b) = default;
};

/// An exact number of the form sum_m q_m * pi^(m/2) with rational q_m.
///
/// pi^(1/2) is treated as transcendental over the rationals, so equality is
/// coefficient-wise and no cross-grade cancellation ever happens. The zero
/// value is the empty term map; stored coefficients are never zero.
class PiGradedValue {
  public:
    PiGradedValue() = default;

    /// A plain rational, at grade 0.
    PiGradedValue(const Rational &r) {  // NOLINT(google-explicit-constructor)
        if (!r.is_zero()) terms_[0] = r;
    }

    /// coefficient * pi^(half_exponent / 2).
    static PiGradedValue monomial(const Rational &coefficient, int half_exponent);

    static PiGradedValue zero() { return PiGradedValue(); }

    const std::map<int, Rational> &terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }

    /// True when the value is a plain rational (zero or a single grade-0 term).
    bool is_rational() const;
    /// The grade-0 rational content; throws if other grades are present.
    Rational as_rational() const;

    /// Nearest double, with pi taken to well beyond double precision.
    double approx() const;

    std::string to_string() const;

    PiGradedValue operator-() const;
    PiGradedValue &operator+=(const PiGradedValue &o);
    PiGradedValue &operator-=(const PiGradedValue &o);
    friend PiGradedValue operator+(PiGradedValue a, const PiGradedValue &b) { return a += b; }
    friend PiGradedValue operator-(PiGradedValue a, const PiGradedValue &b) { return a -= b; }
    friend PiGradedValue operator*(const PiGradedValue &a, const PiGradedValue &b);

    /// Division is exact only by a monomial divisor; dividing by a multi-term
    /// value would require symbolic quotients outside this algebra and throws
    /// std::invalid_argument. Division by zero throws as well.
    friend PiGradedValue operator/(const PiGradedValue &a, const PiGradedValue &b);

    friend bool operator==(const PiGradedValue &a, const PiGradedValue &b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const PiGradedValue &a, const PiGradedValue &b) {
        return a.terms_ != b.terms_;
    }

  private:
    void insert_term(int half_exponent, const Rational &coefficient);
    std::map<int, Rational> terms_;
};

/// Gamma at a positive half-integer argument, as an exact pi-graded value:
/// integers give (a-1)! at grade 0, half-odd arguments give the rational
/// half-integer gamma ratio times pi^(1/2). Throws for a <= 0.
PiGradedValue gamma_value(HalfInteger a);

/// Beta function at positive half-integer arguments, via the gamma product.
PiGradedValue beta_value(HalfInteger a, HalfInteger b);

/// Rational bounds on pi, 50 decimal digits tight: pi_lower() < pi < pi_upper()
/// and pi_upper() - pi_lower() = 10^-50. Used wherever an exact comparison
/// against a pi multiple is needed.
const Rational &pi_lower();
const Rational &pi_upper();

}  // namespace mil
