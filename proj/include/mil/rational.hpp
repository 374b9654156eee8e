#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mil {

/// Arbitrary-precision signed integer (GMP-backed).
using BigInt = mpz_class;

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator. Thin value-semantics wrapper around GMP's mpq_t.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}             // NOLINT(google-explicit-constructor)
    Rational(const BigInt &n) : q_(n) {}    // NOLINT(google-explicit-constructor)
    Rational(long num, long den) : q_(num, den) { normalize(); }
    Rational(const BigInt &num, const BigInt &den) : q_(num, den) { normalize(); }

    /// Parses "a/b" or a plain integer. Throws std::invalid_argument on
    /// malformed input or a zero denominator.
    static Rational parse(std::string_view text);

    BigInt numerator() const { return BigInt(mpq_numref(q_.get_mpq_t())); }
    BigInt denominator() const { return BigInt(mpq_denref(q_.get_mpq_t())); }

    bool is_zero() const { return mpq_sgn(q_.get_mpq_t()) == 0; }
    int sign() const { return mpq_sgn(q_.get_mpq_t()); }

    /// Renders as "num/den", denominator included even when it is 1, so the
    /// textual form is lossless and unambiguous.
    std::string to_fraction_string() const;
    /// Renders as GMP canonical text: "num" when den == 1, else "num/den".
    std::string to_string() const;

    double to_double() const { return mpq_get_d(q_.get_mpq_t()); }

    Rational operator-() const;
    Rational &operator+=(const Rational &o) { q_ += o.q_; return *this; }
    Rational &operator-=(const Rational &o) { q_ -= o.q_; return *this; }
    Rational &operator*=(const Rational &o) { q_ *= o.q_; return *this; }
    Rational &operator/=(const Rational &o);

    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }

    friend bool operator==(const Rational &a, const Rational &b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational &a, const Rational &b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational &a, const Rational &b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational &a, const Rational &b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational &a, const Rational &b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational &a, const Rational &b) { return a.q_ >= b.q_; }

    friend std::ostream &operator<<(std::ostream &os, const Rational &r);

  private:
    void normalize();
    mpq_class q_;
};

/// C(n, k). Returns 0 for k < 0 or k > n, matching the usual summation
/// convention for out-of-range indices.
BigInt binomial(unsigned long n, long k);

/// n!.
BigInt factorial(unsigned long n);

/// Rising factorial a(a+1)...(a+m-1); 1 for m == 0.
Rational pochhammer(const Rational &a, unsigned long m);

/// The rational value of the half-integer gamma ratio at offset n:
/// (1/2)(3/2)...(n - 1/2), i.e. the rising factorial of 1/2 of length n.
Rational gamma_ratio_half(unsigned long n);

/// Coefficient of t^(2n) in the expansion of (1 - t^2)^(-p), p > 0.
/// Equals pochhammer(p, n) / n!. Throws std::invalid_argument for p <= 0.
Rational mgf_even_coefficient(const Rational &p, unsigned long n);

}  // namespace mil
