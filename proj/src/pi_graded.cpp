#include "mil/pi_graded.hpp"

#include <cmath>
#include <sstream>

namespace mil {

namespace {

// First 50 decimal digits of pi, truncated (so this underestimates pi).
constexpr const char *kPiDigits = "3.14159265358979323846264338327950288419716939937510";

Rational parse_decimal(const char *text) {
    std::string s(text);
    const auto dot = s.find('.');
    const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    BigInt den(1);
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    return Rational(BigInt(digits), den);
}

}  // namespace

const Rational &pi_lower() {
    static const Rational lo = parse_decimal(kPiDigits);
    return lo;
}

const Rational &pi_upper() {
    static const Rational hi = pi_lower() + Rational(BigInt(1), [] {
                                   BigInt d;
                                   mpz_ui_pow_ui(d.get_mpz_t(), 10, 50);
                                   return d;
                               }());
    return hi;
}

PiGradedValue PiGradedValue::monomial(const Rational &coefficient, int half_exponent) {
    PiGradedValue v;
    if (!coefficient.is_zero()) v.terms_[half_exponent] = coefficient;
    return v;
}

bool PiGradedValue::is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Rational PiGradedValue::as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational()) throw std::invalid_argument("value has nonzero pi grades");
    return terms_.begin()->second;
}

double PiGradedValue::approx() const {
    // sqrt(pi) from a 30+ digit constant; double precision is the limit anyway.
    static const double sqrt_pi = std::sqrt(3.14159265358979323846264338327950288);
    double total = 0.0;
    for (const auto &[half_exp, coeff] : terms_) {
        total += coeff.to_double() * std::pow(sqrt_pi, half_exp);
    }
    return total;
}

std::string PiGradedValue::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[half_exp, coeff] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << coeff.to_string();
        if (half_exp != 0) {
            os << "*pi^(" << half_exp << "/2)";
        }
    }
    return os.str();
}

void PiGradedValue::insert_term(int half_exponent, const Rational &coefficient) {
    auto it = terms_.find(half_exponent);
    if (it == terms_.end()) {
        if (!coefficient.is_zero()) terms_.emplace(half_exponent, coefficient);
        return;
    }
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
}

PiGradedValue PiGradedValue::operator-() const {
    PiGradedValue r;
    for (const auto &[e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

PiGradedValue &PiGradedValue::operator+=(const PiGradedValue &o) {
    for (const auto &[e, c] : o.terms_) insert_term(e, c);
    return *this;
}

PiGradedValue &PiGradedValue::operator-=(const PiGradedValue &o) {
    for (const auto &[e, c] : o.terms_) insert_term(e, -c);
    return *this;
}

PiGradedValue operator*(const PiGradedValue &a, const PiGradedValue &b) {
    PiGradedValue r;
    for (const auto &[ea, ca] : a.terms_) {
        for (const auto &[eb, cb] : b.terms_) {
            r.insert_term(ea + eb, ca * cb);
        }
    }
    return r;
}

PiGradedValue operator/(const PiGradedValue &a, const PiGradedValue &b) {
    if (b.is_zero()) throw std::invalid_argument("division by the zero value");
    if (!b.is_monomial()) {
        throw std::invalid_argument(
            "division by a multi-term pi-graded value is an unsupported symbolic quotient");
    }
    const auto &[eb, cb] = *b.terms_.begin();
    PiGradedValue r;
    for (const auto &[ea, ca] : a.terms_) {
        r.insert_term(ea - eb, ca / cb);
    }
    return r;
}

PiGradedValue gamma_value(HalfInteger a) {
    if (a.twice_value <= 0) {
        throw std::invalid_argument("gamma_value requires a positive half-integer argument");
    }
    if (a.is_integer()) {
        return PiGradedValue(Rational(factorial(static_cast<unsigned long>(a.integer_value() - 1))));
    }
    const unsigned long n = static_cast<unsigned long>((a.twice_value - 1) / 2);
    return PiGradedValue::monomial(gamma_ratio_half(n), 1);
}

PiGradedValue beta_value(HalfInteger a, HalfInteger b) {
    return gamma_value(a) * gamma_value(b) / gamma_value(a + b);
}

}  // namespace mil
