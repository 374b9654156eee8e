#include "mil/rational.hpp"

#include <cctype>
#include <ostream>

namespace mil {

void Rational::normalize() {
    if (mpz_sgn(mpq_denref(q_.get_mpq_t())) == 0) {
        throw std::invalid_argument("rational with zero denominator");
    }
    q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::string num;
    std::string den = "1";
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        num.assign(text);
    } else {
        num.assign(text.substr(0, slash));
        den.assign(text.substr(slash + 1));
    }
    auto valid_int = [](const std::string &s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        }
        return true;
    };
    if (!valid_int(num) || !valid_int(den)) {
        throw std::invalid_argument("malformed rational literal: expected \"a/b\" or integer");
    }
    if (num[0] == '+') num.erase(0, 1);  // mpz rejects an explicit plus
    if (den[0] == '+') den.erase(0, 1);
    return Rational(BigInt(num), BigInt(den));
}

std::string Rational::to_fraction_string() const {
    return numerator().get_str() + "/" + denominator().get_str();
}

std::string Rational::to_string() const { return q_.get_str(); }

Rational Rational::operator-() const {
    Rational r;
    r.q_ = -q_;
    return r;
}

Rational &Rational::operator/=(const Rational &o) {
    if (o.is_zero()) throw std::invalid_argument("rational division by zero");
    q_ /= o.q_;
    return *this;
}

std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.to_string(); }

BigInt binomial(unsigned long n, long k) {
    if (k < 0 || static_cast<unsigned long>(k) > n) return BigInt(0);
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, static_cast<unsigned long>(k));
    return r;
}

BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Rational pochhammer(const Rational &a, unsigned long m) {
    Rational result(1);
    Rational term = a;
    for (unsigned long i = 0; i < m; ++i) {
        result *= term;
        term += Rational(1);
    }
    return result;
}

Rational gamma_ratio_half(unsigned long n) { return pochhammer(Rational(1, 2), n); }

Rational mgf_even_coefficient(const Rational &p, unsigned long n) {
    if (p.sign() <= 0) throw std::invalid_argument("mgf_even_coefficient requires p > 0");
    return pochhammer(p, n) / Rational(factorial(n));
}

}  // namespace mil
