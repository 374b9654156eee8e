#include "mil/identities.hpp"

#include <array>
#include <stdexcept>

namespace mil {

namespace {

constexpr std::array<IdentityId, 12> kAllIds = {
    IdentityId::CentralConvolution,  IdentityId::AlternatingConvolution,
    IdentityId::MultiConvolution,    IdentityId::Gould660,
    IdentityId::GammaEvenMoment,     IdentityId::GammaHalfRatio,
    IdentityId::Brychkov,            IdentityId::PEqualsN,
    IdentityId::BetaMoment,          IdentityId::HalfBetaBinomial,
    IdentityId::VignatMollFactorization, IdentityId::Remark2Series,
};

constexpr std::array<std::string_view, 12> kTags = {
    "central-convolution", "alternating-convolution", "multi-convolution",
    "gould-6.60",          "gamma-even-moment",       "gamma-half-ratio",
    "brychkov",            "p-equals-n",              "beta-moment",
    "half-beta-binomial",  "vignat-moll-factorization", "remark2-series",
};

BigInt pow2(unsigned long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

BigInt pow4(unsigned long e) { return pow2(2 * e); }

// Gamma at a positive integer argument.
BigInt int_gamma(unsigned long m) { return factorial(m - 1); }

Rational require_p(const std::optional<Rational> &p, IdentityId id) {
    if (!p) {
        throw std::invalid_argument("identity '" + std::string(identity_tag(id)) +
                                    "' requires the parameter p");
    }
    return *p;
}

unsigned long require_positive_integer(const Rational &value, const char *what) {
    if (value.sign() <= 0 || value.denominator() != 1 || !value.numerator().fits_ulong_p()) {
        throw std::invalid_argument(std::string(what) + " must be a positive integer");
    }
    return value.numerator().get_ui();
}

PiGradedValue central_convolution_side(Side side, unsigned n) {
    if (side == Side::Rhs) return PiGradedValue(Rational(pow4(n)));
    BigInt sum(0);
    for (unsigned long k = 0; k <= n; ++k) {
        sum += binomial(2 * k, static_cast<long>(k)) *
               binomial(2 * (n - k), static_cast<long>(n - k));
    }
    return PiGradedValue(Rational(sum));
}

PiGradedValue alternating_convolution_side(Side side, unsigned n) {
    if (side == Side::Lhs) {
        BigInt sum(0);
        for (unsigned long k = 0; k <= n; ++k) {
            BigInt term = binomial(2 * k, static_cast<long>(k)) *
                          binomial(2 * (n - k), static_cast<long>(n - k));
            if (k % 2 == 1) term = -term;
            sum += term;
        }
        return PiGradedValue(Rational(sum));
    }
    if (n % 2 != 0) return PiGradedValue::zero();
    return PiGradedValue(Rational(pow2(n) * binomial(n, static_cast<long>(n / 2))));
}

PiGradedValue multi_convolution_side(Side side, unsigned n, unsigned long m) {
    if (side == Side::Lhs) {
        // Direct enumeration over weak compositions; the central binomials are
        // cached per part size.
        std::vector<BigInt> central(n + 1);
        for (unsigned long k = 0; k <= n; ++k) {
            central[k] = binomial(2 * k, static_cast<long>(k));
        }
        BigInt sum(0);
        for_each_composition(n, static_cast<unsigned>(m), [&](std::span<const unsigned> parts) {
            BigInt product(1);
            for (unsigned part : parts) product *= central[part];
            sum += product;
        });
        return PiGradedValue(Rational(sum));
    }
    // 4^n/n! * (m/2)(m/2+1)...(m/2+n-1); half-integer gamma content cancels.
    Rational rhs = Rational(pow4(n)) / Rational(factorial(n));
    rhs *= pochhammer(Rational(static_cast<long>(m), 2), n);
    return PiGradedValue(rhs);
}

PiGradedValue gould_side(Side side, unsigned n) {
    if (side == Side::Rhs) {
        const BigInt c = binomial(2 * n, static_cast<long>(n));
        return PiGradedValue(Rational(c * c));
    }
    BigInt sum(0);
    for (unsigned long k = 0; k <= 2 * n; ++k) {
        BigInt term = binomial(2 * n, static_cast<long>(k)) *
                      binomial(2 * k, static_cast<long>(k)) *
                      binomial(4 * n - 2 * k, static_cast<long>(2 * n - k));
        if (k % 2 == 1) term = -term;
        sum += term;
    }
    return PiGradedValue(Rational(sum));
}

PiGradedValue gamma_even_moment_side(Side side, unsigned n, const Rational &p) {
    if (side == Side::Lhs) {
        Rational sum(0);
        for (unsigned long k = 0; k <= n; ++k) {
            sum += Rational(binomial(2 * n, static_cast<long>(2 * k))) * pochhammer(p, 2 * k) *
                   pochhammer(p, 2 * (n - k));
        }
        return PiGradedValue(sum);
    }
    Rational rhs = pochhammer(p * Rational(2), 2 * n) +
                   pochhammer(p, n) * Rational(factorial(2 * n)) / Rational(factorial(n));
    return PiGradedValue(rhs * Rational(1, 2));
}

PiGradedValue gamma_half_ratio_side(Side side, unsigned n) {
    if (side == Side::Lhs) return PiGradedValue(gamma_ratio_half(n));
    return PiGradedValue(Rational(binomial(2 * n, static_cast<long>(n)) * factorial(n)) /
                         Rational(pow4(n)));
}

PiGradedValue brychkov_side(Side side, unsigned n) {
    if (side == Side::Lhs) {
        BigInt sum(0);
        for (unsigned long k = 0; k <= n; ++k) {
            sum += binomial(4 * k, static_cast<long>(2 * k)) *
                   binomial(4 * (n - k), static_cast<long>(2 * (n - k)));
        }
        return PiGradedValue(Rational(sum));
    }
    // 2^(4n-1) + 2^(2n-1) C(2n,n); at n = 0 the halves are fractional but the
    // sum is still exact, so work in rationals.
    Rational rhs = Rational(pow4(2 * n)) * Rational(1, 2) +
                   Rational(pow4(n) * binomial(2 * n, static_cast<long>(n))) * Rational(1, 2);
    return PiGradedValue(rhs);
}

PiGradedValue p_equals_n_side(Side side, unsigned n) {
    if (n == 0) throw std::invalid_argument("p-equals-n requires n >= 1");
    if (side == Side::Lhs) {
        BigInt sum(0);
        for (unsigned long k = 0; k <= n; ++k) {
            sum += binomial(2 * n, static_cast<long>(2 * k)) * int_gamma(n + 2 * k) *
                   int_gamma(3 * n - 2 * k);
        }
        return PiGradedValue(Rational(sum));
    }
    const BigInt gn = int_gamma(n);
    const BigInt g2n = int_gamma(2 * n);
    const Rational rhs =
        Rational(gn * gn) * Rational(1, 2) *
        (Rational(int_gamma(4 * n)) / Rational(g2n) + Rational(2) * Rational(g2n * g2n) / Rational(gn * gn));
    return PiGradedValue(rhs);
}

PiGradedValue beta_moment_side(Side side, unsigned n, const Rational &p) {
    if (side == Side::Lhs) {
        // Beta ratios reduce to rising-factorial ratios: B(p+k,p)/B(p,p) = (p,k)/(2p,k).
        Rational sum(0);
        Rational weight(1);  // (-2)^k
        Rational ratio(1);   // (p,k)/(2p,k)
        for (unsigned long k = 0; k <= 2 * n; ++k) {
            sum += weight * Rational(binomial(2 * n, static_cast<long>(k))) * ratio;
            weight *= Rational(-2);
            ratio *= (p + Rational(static_cast<long>(k))) /
                     (p * Rational(2) + Rational(static_cast<long>(k)));
        }
        return PiGradedValue(sum);
    }
    return PiGradedValue(pochhammer(Rational(1, 2), n) / pochhammer(p + Rational(1, 2), n));
}

PiGradedValue vignat_moll_side(Side side, unsigned n) {
    if (side == Side::Lhs) {
        // Even moment through the generating-function route.
        return PiGradedValue(Rational(factorial(2 * n)) * mgf_even_coefficient(Rational(1, 2), n));
    }
    // Factorized route: the 2n-th moment of the sum (a unit-shape gamma pair)
    // times the arcsine even moment C(2n,n)/4^n.
    const Rational sum_moment = Rational(factorial(2 * n));
    const Rational arcsine_moment =
        Rational(binomial(2 * n, static_cast<long>(n))) / Rational(pow4(n));
    return PiGradedValue(sum_moment * arcsine_moment);
}

}  // namespace

std::span<const IdentityId> all_identities() { return kAllIds; }

std::string_view identity_tag(IdentityId id) { return kTags[static_cast<std::size_t>(id)]; }

IdentityId identity_from_tag(std::string_view tag) {
    for (std::size_t i = 0; i < kTags.size(); ++i) {
        if (kTags[i] == tag) return kAllIds[i];
    }
    throw std::invalid_argument("unknown identity: " + std::string(tag));
}

bool identity_requires_parameter(IdentityId id) {
    return id == IdentityId::GammaEvenMoment || id == IdentityId::BetaMoment ||
           id == IdentityId::MultiConvolution;
}

std::string_view identity_note(IdentityId id) {
    switch (id) {
        case IdentityId::CentralConvolution:
            return "summation starts at k = 0; starting at k = 1 instead gives 4^n - C(2n,n)";
        case IdentityId::Remark2Series:
            return "each term carries a 1/k! factor; without it the term ratio grows without "
                   "bound and the series diverges";
        default:
            return {};
    }
}

PiGradedValue eval_side(IdentityId id, Side side, unsigned n, const std::optional<Rational> &p) {
    switch (id) {
        case IdentityId::CentralConvolution:
            return central_convolution_side(side, n);
        case IdentityId::AlternatingConvolution:
            return alternating_convolution_side(side, n);
        case IdentityId::MultiConvolution: {
            const unsigned long m = require_positive_integer(require_p(p, id), "tuple length m");
            return multi_convolution_side(side, n, m);
        }
        case IdentityId::Gould660:
            return gould_side(side, n);
        case IdentityId::GammaEvenMoment: {
            const Rational pp = require_p(p, id);
            if (pp.sign() <= 0) throw std::invalid_argument("gamma-even-moment requires p > 0");
            return gamma_even_moment_side(side, n, pp);
        }
        case IdentityId::GammaHalfRatio:
            return gamma_half_ratio_side(side, n);
        case IdentityId::Brychkov:
            return brychkov_side(side, n);
        case IdentityId::PEqualsN:
            return p_equals_n_side(side, n);
        case IdentityId::BetaMoment: {
            const Rational pp = require_p(p, id);
            if (pp.sign() <= 0) throw std::invalid_argument("beta-moment requires p > 0");
            return beta_moment_side(side, n, pp);
        }
        case IdentityId::HalfBetaBinomial: {
            if (side == Side::Rhs) {
                return PiGradedValue(Rational(binomial(2 * n, static_cast<long>(n))));
            }
            BigInt sum(0);
            for (unsigned long k = 0; k <= 2 * n; ++k) {
                BigInt term = binomial(2 * n, static_cast<long>(k)) *
                              binomial(2 * k, static_cast<long>(k)) * pow2(2 * n - k);
                if (k % 2 == 1) term = -term;
                sum += term;
            }
            return PiGradedValue(Rational(sum));
        }
        case IdentityId::VignatMollFactorization:
            return vignat_moll_side(side, n);
        case IdentityId::Remark2Series:
            throw std::invalid_argument(
                "remark2-series has no finite closed sides; use series_partial_sum");
    }
    throw std::invalid_argument("unknown identity id");
}

IdentityReport verify(IdentityId id, unsigned n, const std::optional<Rational> &p) {
    IdentityReport report;
    report.id = id;
    report.n = n;
    report.p = p;
    report.lhs = eval_side(id, Side::Lhs, n, p);
    report.rhs = eval_side(id, Side::Rhs, n, p);
    report.residual = report.lhs - report.rhs;
    report.equal = report.residual.is_zero();
    return report;
}

std::vector<IdentityReport> verify_in_p(IdentityId id, unsigned n) {
    if (id != IdentityId::GammaEvenMoment && id != IdentityId::BetaMoment) {
        throw std::invalid_argument("verify_in_p applies to the identities parametric in p");
    }
    if (n == 0) throw std::invalid_argument("verify_in_p requires n >= 1");
    std::vector<IdentityReport> reports;
    const unsigned points = 8 * n + 4;
    reports.reserve(points);
    for (unsigned j = 0; j < points; ++j) {
        // p_j = j + 1/3: never integral or half-integral, so every rising
        // factorial in sight is nonzero.
        const Rational pj = Rational(static_cast<long>(j)) + Rational(1, 3);
        reports.push_back(verify(id, n, pj));
    }
    return reports;
}

void for_each_composition(unsigned n, unsigned m,
                          const std::function<void(std::span<const unsigned>)> &visit) {
    if (m == 0) throw std::invalid_argument("compositions need at least one part");
    std::vector<unsigned> parts(m, 0);
    // Lexicographic descent: place every split of the remainder at each slot.
    auto recurse = [&](auto &&self, unsigned slot, unsigned remaining) -> void {
        if (slot == m - 1) {
            parts[slot] = remaining;
            visit(parts);
            return;
        }
        for (unsigned v = 0; v <= remaining; ++v) {
            parts[slot] = v;
            self(self, slot + 1, remaining - v);
        }
    };
    recurse(recurse, 0, n);
}

BigInt composition_count(unsigned n, unsigned m) {
    return binomial(n + m - 1, static_cast<long>(m - 1));
}

Rational series_target_content(unsigned n) {
    const BigInt c = binomial(2 * n, static_cast<long>(n));
    return Rational(c * c) / Rational(pow4(2 * n));
}

SeriesTally series_partial_sum(unsigned n, long terms) {
    if (terms < 1) throw std::invalid_argument("series needs at least one term");
    SeriesTally tally;
    tally.n = n;
    tally.terms_used = terms;

    // Raw first term: (1/2,0)^2 G(n+1/2) / (0! G(n+3/2)) = 1/(n+1/2); the
    // sqrt(pi) content of the gamma pair cancels. Normalizing by the target
    // content makes the limit pi for every n.
    const Rational content = series_target_content(n);
    Rational term = Rational(2, 2 * static_cast<long>(n) + 1) / content;
    Rational sum(0);
    for (long k = 1; k <= terms; ++k) {
        sum += term;
        if (k < terms) {
            // term_k / term_{k-1} = (k - 1/2)^2 / (k (k + n + 1/2))
            const long kk = k;
            term *= Rational((2 * kk - 1) * (2 * kk - 1), 4 * kk) *
                    Rational(2, 2 * kk + 2 * static_cast<long>(n) + 1);
        }
    }
    tally.partial_sum = sum;
    tally.last_term = term;
    tally.tail_bound =
        term * Rational(terms + 1) / (Rational(static_cast<long>(n)) + Rational(1, 2));
    return tally;
}

bool series_brackets_pi(const SeriesTally &tally) {
    return tally.partial_sum <= pi_lower() &&
           pi_upper() <= tally.partial_sum + tally.tail_bound;
}

}  // namespace mil
