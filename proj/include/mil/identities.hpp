#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mil/pi_graded.hpp"
#include "mil/rational.hpp"

namespace mil {

/// The closed catalogue of verified identities.
enum class IdentityId {
    CentralConvolution,       // sum C(2k,k)C(2n-2k,n-k) = 4^n
    AlternatingConvolution,   // alternating variant: 2^n C(n,n/2) for even n, 0 for odd
    MultiConvolution,         // m-fold convolution of central binomials
    Gould660,                 // sum (-1)^k C(2n,k)C(2k,k)C(4n-2k,2n-k) = C(2n,n)^2
    GammaEvenMoment,          // parametric gamma-moment identity in p
    GammaHalfRatio,           // rising half-factorial vs C(2n,n) n!/4^n
    Brychkov,                 // sum C(4k,2k)C(4n-4k,2n-2k) = 2^(4n-1)+2^(2n-1)C(2n,n)
    PEqualsN,                 // integer-gamma special case of the moment identity
    BetaMoment,               // parametric beta-moment identity in p
    HalfBetaBinomial,         // sum (-1)^k C(2n,k)C(2k,k)2^(2n-k) = C(2n,n)
    VignatMollFactorization,  // even moments via MGF vs product factorization
    Remark2Series,            // the infinite series summing to a pi multiple
};

/// All identity ids, in catalogue order.
std::span<const IdentityId> all_identities();

/// Stable text tag (e.g. "central-convolution").
std::string_view identity_tag(IdentityId id);

/// Inverse of identity_tag. Throws std::invalid_argument for unknown tags.
IdentityId identity_from_tag(std::string_view tag);

/// True for the identities parametric in p (the optional argument carries the
/// tuple length m, a positive integer, for MultiConvolution).
bool identity_requires_parameter(IdentityId id);

/// A caveat worth surfacing with every report for this identity, or empty.
/// Used for conventions that differ from common printed forms.
std::string_view identity_note(IdentityId id);

enum class Side { Lhs, Rhs };

struct IdentityReport {
    IdentityId id;
    unsigned n = 0;
    std::optional<Rational> p;
    PiGradedValue lhs;
    PiGradedValue rhs;
    PiGradedValue residual;  // lhs - rhs
    bool equal = false;      // residual is exactly the zero value
};

/// Exact evaluation of one side of a finite identity. Gamma ratios are
/// rewritten as rising factorials first, so the result is exact for every
/// positive rational parameter. Remark2Series has no finite closed sides and
/// is rejected; use series_partial_sum.
PiGradedValue eval_side(IdentityId id, Side side, unsigned n,
                        const std::optional<Rational> &p = std::nullopt);

/// Evaluates both sides exactly and reports coefficient-wise equality.
IdentityReport verify(IdentityId id, unsigned n, const std::optional<Rational> &p = std::nullopt);

/// Multipoint certification of an identity parametric in p. Both sides are
/// rational functions of p of total degree at most 4n; exact agreement at the
/// 8n+4 points p_j = j + 1/3 (j = 0..8n+3) certifies the identity as a
/// rational-function identity. Returns one report per point.
std::vector<IdentityReport> verify_in_p(IdentityId id, unsigned n);

/// Visits every weak composition of n into m nonnegative parts exactly once.
void for_each_composition(unsigned n, unsigned m,
                          const std::function<void(std::span<const unsigned>)> &visit);

/// Number of weak compositions of n into m parts: C(n+m-1, m-1).
BigInt composition_count(unsigned n, unsigned m);

/// Partial-sum state of the series whose value is pi, in normalized units:
/// every field is divided by the rational target content C(2n,n)^2/4^(2n), so
/// partial_sum increases toward pi regardless of n.
struct SeriesTally {
    unsigned n = 0;
    long terms_used = 0;
    Rational partial_sum;  // strictly increasing in terms_used; limit is pi
    Rational last_term;    // the terms_used-th term, normalized
    Rational tail_bound;   // proven bound on the remaining tail, normalized
};

/// Sums the first K terms of the convergent series
///   sum_k (1/2,k)^2 * G(n+1/2) / (k! * G(n+k+3/2))  =  pi * C(2n,n)^2 / 4^(2n)
/// (G denoting gamma), exactly. Note the 1/k! in each term: without it the
/// term ratio grows without bound and the series diverges. The tail bound is
/// last_term * (K+1)/(n+1/2), an integral-comparison estimate valid in the
/// polynomially-decaying regime.
SeriesTally series_partial_sum(unsigned n, long terms);

/// The rational content C(2n,n)^2/4^(2n) of the series target; the tally's
/// fields times this content recover the raw partial sums.
Rational series_target_content(unsigned n);

/// Exact bracket test: partial_sum <= pi <= partial_sum + tail_bound, decided
/// with the 50-digit rational enclosure of pi.
bool series_brackets_pi(const SeriesTally &tally);

}  // namespace mil
