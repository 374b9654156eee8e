#pragma once

#include <stdexcept>

namespace mil {

/// Parameters for the Gauss hypergeometric series and its Euler integral.
struct Hyp2F1Params {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double z = 0.0;
    double tol = 1e-13;          // relative stopping tolerance
    long max_terms = 5'000'000;  // series term budget
};

/// Parameters for the first Appell double series.
struct AppellF1Params {
    double a = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double c = 1.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double tol = 1e-13;
    long max_terms = 5'000'000;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
};

/// A truncated series failed its stopping rule within the term budget. The
/// partial value accumulated so far rides along for diagnostics.
class SeriesConvergenceError : public std::runtime_error {
  public:
    SeriesConvergenceError(const char *what, double partial, long terms)
        : std::runtime_error(what), partial_value(partial), terms_used(terms) {}
    double partial_value;
    long terms_used;
};

/// Quadrature finished its refinement budget above the requested tolerance.
class QuadratureToleranceError : public std::runtime_error {
  public:
    QuadratureToleranceError(const char *what, QuadratureResult partial)
        : std::runtime_error(what), result(partial) {}
    QuadratureResult result;
};

/// 2F1(a,b;c;z) by direct series, |z| < 1. Stops once the relative term size
/// stays below tol for three consecutive terms (guarding alternating series
/// against a single accidentally-small term). Throws SeriesConvergenceError
/// past max_terms and std::invalid_argument for |z| >= 1 or c a nonpositive
/// integer.
double gauss_2f1(const Hyp2F1Params &params);
double gauss_2f1(double a, double b, double c, double z);

/// 2F1 via the Euler integral
///   integral_0^1 y^(b-1) (1-y)^(c-b-1) (1-zy)^(-a) dy / B(b, c-b),
/// requiring c > b > 0 and z < 1. The endpoint power singularities are removed
/// by the substitutions y = s^2 and 1-y = s^2 on the two half panels before
/// adaptive quadrature.
double euler_2f1(const Hyp2F1Params &params);

/// First Appell function F1(a,b1,b2;c;x1,x2) on the open unit bidisc, summed
/// by anti-diagonal blocks with the same three-small-blocks stopping rule.
/// When one series direction collapses (b1 = 0, b2 = 0, or a zero argument)
/// the sum reduces to a single Gauss series and is evaluated that way.
double appell_f1(const AppellF1Params &params);

/// Density of the difference of two independent arcsine-law variables at
/// x in (-1,1), x != 0: (1/pi) 2F1(1/2,1/2;1;1-x^2). The logarithmic blow-up
/// at x -> 0 is handled by a dedicated expansion branch for x^2 < 1e-3.
double beta_diff_density(double x);

/// Even moment of that difference, (2/pi) integral_0^1 x^(2n) 2F1(...) dx.
/// The logarithmically singular piece below x = sqrt(1e-3) is integrated in
/// closed form; the rest by adaptive quadrature. Exact value: C(2n,n)^2/4^(2n).
QuadratureResult moment_by_quadrature(unsigned n, double tol);

/// Even moment of T with density (1-t^2)^(p-1)/B(1/2,p) on (-1,1), by
/// quadrature; equals B(n+1/2,p)/B(1/2,p). The integrable endpoint
/// singularities for p < 1 are tamed by substituting t = 1-s^2 on the outer
/// panel.
QuadratureResult t_density_moment(unsigned n, double p, double tol);

}  // namespace mil
