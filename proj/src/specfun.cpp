#include "mil/specfun.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

namespace mil {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Crossover in u = x^2 below which the z -> 1 expansion of 2F1(1/2,1/2;1;1-u)
// replaces the direct series.
constexpr double kLogBranchCut = 1e-3;

bool is_nonpositive_integer(double v) {
    return v <= 0.0 && v == std::floor(v);
}

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    bool refinable = true;
};

struct WorsePanel {
    bool operator()(const Panel &x, const Panel &y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a < y.a;  // deterministic tie-break
    }
};

/// Adaptive bisection with the 15-point Gauss-Kronrod panel rule and an
/// absolute-error target: the panel with the largest error estimate is split
/// first, until the summed estimate meets the target, every panel is at the
/// double-precision noise floor, or the panel budget runs out. Callers check
/// abs_error_estimate against what they asked for.
template <typename F>
QuadratureResult integrate_adaptive(const F &f, double a, double b, double tol) {
    QuadratureResult result;
    const double span = b - a;

    // 15-point Kronrod with the embedded 7-point Gauss rule; node tables come
    // from boost. Even abscissa indices are the Gauss points.
    const auto &xk = GK::abscissa();
    const auto &wk = GK::weights();
    const auto &wg = boost::math::quadrature::gauss<double, 7>::weights();

    auto eval_panel = [&](double lo, double hi) {
        const double mean = 0.5 * (lo + hi);
        const double scale = 0.5 * (hi - lo);
        auto on_panel = [&](double x) {
            ++result.evaluations;
            return f(mean + scale * x);
        };
        const double f0 = on_panel(0.0);
        double kronrod = f0 * wk[0];
        double gauss = f0 * wg[0];
        double l1 = std::abs(f0) * wk[0];
        for (std::size_t i = 1; i < xk.size(); ++i) {
            const double fp = on_panel(xk[i]);
            const double fm = on_panel(-xk[i]);
            kronrod += (fp + fm) * wk[i];
            l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
            if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
        }
        Panel panel;
        panel.a = lo;
        panel.b = hi;
        panel.value = scale * kronrod;
        panel.error = scale * std::abs(kronrod - gauss);
        const bool at_noise_floor =
            std::abs(kronrod - gauss) <= 8.0 * 2.2e-16 * l1;
        const bool at_width_floor = (hi - lo) <= 1e-13 * span;
        panel.refinable = !at_noise_floor && !at_width_floor;
        return panel;
    };

    constexpr int kMaxPanels = 200'000;
    std::priority_queue<Panel, std::vector<Panel>, WorsePanel> active;
    std::vector<Panel> finished;
    active.push(eval_panel(a, b));
    double total_error = active.top().error;
    int panels = 1;
    while (total_error > tol && !active.empty() && panels < kMaxPanels) {
        const Panel worst = active.top();
        active.pop();
        if (!worst.refinable) {
            finished.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = eval_panel(worst.a, mid);
        const Panel right = eval_panel(mid, worst.b);
        total_error += left.error + right.error - worst.error;
        active.push(left);
        active.push(right);
        ++panels;
    }
    while (!active.empty()) {
        finished.push_back(active.top());
        active.pop();
    }
    // Deterministic summation order regardless of refinement history.
    std::sort(finished.begin(), finished.end(),
              [](const Panel &x, const Panel &y) { return x.a < y.a; });
    for (const Panel &panel : finished) {
        result.value += panel.value;
        result.abs_error_estimate += panel.error;
    }
    return result;
}

// 2F1(1/2,1/2;1;1-u) for small u > 0 via the logarithmic connection series
//   (1/pi) sum_k [(1/2)_k / k!]^2 (d_k - ln u) u^k,
// d_0 = 4 ln 2, d_{k+1} = d_k + 2/(k+1) - 2/(k+1/2). Converges fast for
// u well inside (0,1); used for u < kLogBranchCut where the direct series
// needs tens of thousands of terms.
double hyp2f1_half_log_branch(double u) {
    const double log_u = std::log(u);
    double coeff = 1.0;             // [(1/2)_k / k!]^2
    double d = 4.0 * std::numbers::ln2;
    double sum = 0.0;
    double uk = 1.0;
    for (int k = 0; k < 64; ++k) {
        const double term = coeff * (d - log_u) * uk;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        const double kp = static_cast<double>(k);
        const double ratio = (kp + 0.5) / (kp + 1.0);
        coeff *= ratio * ratio;
        d += 2.0 / (kp + 1.0) - 2.0 / (kp + 0.5);
        uk *= u;
    }
    return sum / kPi;
}

double hyp2f1_central(double u) {
    // 2F1(1/2,1/2;1;1-u) with the branch switch at the published crossover.
    if (u < kLogBranchCut) return hyp2f1_half_log_branch(u);
    return gauss_2f1(Hyp2F1Params{0.5, 0.5, 1.0, 1.0 - u, 1e-14, 5'000'000});
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace

double gauss_2f1(const Hyp2F1Params &params) {
    const double a = params.a, b = params.b, c = params.c, z = params.z;
    if (is_nonpositive_integer(c)) {
        throw std::invalid_argument("gauss_2f1: c must not be a nonpositive integer");
    }
    if (!(std::abs(z) < 1.0)) {
        throw std::invalid_argument("gauss_2f1: series requires |z| < 1");
    }
    double term = 1.0;
    double sum = 1.0;
    int small_streak = 0;
    for (long k = 0; k < params.max_terms; ++k) {
        const double kd = static_cast<double>(k);
        term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
        sum += term;
        if (std::abs(term) < params.tol * std::abs(sum)) {
            if (++small_streak == 3) return sum;
        } else {
            small_streak = 0;
        }
        if (term == 0.0) return sum;  // a or b hit a nonpositive integer: polynomial case
    }
    throw SeriesConvergenceError("gauss_2f1: series did not converge within max_terms", sum,
                                 params.max_terms);
}

double gauss_2f1(double a, double b, double c, double z) {
    return gauss_2f1(Hyp2F1Params{a, b, c, z, 1e-13, 5'000'000});
}

double euler_2f1(const Hyp2F1Params &params) {
    const double a = params.a, b = params.b, c = params.c, z = params.z;
    if (!(c > b && b > 0.0)) {
        throw std::invalid_argument("euler_2f1 requires c > b > 0");
    }
    if (!(z < 1.0)) {
        throw std::invalid_argument("euler_2f1 requires z < 1");
    }
    const double quad_tol = std::max(params.tol * 1e-2, 1e-15);
    // y = s^2 on [0, 1/2]: the y^(b-1) endpoint power becomes s^(2b-1).
    auto lower = [&](double s) {
        const double y = s * s;
        return 2.0 * std::pow(s, 2.0 * b - 1.0) * std::pow(1.0 - y, c - b - 1.0) *
               std::pow(1.0 - z * y, -a);
    };
    // 1 - y = s^2 on [1/2, 1].
    auto upper = [&](double s) {
        const double y = 1.0 - s * s;
        return 2.0 * std::pow(s, 2.0 * (c - b) - 1.0) * std::pow(y, b - 1.0) *
               std::pow(1.0 - z * y, -a);
    };
    const double half = std::sqrt(0.5);
    const QuadratureResult lo = integrate_adaptive(lower, 0.0, half, quad_tol);
    const QuadratureResult hi = integrate_adaptive(upper, 0.0, half, quad_tol);
    return (lo.value + hi.value) * std::exp(-log_beta(b, c - b));
}

double appell_f1(const AppellF1Params &params) {
    const double a = params.a, b1 = params.b1, b2 = params.b2, c = params.c;
    const double x1 = params.x1, x2 = params.x2;
    if (is_nonpositive_integer(c)) {
        throw std::invalid_argument("appell_f1: c must not be a nonpositive integer");
    }
    if (!(std::abs(x1) < 1.0 && std::abs(x2) < 1.0)) {
        throw std::invalid_argument("appell_f1: arguments must lie in the open unit bidisc");
    }
    // Degenerate directions collapse the double sum to a Gauss series.
    if (b1 == 0.0 || x1 == 0.0) {
        return gauss_2f1(Hyp2F1Params{a, b2, c, x2, params.tol, params.max_terms});
    }
    if (b2 == 0.0 || x2 == 0.0) {
        return gauss_2f1(Hyp2F1Params{a, b1, c, x1, params.tol, params.max_terms});
    }

    // Anti-diagonal blocks m + k = d. The block anchor T(0,d) follows a Gauss
    // series recurrence in x2; walking the diagonal multiplies by the exact
    // term ratio, so no factorial or rising-factorial overflows appear.
    double sum = 0.0;
    double anchor = 1.0;  // T(0, d) = (a)_d (b2)_d x2^d / ((c)_d d!)
    long terms = 0;
    int small_streak = 0;
    for (long d = 0;; ++d) {
        double block = 0.0;
        double term = anchor;
        for (long m = 0; m <= d; ++m) {
            block += term;
            ++terms;
            if (m == d) break;
            const double md = static_cast<double>(m);
            const double kd = static_cast<double>(d - m);  // current k, stepping to k-1
            const double denom = (md + 1.0) * (b2 + kd - 1.0);
            if (denom == 0.0 || x2 == 0.0) {
                throw std::invalid_argument("appell_f1: parameters outside the supported domain");
            }
            term *= (b1 + md) * kd / denom * (x1 / x2);
        }
        sum += block;
        if (std::abs(block) < params.tol * std::abs(sum)) {
            if (++small_streak == 3) return sum;
        } else {
            small_streak = 0;
        }
        if (terms > params.max_terms) {
            throw SeriesConvergenceError("appell_f1: double series did not converge within budget",
                                         sum, terms);
        }
        const double dd = static_cast<double>(d);
        anchor *= (a + dd) * (b2 + dd) / ((c + dd) * (dd + 1.0)) * x2;
    }
}

double beta_diff_density(double x) {
    if (!(x > -1.0 && x < 1.0)) {
        throw std::invalid_argument("beta_diff_density is defined on (-1, 1)");
    }
    if (x == 0.0) {
        throw std::domain_error("beta_diff_density diverges logarithmically at x = 0");
    }
    return hyp2f1_central(x * x) / kPi;
}

QuadratureResult moment_by_quadrature(unsigned n, double tol) {
    const double split = std::sqrt(kLogBranchCut);

    // Inner piece [0, split]: integrate the expansion branch term by term.
    // For each k, integral of x^M (d_k - 2 ln x) dx with M = 2n + 2k has the
    // closed form x^(M+1) [ (d_k - 2 ln x)/(M+1) + 2/(M+1)^2 ].
    const double log_split = std::log(split);
    double inner = 0.0;
    double coeff = 1.0;
    double d = 4.0 * std::numbers::ln2;
    double split_pow = std::pow(split, 2.0 * n + 1.0);
    for (int k = 0; k < 64; ++k) {
        const double m1 = 2.0 * n + 2.0 * k + 1.0;
        const double piece = coeff * split_pow * ((d - 2.0 * log_split) / m1 + 2.0 / (m1 * m1));
        inner += piece;
        if (std::abs(piece) < 1e-18 * std::abs(inner)) break;
        const double kp = static_cast<double>(k);
        const double ratio = (kp + 0.5) / (kp + 1.0);
        coeff *= ratio * ratio;
        d += 2.0 / (kp + 1.0) - 2.0 / (kp + 0.5);
        split_pow *= split * split;
    }
    inner *= 2.0 / (kPi * kPi);

    // Outer piece [split, 1] by adaptive quadrature of the series branch.
    auto integrand = [&](double x) {
        return std::pow(x, 2.0 * n) * hyp2f1_central(x * x);
    };
    QuadratureResult outer = integrate_adaptive(integrand, split, 1.0, tol * 1e-2);
    outer.value = inner + outer.value * 2.0 / kPi;
    outer.abs_error_estimate *= 2.0 / kPi;
    if (!(outer.abs_error_estimate <= tol)) {
        throw QuadratureToleranceError("moment_by_quadrature: tolerance not met", outer);
    }
    return outer;
}

QuadratureResult t_density_moment(unsigned n, double p, double tol) {
    if (!(p > 0.0)) throw std::invalid_argument("t_density_moment requires p > 0");
    const double exponent = p - 1.0;
    // Even symmetry: twice the integral over (0,1). Inner panel is smooth;
    // the outer panel substitutes t = 1 - s^2 so the (1-t^2)^(p-1) endpoint
    // power becomes the integrable s^(2p-1).
    const double cut = 0.7;
    auto inner_f = [&](double t) {
        return std::pow(t, 2.0 * n) * std::pow(1.0 - t * t, exponent);
    };
    auto outer_f = [&](double s) {
        const double t = 1.0 - s * s;
        return 2.0 * std::pow(t, 2.0 * n) * std::pow(s, 2.0 * p - 1.0) *
               std::pow(2.0 - s * s, exponent);
    };
    const double quad_tol = tol * 1e-2;
    QuadratureResult a = integrate_adaptive(inner_f, 0.0, cut, quad_tol);
    QuadratureResult b = integrate_adaptive(outer_f, 0.0, std::sqrt(1.0 - cut), quad_tol);
    const double norm = 2.0 * std::exp(-log_beta(0.5, p));
    QuadratureResult result;
    result.value = (a.value + b.value) * norm;
    result.abs_error_estimate = (a.abs_error_estimate + b.abs_error_estimate) * norm;
    result.evaluations = a.evaluations + b.evaluations;
    if (!(result.abs_error_estimate <= tol)) {
        throw QuadratureToleranceError("t_density_moment: tolerance not met", result);
    }
    return result;
}

}  // namespace mil
