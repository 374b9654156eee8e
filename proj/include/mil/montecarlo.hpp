#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "mil/rational.hpp"

namespace mil {

/// Names a reproducible random stream. Equal (seed, stream_id) pairs always
/// produce the same draw sequence; distinct stream_ids select statistically
/// independent generator streams (distinct PCG increments).
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    /// Derives a disjoint child stream: the lane index is folded into the
    /// stream id with the SplitMix64 finalizer, so child streams never
    /// collide for lanes below 2^32.
    RngStream split(std::uint64_t lane) const;
};

/// PCG64 (XSL-RR variant): a 128-bit LCG state with the stream id selecting
/// the increment.
class Pcg64 {
  public:
    explicit Pcg64(RngStream stream);

    std::uint64_t next_u64();
    /// Uniform draw strictly inside (0, 1).
    double uniform01();
    /// Standard normal via the polar rejection method.
    double normal();

  private:
    unsigned __int128 state_;
    unsigned __int128 inc_;
};

/// One draw from the unit-scale gamma law with shape p > 0. Uses the
/// squeeze-accepted rejection method for p >= 1 and the power-of-uniform
/// boost through shape p+1 below that.
double sample_gamma(double p, Pcg64 &rng);

/// One draw from the beta law on (0,1) via the two-gamma ratio; the symmetric
/// half-half case short-circuits to the arcsine form sin^2(pi U / 2).
double sample_beta(double a, double b, Pcg64 &rng);

/// One draw on (-1,1) with density 1/(pi sqrt(1-y^2)).
double sample_arcsine(Pcg64 &rng);

enum class StatisticId {
    GammaDiff,      // (X1 - X2)^(2n), X_i gamma(p)
    TRatio,         // ((X1 - X2)/(X1 + X2))^(2n)
    BetaDiff,       // (Y1 - Y2)^(2n), Y_i beta(1/2,1/2)
    GammaSum,       // (X1 + X2)^(2n)
    GammaDiffFactorized,  // E(X1+X2)^(2n) * E(Y^(2n)) product estimate at p = 1/2
};

std::string_view statistic_tag(StatisticId id);
StatisticId statistic_from_tag(std::string_view tag);

struct SampleStats {
    StatisticId statistic = StatisticId::GammaDiff;
    unsigned n = 0;
    std::optional<Rational> p;
    long samples = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double exact_target = 0.0;
    double z_score = 0.0;
};

/// Empirical 2n-th moment of the chosen statistic against its exact target.
/// Work is split over fixed logical shards with disjoint child streams and
/// merged in shard order, so the result is bit-identical for a given
/// (seed, stream_id, samples) regardless of thread count. Threads are capped
/// by the MIL_THREADS environment variable when set.
///
/// Preconditions: samples >= 10^4; n <= 5 (the powered-sample variance grows
/// factorially beyond that); p > 0 where the statistic uses it.
SampleStats estimate_even_moment(StatisticId statistic, unsigned n,
                                 const std::optional<Rational> &p, long samples, RngStream rng);

/// Checks the distributional factorization of the gamma difference at
/// p = 1/2: estimates E(X1+X2)^(2n) and E(Y^(2n)) on independent child
/// streams and compares their product against (2n)! (1/2)_n / n!. The
/// standard error of the product combines the two by the delta method.
SampleStats factorization_check(unsigned n, long samples, RngStream rng);

/// Empirical odd moment E[(Y1 - Y2)^(2n+1)] of the arcsine-pair difference,
/// which is exactly 0 by symmetry; returned with its standard error so
/// callers can form the z-statistic against 0.
SampleStats odd_moment_check(unsigned n, long samples, RngStream rng);

}  // namespace mil
