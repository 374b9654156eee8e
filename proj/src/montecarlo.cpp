#include "mil/montecarlo.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mil/pi_graded.hpp"

namespace mil {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kShards = 32;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr unsigned __int128 pcg_multiplier() {
    return (static_cast<unsigned __int128>(0x2360ED051FC65DA4ULL) << 64) | 0x4385DF649FCCF645ULL;
}

unsigned max_threads() {
    if (const char *env = std::getenv("MIL_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Running count/mean/M2 with the standard pairwise combination rule, so
// shard results merge into exactly the same moments regardless of grouping.
struct Accumulator {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const Accumulator &o) {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / total;
        m2 += o.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(o.count) / total;
        count += o.count;
    }

    double std_error() const {
        if (count < 2) return 0.0;
        const double variance = m2 / static_cast<double>(count - 1);
        return std::sqrt(variance / static_cast<double>(count));
    }
};

// Runs one accumulator per fixed logical shard, merging in shard order.
Accumulator sharded_estimate(long samples, RngStream rng,
                             const std::function<double(Pcg64 &)> &draw) {
    std::vector<long> shard_samples(kShards, samples / kShards);
    for (long i = 0; i < samples % kShards; ++i) ++shard_samples[i];

    auto run_shard = [&](int shard) {
        Pcg64 engine(rng.split(static_cast<std::uint64_t>(shard)));
        Accumulator acc;
        for (long i = 0; i < shard_samples[shard]; ++i) acc.add(draw(engine));
        return acc;
    };

    std::vector<Accumulator> results(kShards);
    const unsigned threads = std::min<unsigned>(max_threads(), kShards);
    if (threads <= 1) {
        for (int s = 0; s < kShards; ++s) results[s] = run_shard(s);
    } else {
        std::vector<std::future<void>> workers;
        std::atomic<int> next{0};
        for (unsigned t = 0; t < threads; ++t) {
            workers.push_back(std::async(std::launch::async, [&] {
                for (int s = next.fetch_add(1); s < kShards; s = next.fetch_add(1)) {
                    results[s] = run_shard(s);
                }
            }));
        }
        for (auto &w : workers) w.get();
    }

    Accumulator total;
    for (const auto &acc : results) total.merge(acc);
    return total;
}

double pow_even(double base, unsigned n) {
    // base^(2n) through the square, exact for the even powers we need.
    double sq = base * base;
    double result = 1.0;
    for (unsigned i = 0; i < n; ++i) result *= sq;
    return result;
}

double require_positive_p(const std::optional<Rational> &p, const char *what) {
    if (!p || p->sign() <= 0) {
        throw std::invalid_argument(std::string(what) + " requires a parameter p > 0");
    }
    return p->to_double();
}

Rational exact_target(StatisticId statistic, unsigned n, const std::optional<Rational> &p) {
    switch (statistic) {
        case StatisticId::GammaDiff:
            return Rational(factorial(2 * n)) * pochhammer(*p, n) / Rational(factorial(n));
        case StatisticId::GammaSum:
            return pochhammer(*p * Rational(2), 2 * n);
        case StatisticId::TRatio:
            return pochhammer(Rational(1, 2), n) / pochhammer(*p + Rational(1, 2), n);
        case StatisticId::BetaDiff: {
            const BigInt c = binomial(2 * n, static_cast<long>(n));
            BigInt four_2n;
            mpz_ui_pow_ui(four_2n.get_mpz_t(), 4, 2 * n);
            return Rational(c * c) / Rational(four_2n);
        }
        case StatisticId::GammaDiffFactorized:
            return Rational(factorial(2 * n)) * pochhammer(Rational(1, 2), n) /
                   Rational(factorial(n));
    }
    throw std::invalid_argument("unknown statistic");
}

SampleStats finish(StatisticId statistic, unsigned n, const std::optional<Rational> &p,
                   long samples, const Accumulator &acc, const Rational &target) {
    SampleStats stats;
    stats.statistic = statistic;
    stats.n = n;
    stats.p = p;
    stats.samples = samples;
    stats.mean = acc.mean;
    stats.std_error = acc.std_error();
    stats.exact_target = target.to_double();
    stats.z_score =
        stats.std_error > 0.0 ? (stats.mean - stats.exact_target) / stats.std_error : 0.0;
    return stats;
}

}  // namespace

RngStream RngStream::split(std::uint64_t lane) const {
    return RngStream{seed, splitmix64(stream_id * 0x9E3779B97F4A7C15ULL + lane + 1)};
}

Pcg64::Pcg64(RngStream stream) {
    const unsigned __int128 initseq =
        (static_cast<unsigned __int128>(splitmix64(stream.stream_id)) << 64) | stream.stream_id;
    const unsigned __int128 initstate =
        (static_cast<unsigned __int128>(splitmix64(stream.seed)) << 64) | stream.seed;
    state_ = 0;
    inc_ = (initseq << 1) | 1;
    next_u64();
    state_ += initstate;
    next_u64();
}

std::uint64_t Pcg64::next_u64() {
    state_ = state_ * pcg_multiplier() + inc_;
    const std::uint64_t xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const unsigned rot = static_cast<unsigned>(state_ >> 122);
    return std::rotr(xored, static_cast<int>(rot));
}

double Pcg64::uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Pcg64::normal() {
    for (;;) {
        const double u = 2.0 * uniform01() - 1.0;
        const double v = 2.0 * uniform01() - 1.0;
        const double s = u * u + v * v;
        if (s < 1.0 && s > 0.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

double sample_gamma(double p, Pcg64 &rng) {
    if (!(p > 0.0)) throw std::invalid_argument("sample_gamma requires p > 0");
    if (p < 1.0) {
        // Ga(p) = Ga(p+1) * U^(1/p); avoids the vanishing acceptance rate near 0.
        return sample_gamma(p + 1.0, rng) * std::pow(rng.uniform01(), 1.0 / p);
    }
    const double d = p - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double sample_beta(double a, double b, Pcg64 &rng) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("sample_beta requires a, b > 0");
    if (a == 0.5 && b == 0.5) {
        const double s = std::sin(0.5 * kPi * rng.uniform01());
        return s * s;
    }
    const double x = sample_gamma(a, rng);
    const double y = sample_gamma(b, rng);
    return x / (x + y);
}

double sample_arcsine(Pcg64 &rng) {
    return std::sin(kPi * (rng.uniform01() - 0.5));
}

std::string_view statistic_tag(StatisticId id) {
    switch (id) {
        case StatisticId::GammaDiff: return "gamma-diff";
        case StatisticId::TRatio: return "t-ratio";
        case StatisticId::BetaDiff: return "beta-diff";
        case StatisticId::GammaSum: return "gamma-sum";
        case StatisticId::GammaDiffFactorized: return "gamma-diff-factorized";
    }
    throw std::invalid_argument("unknown statistic id");
}

StatisticId statistic_from_tag(std::string_view tag) {
    for (StatisticId id : {StatisticId::GammaDiff, StatisticId::TRatio, StatisticId::BetaDiff,
                           StatisticId::GammaSum, StatisticId::GammaDiffFactorized}) {
        if (statistic_tag(id) == tag) return id;
    }
    throw std::invalid_argument("unknown statistic: " + std::string(tag));
}

SampleStats estimate_even_moment(StatisticId statistic, unsigned n,
                                 const std::optional<Rational> &p, long samples, RngStream rng) {
    if (samples < 10'000) {
        throw std::invalid_argument("estimate_even_moment needs at least 10^4 samples");
    }
    if (n > 5) {
        throw std::invalid_argument(
            "moment order capped at n = 5: the powered-sample variance grows factorially");
    }
    if (statistic == StatisticId::GammaDiffFactorized) {
        return factorization_check(n, samples, rng);
    }

    std::function<double(Pcg64 &)> draw;
    std::optional<Rational> used_p = p;
    switch (statistic) {
        case StatisticId::GammaDiff: {
            const double pd = require_positive_p(p, "gamma-diff");
            draw = [pd, n](Pcg64 &eng) {
                return pow_even(sample_gamma(pd, eng) - sample_gamma(pd, eng), n);
            };
            break;
        }
        case StatisticId::GammaSum: {
            const double pd = require_positive_p(p, "gamma-sum");
            draw = [pd, n](Pcg64 &eng) {
                return pow_even(sample_gamma(pd, eng) + sample_gamma(pd, eng), n);
            };
            break;
        }
        case StatisticId::TRatio: {
            const double pd = require_positive_p(p, "t-ratio");
            draw = [pd, n](Pcg64 &eng) {
                const double x1 = sample_gamma(pd, eng);
                const double x2 = sample_gamma(pd, eng);
                return pow_even((x1 - x2) / (x1 + x2), n);
            };
            break;
        }
        case StatisticId::BetaDiff: {
            used_p.reset();  // not a parameter of this statistic
            draw = [n](Pcg64 &eng) {
                return pow_even(sample_beta(0.5, 0.5, eng) - sample_beta(0.5, 0.5, eng), n);
            };
            break;
        }
        default:
            throw std::invalid_argument("unsupported statistic/moment combination");
    }

    const Accumulator acc = sharded_estimate(samples, rng, draw);
    return finish(statistic, n, used_p, samples, acc, exact_target(statistic, n, p));
}

SampleStats factorization_check(unsigned n, long samples, RngStream rng) {
    if (samples < 10'000) {
        throw std::invalid_argument("factorization_check needs at least 10^4 samples");
    }
    if (n > 5) throw std::invalid_argument("moment order capped at n = 5");

    // Independent child streams for the two factors.
    const Accumulator sum_acc =
        sharded_estimate(samples, rng.split(0x5157), [n](Pcg64 &eng) {
            return pow_even(sample_gamma(0.5, eng) + sample_gamma(0.5, eng), n);
        });
    const Accumulator y_acc = sharded_estimate(samples, rng.split(0xA12C), [n](Pcg64 &eng) {
        return pow_even(sample_arcsine(eng), n);
    });

    const double product = sum_acc.mean * y_acc.mean;
    const double se_sum = sum_acc.std_error();
    const double se_y = y_acc.std_error();
    // Delta method for the product of independent estimates.
    const double se = std::sqrt(y_acc.mean * y_acc.mean * se_sum * se_sum +
                                sum_acc.mean * sum_acc.mean * se_y * se_y);

    SampleStats stats;
    stats.statistic = StatisticId::GammaDiffFactorized;
    stats.n = n;
    stats.p = Rational(1, 2);
    stats.samples = samples;
    stats.mean = product;
    stats.std_error = se;
    stats.exact_target = exact_target(StatisticId::GammaDiffFactorized, n, std::nullopt).to_double();
    stats.z_score = se > 0.0 ? (product - stats.exact_target) / se : 0.0;
    return stats;
}

SampleStats odd_moment_check(unsigned n, long samples, RngStream rng) {
    if (samples < 10'000) {
        throw std::invalid_argument("odd_moment_check needs at least 10^4 samples");
    }
    const unsigned power = 2 * n + 1;
    const Accumulator acc = sharded_estimate(samples, rng, [power](Pcg64 &eng) {
        const double diff = sample_beta(0.5, 0.5, eng) - sample_beta(0.5, 0.5, eng);
        double result = diff;
        for (unsigned i = 1; i < power; ++i) result *= diff;
        return result;
    });

    SampleStats stats;
    stats.statistic = StatisticId::BetaDiff;
    stats.n = n;
    stats.samples = samples;
    stats.mean = acc.mean;
    stats.std_error = acc.std_error();
    stats.exact_target = 0.0;
    stats.z_score = stats.std_error > 0.0 ? stats.mean / stats.std_error : 0.0;
    return stats;
}

}  // namespace mil
