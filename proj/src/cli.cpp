#include "mil/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <sstream>
#include <thread>

#include "mil/identities.hpp"
#include "mil/montecarlo.hpp"
#include "mil/report_io.hpp"
#include "mil/specfun.hpp"

namespace mil::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 0x9E3779B97F4A7C15ULL;
constexpr long kDefaultSamples = 1'000'000;
constexpr double kDefaultTol = 1e-8;
constexpr double kZThreshold = 5.0;

unsigned max_threads() {
    if (const char *env = std::getenv("MIL_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs jobs over a bounded worker pool; results keep the input order, so
/// output never depends on scheduling.
template <typename T>
std::vector<T> ordered_parallel(const std::vector<std::function<T()>> &jobs) {
    std::vector<T> results(jobs.size());
    const unsigned threads =
        std::min<unsigned>(max_threads(), static_cast<unsigned>(jobs.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (unsigned t = 0; t < threads; ++t) {
        workers.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
                results[i] = jobs[i]();
            }
        }));
    }
    for (auto &w : workers) w.get();
    return results;
}

std::vector<Rational> parse_p_list(const std::string &csv) {
    std::vector<Rational> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(Rational::parse(item));
    }
    if (out.empty()) throw std::invalid_argument("empty p list");
    return out;
}

struct Sink {
    std::ostream *stream;
    std::ofstream file;
};

Sink open_sink(const std::string &path, std::ostream &fallback) {
    Sink sink;
    if (path.empty()) {
        sink.stream = &fallback;
        return sink;
    }
    sink.file.open(path);
    if (!sink.file) throw std::invalid_argument("cannot write output path: " + path);
    sink.stream = &sink.file;
    return sink;
}

void print_record_text(std::ostream &os, const json &record) {
    os << record.at("identity").get<std::string>() << " n=" << record.at("n").get<long>();
    if (!record.at("p").is_null()) os << " p=" << record.at("p").get<std::string>();
    os << " equal=" << (record.at("equal").get<bool>() ? "true" : "false")
       << " lhs=" << record.at("lhs").dump() << " rhs=" << record.at("rhs").dump()
       << " approx_lhs=" << record.at("approx_lhs").get<double>()
       << " approx_rhs=" << record.at("approx_rhs").get<double>();
    if (record.contains("tail_bound")) {
        os << " terms=" << record.at("terms_used").get<long>()
           << " tail_bound=" << record.at("tail_bound").get<std::string>();
    }
    if (record.contains("note")) os << "\n  note: " << record.at("note").get<std::string>();
    os << "\n";
}

void emit_records(const std::vector<json> &records, const std::string &format, std::ostream &os,
                  const json &extra = json::object()) {
    if (format == "json") {
        json payload;
        payload["records"] = records;
        for (auto it = extra.begin(); it != extra.end(); ++it) payload[it.key()] = it.value();
        os << payload.dump(2) << "\n";
    } else if (format == "csv") {
        os << report_csv_header() << "\n";
        for (const auto &r : records) os << report_to_csv_row(r) << "\n";
    } else {
        for (const auto &r : records) print_record_text(os, r);
        for (auto it = extra.begin(); it != extra.end(); ++it) {
            os << it.key() << ": " << it.value().dump() << "\n";
        }
    }
}

bool record_passed(const json &record) { return record.at("equal").get<bool>(); }

json series_record(unsigned n, long terms) {
    return tally_to_json(series_partial_sum(n, terms));
}

// Battery used by `report --all`: every identity checked exactly once.
std::vector<json> full_battery(unsigned n_max, long series_terms) {
    std::vector<std::function<std::vector<json>()>> jobs;
    for (IdentityId id : all_identities()) {
        switch (id) {
            case IdentityId::GammaEvenMoment:
            case IdentityId::BetaMoment: {
                const unsigned cap = std::min(n_max, 10u);
                jobs.emplace_back([id, cap] {
                    std::vector<json> out;
                    for (unsigned n = 1; n <= cap; ++n) {
                        for (const auto &report : verify_in_p(id, n)) {
                            out.push_back(report_to_json(report));
                        }
                    }
                    return out;
                });
                break;
            }
            case IdentityId::MultiConvolution: {
                const unsigned cap = std::min(n_max, 30u);
                jobs.emplace_back([cap] {
                    std::vector<json> out;
                    for (unsigned n = 1; n <= cap; ++n) {
                        for (long m = 1; m <= 6; ++m) {
                            out.push_back(report_to_json(
                                verify(IdentityId::MultiConvolution, n, Rational(m))));
                        }
                    }
                    return out;
                });
                break;
            }
            case IdentityId::Remark2Series:
                jobs.emplace_back([series_terms] {
                    std::vector<json> out;
                    for (unsigned n = 1; n <= 5; ++n) {
                        out.push_back(series_record(n, series_terms));
                    }
                    return out;
                });
                break;
            default:
                jobs.emplace_back([id, n_max] {
                    std::vector<json> out;
                    for (unsigned n = 1; n <= n_max; ++n) {
                        out.push_back(report_to_json(verify(id, n)));
                    }
                    return out;
                });
        }
    }
    std::vector<json> records;
    for (auto &chunk : ordered_parallel(jobs)) {
        records.insert(records.end(), chunk.begin(), chunk.end());
    }
    return records;
}

struct Options {
    std::string identity;
    std::string statistic;
    unsigned n = 1;
    unsigned n_max = 20;
    std::string p;
    std::string p_list;
    long samples = kDefaultSamples;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t stream = 0;
    long terms = 10'000;
    unsigned points = 101;
    double tol = kDefaultTol;
    std::string format = "text";
    std::string output;
};

int cmd_verify(const Options &opt, std::ostream &out) {
    const IdentityId id = identity_from_tag(opt.identity);
    std::vector<json> records;
    if (id == IdentityId::Remark2Series) {
        records.push_back(series_record(opt.n, opt.terms));
    } else {
        std::optional<Rational> p;
        if (!opt.p.empty()) p = Rational::parse(opt.p);
        records.push_back(report_to_json(verify(id, opt.n, p)));
    }
    Sink sink = open_sink(opt.output, out);
    emit_records(records, opt.format, *sink.stream);
    return record_passed(records.front()) ? 0 : 1;
}

int cmd_sweep(const Options &opt, std::ostream &out) {
    const IdentityId id = identity_from_tag(opt.identity);
    std::vector<json> records;
    if (id == IdentityId::Remark2Series) {
        for (unsigned n = 1; n <= opt.n_max; ++n) records.push_back(series_record(n, opt.terms));
    } else if (!identity_requires_parameter(id)) {
        std::vector<std::function<json()>> jobs;
        for (unsigned n = 1; n <= opt.n_max; ++n) {
            jobs.emplace_back([id, n] { return report_to_json(verify(id, n)); });
        }
        records = ordered_parallel(jobs);
    } else if (!opt.p_list.empty()) {
        const auto ps = parse_p_list(opt.p_list);
        std::vector<std::function<json()>> jobs;
        for (unsigned n = 1; n <= opt.n_max; ++n) {
            for (const auto &p : ps) {
                jobs.emplace_back([id, n, p] { return report_to_json(verify(id, n, p)); });
            }
        }
        records = ordered_parallel(jobs);
    } else if (id == IdentityId::MultiConvolution) {
        std::vector<std::function<json()>> jobs;
        for (unsigned n = 1; n <= opt.n_max; ++n) {
            for (long m = 1; m <= 6; ++m) {
                jobs.emplace_back([id, n, m] { return report_to_json(verify(id, n, Rational(m))); });
            }
        }
        records = ordered_parallel(jobs);
    } else {
        // Parametric in p with no explicit list: run the multipoint
        // rational-function certification per n.
        std::vector<std::function<std::vector<json>()>> jobs;
        for (unsigned n = 1; n <= opt.n_max; ++n) {
            jobs.emplace_back([id, n] {
                std::vector<json> out;
                for (const auto &report : verify_in_p(id, n)) {
                    out.push_back(report_to_json(report));
                }
                return out;
            });
        }
        for (auto &chunk : ordered_parallel(jobs)) {
            records.insert(records.end(), chunk.begin(), chunk.end());
        }
    }
    const bool all_ok =
        std::all_of(records.begin(), records.end(), [](const json &r) { return record_passed(r); });
    Sink sink = open_sink(opt.output, out);
    emit_records(records, opt.format, *sink.stream, json{{"all_passed", all_ok}});
    return all_ok ? 0 : 1;
}

int cmd_sample(const Options &opt, std::ostream &out) {
    const StatisticId statistic = statistic_from_tag(opt.statistic);
    std::optional<Rational> p;
    if (!opt.p.empty()) p = Rational::parse(opt.p);
    const RngStream rng{opt.seed, opt.stream};
    const SampleStats stats = estimate_even_moment(statistic, opt.n, p, opt.samples, rng);
    const bool ok = std::abs(stats.z_score) <= kZThreshold;

    Sink sink = open_sink(opt.output, out);
    json record = sample_to_json(stats);
    record["passed"] = ok;
    record["z_threshold"] = kZThreshold;
    if (opt.format == "json") {
        *sink.stream << record.dump(2) << "\n";
    } else {
        *sink.stream << "statistic=" << statistic_tag(stats.statistic) << " n=" << stats.n;
        if (stats.p) *sink.stream << " p=" << stats.p->to_string();
        *sink.stream << " samples=" << stats.samples << " mean=" << stats.mean
                     << " exact_target=" << stats.exact_target << " std_error=" << stats.std_error
                     << " z=" << stats.z_score << " passed=" << (ok ? "true" : "false") << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_series(const Options &opt, std::ostream &out) {
    const json record = series_record(opt.n, opt.terms);
    Sink sink = open_sink(opt.output, out);
    emit_records({record}, opt.format, *sink.stream);
    return record_passed(record) ? 0 : 1;
}

int cmd_density(const Options &opt, std::ostream &out) {
    std::vector<std::pair<double, double>> table;
    table.reserve(opt.points);
    bool symmetric = true;
    for (unsigned i = 0; i < opt.points; ++i) {
        const double x = -1.0 + 2.0 * (i + 0.5) / opt.points;
        if (std::abs(x) < 1e-12) continue;  // the density diverges at 0
        const double f = beta_diff_density(x);
        const double f_mirror = beta_diff_density(-x);
        if (f != f_mirror) symmetric = false;
        table.emplace_back(x, f);
    }
    // Normalization check: closed-form log piece plus adaptive quadrature.
    const QuadratureResult norm = moment_by_quadrature(0, opt.tol);
    const bool norm_ok = std::abs(norm.value - 1.0) <= opt.tol;
    const bool ok = norm_ok && symmetric;

    Sink sink = open_sink(opt.output, out);
    if (opt.format == "json") {
        json j;
        j["points"] = json::array();
        for (const auto &[x, f] : table) j["points"].push_back(json::array({x, f}));
        j["normalization"] = norm.value;
        j["normalization_tol"] = opt.tol;
        j["symmetric"] = symmetric;
        j["passed"] = ok;
        *sink.stream << j.dump(2) << "\n";
    } else if (opt.format == "csv") {
        *sink.stream << "x,density\n";
        sink.stream->precision(17);
        for (const auto &[x, f] : table) *sink.stream << x << ',' << f << "\n";
    } else {
        sink.stream->precision(12);
        for (const auto &[x, f] : table) *sink.stream << x << '\t' << f << "\n";
        *sink.stream << "normalization=" << norm.value << " (tol " << opt.tol << ")"
                     << " symmetric=" << (symmetric ? "true" : "false")
                     << " passed=" << (ok ? "true" : "false") << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_report(const Options &opt, std::ostream &out) {
    const std::vector<json> records = full_battery(opt.n_max, opt.terms);
    const bool all_ok =
        std::all_of(records.begin(), records.end(), [](const json &r) { return record_passed(r); });
    json notes = json::object();
    for (IdentityId id : all_identities()) {
        const auto note = identity_note(id);
        if (!note.empty()) notes[std::string(identity_tag(id))] = std::string(note);
    }
    Sink sink = open_sink(opt.output, out);
    emit_records(records, opt.format, *sink.stream,
                 json{{"all_passed", all_ok}, {"notes", notes}});
    return all_ok ? 0 : 1;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"exact and numeric verification of a catalogue of combinatorial identities"};
    app.require_subcommand(1);
    Options opt;

    const auto add_format = [&](CLI::App *cmd) {
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        cmd->add_option("--output", opt.output, "write output to this path");
    };

    auto *verify_cmd = app.add_subcommand("verify", "verify one identity at one point");
    verify_cmd->add_option("--identity", opt.identity, "identity tag")->required();
    verify_cmd->add_option("--n", opt.n, "order n")->required();
    verify_cmd->add_option("--p", opt.p, "parameter p as a/b or integer");
    verify_cmd->add_option("--terms", opt.terms, "series terms (remark2-series only)");
    add_format(verify_cmd);

    auto *sweep_cmd = app.add_subcommand("sweep", "verify an identity across n (and p)");
    sweep_cmd->add_option("--identity", opt.identity, "identity tag")->required();
    sweep_cmd->add_option("--n-max", opt.n_max, "sweep n = 1..n_max")->required();
    sweep_cmd->add_option("--p-list", opt.p_list, "comma-separated rationals");
    sweep_cmd->add_option("--terms", opt.terms, "series terms (remark2-series only)");
    add_format(sweep_cmd);

    auto *sample_cmd = app.add_subcommand("sample", "Monte Carlo moment estimate and z-test");
    sample_cmd->add_option("--statistic", opt.statistic, "statistic tag")->required();
    sample_cmd->add_option("--n", opt.n, "moment order")->required();
    sample_cmd->add_option("--p", opt.p, "shape parameter");
    sample_cmd->add_option("--samples", opt.samples, "sample count");
    sample_cmd->add_option("--seed", opt.seed, "RNG seed");
    sample_cmd->add_option("--stream", opt.stream, "RNG stream id");
    add_format(sample_cmd);

    auto *series_cmd = app.add_subcommand("series", "partial sums of the pi series");
    series_cmd->add_option("--n", opt.n, "series order")->required();
    series_cmd->add_option("--terms", opt.terms, "number of terms");
    add_format(series_cmd);

    auto *density_cmd = app.add_subcommand("density", "tabulate and sanity-check the density");
    density_cmd->add_option("--points", opt.points, "grid size");
    density_cmd->add_option("--tol", opt.tol, "normalization tolerance");
    add_format(density_cmd);

    auto *report_cmd = app.add_subcommand("report", "run the whole identity battery");
    report_cmd->add_flag("--all", "run every identity")->required();
    report_cmd->add_option("--n-max", opt.n_max, "sweep bound for the exact identities");
    report_cmd->add_option("--terms", opt.terms, "series terms");
    add_format(report_cmd);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(verify_cmd)) return cmd_verify(opt, out);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(opt, out);
        if (app.got_subcommand(sample_cmd)) return cmd_sample(opt, out);
        if (app.got_subcommand(series_cmd)) return cmd_series(opt, out);
        if (app.got_subcommand(density_cmd)) return cmd_density(opt, out);
        if (app.got_subcommand(report_cmd)) return cmd_report(opt, out);
        err << "no subcommand selected\n";
        return 2;
    } catch (const QuadratureToleranceError &e) {
        err << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mil::cli
