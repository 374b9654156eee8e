#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "mil/cli.hpp"
#include "mil/report_io.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = mil::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("verify command on exact identities") {
    const auto gould = run_cli({"verify", "--identity", "gould-6.60", "--n", "1"});
    CHECK(gould.code == 0);
    CHECK(gould.out.find("equal=true") != std::string::npos);
    CHECK(gould.out.find("approx_lhs=4") != std::string::npos);

    const auto alternating =
        run_cli({"verify", "--identity", "alternating-convolution", "--n", "3"});
    CHECK(alternating.code == 0);
    CHECK(alternating.out.find("equal=true") != std::string::npos);

    const auto beta = run_cli(
        {"verify", "--identity", "beta-moment", "--n", "1", "--p", "1/2", "--format", "json"});
    CHECK(beta.code == 0);
    const json parsed = json::parse(beta.out);
    CHECK(parsed.at("records").size() == 1);
    CHECK(parsed.at("records")[0].at("approx_rhs").get<double>() == doctest::Approx(0.5));
}

TEST_CASE("the convolution convention note is surfaced") {
    const auto text = run_cli({"verify", "--identity", "central-convolution", "--n", "3"});
    CHECK(text.code == 0);
    CHECK(text.out.find("note:") != std::string::npos);
    CHECK(text.out.find("k = 0") != std::string::npos);

    const auto as_json =
        run_cli({"verify", "--identity", "central-convolution", "--n", "3", "--format", "json"});
    const json parsed = json::parse(as_json.out);
    CHECK(parsed.at("records")[0].contains("note"));
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli({"verify", "--identity", "no-such", "--n", "1"}).code == 2);
    CHECK(run_cli({"verify", "--n", "1"}).code == 2);
    CHECK(run_cli({"verify", "--identity", "brychkov"}).code == 2);
    CHECK(run_cli({"verify", "--identity", "beta-moment", "--n", "1", "--p", "x/y"}).code == 2);
    CHECK(run_cli({"sample", "--statistic", "unknown", "--n", "1"}).code == 2);
    CHECK(run_cli({"bogus-subcommand"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"report"}).code == 2);  // --all is required

    const auto unwritable = run_cli({"verify", "--identity", "brychkov", "--n", "1", "--output",
                                     "/nonexistent-dir/report.json"});
    CHECK(unwritable.code == 2);
}

TEST_CASE("sweep emits one row per point and aggregates") {
    const auto csv = run_cli(
        {"sweep", "--identity", "brychkov", "--n-max", "20", "--format", "csv"});
    CHECK(csv.code == 0);
    std::istringstream lines(csv.out);
    std::string line;
    int rows = 0;
    bool saw_header = false;
    while (std::getline(lines, line)) {
        if (line.rfind("identity,", 0) == 0) {
            saw_header = true;
            continue;
        }
        if (line.empty()) continue;
        ++rows;
        CHECK(line.find("brychkov") == 0);
        CHECK(line.find("true") != std::string::npos);
    }
    CHECK(saw_header);
    CHECK(rows == 20);

    const auto parametric = run_cli({"sweep", "--identity", "beta-moment", "--n-max", "2",
                                     "--p-list", "1/3,1/2,1", "--format", "json"});
    CHECK(parametric.code == 0);
    const json parsed = json::parse(parametric.out);
    CHECK(parsed.at("records").size() == 6);
    CHECK(parsed.at("all_passed").get<bool>());
}

TEST_CASE("json records round-trip exactly") {
    const auto result = run_cli({"verify", "--identity", "vignat-moll-factorization", "--n", "4",
                                 "--format", "json"});
    const json parsed = json::parse(result.out);
    const json record = parsed.at("records")[0];
    const mil::IdentityReport report = mil::report_from_json(record);
    CHECK(report.id == mil::IdentityId::VignatMollFactorization);
    CHECK(report.n == 4);
    CHECK(report.equal);
    CHECK(report.lhs == mil::PiGradedValue(mil::Rational(11025)));
    CHECK(report.residual.is_zero());

    // A second serialization is identical text.
    CHECK(mil::report_to_json(report) == record);
}

TEST_CASE("series command reports the tail bracket") {
    const auto result = run_cli({"series", "--n", "1", "--terms", "200", "--format", "json"});
    CHECK(result.code == 0);
    const json parsed = json::parse(result.out);
    const json record = parsed.at("records")[0];
    CHECK(record.at("equal").get<bool>());
    CHECK(record.at("terms_used").get<long>() == 200);
    CHECK(record.contains("tail_bound"));
    CHECK(record.contains("note"));
    // rhs is the exact pi-graded target: one term at the pi^1 grade.
    CHECK(record.at("rhs").size() == 1);
    CHECK(record.at("rhs")[0][0].get<int>() == 2);
    CHECK(record.at("approx_rhs").get<double>() ==
          doctest::Approx(3.14159265358979 / 4.0).epsilon(1e-12));
}

TEST_CASE("sample command runs a z-test") {
    const auto result = run_cli({"sample", "--statistic", "gamma-diff", "--n", "1", "--p", "1",
                                 "--samples", "50000", "--format", "json"});
    CHECK(result.code == 0);
    const json parsed = json::parse(result.out);
    CHECK(parsed.at("exact_target").get<double>() == doctest::Approx(2.0));
    CHECK(parsed.at("passed").get<bool>());

    CHECK(run_cli({"sample", "--statistic", "gamma-diff", "--n", "1", "--samples", "50000"}).code ==
          2);  // missing p
}

TEST_CASE("density command checks symmetry and normalization") {
    const auto ok = run_cli({"density", "--points", "20", "--tol", "1e-8", "--format", "json"});
    CHECK(ok.code == 0);
    const json parsed = json::parse(ok.out);
    CHECK(parsed.at("passed").get<bool>());
    CHECK(parsed.at("symmetric").get<bool>());
    CHECK(parsed.at("points").size() == 20);
    CHECK(parsed.at("normalization").get<double>() == doctest::Approx(1.0).epsilon(1e-8));

    // An impossible tolerance is a failed check, not a usage error.
    const auto impossible = run_cli({"density", "--points", "4", "--tol", "1e-30"});
    CHECK(impossible.code == 1);
}

TEST_CASE("report covers the whole catalogue exactly once") {
    const auto result = run_cli({"report", "--all", "--n-max", "3", "--terms", "120", "--format",
                                 "json"});
    CHECK(result.code == 0);
    const json parsed = json::parse(result.out);
    CHECK(parsed.at("all_passed").get<bool>());
    std::set<std::string> tags;
    for (const auto &record : parsed.at("records")) {
        tags.insert(record.at("identity").get<std::string>());
    }
    CHECK(tags.size() == 12);
    CHECK(parsed.at("notes").contains("central-convolution"));
    CHECK(parsed.at("notes").contains("remark2-series"));
}

TEST_CASE("output lands in the requested file") {
    const std::string path = "cli_test_output.json";
    const auto result = run_cli({"verify", "--identity", "half-beta-binomial", "--n", "2",
                                 "--format", "json", "--output", path});
    CHECK(result.code == 0);
    CHECK(result.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    const json parsed = json::parse(in);
    CHECK(parsed.at("records")[0].at("equal").get<bool>());
    in.close();
    std::remove(path.c_str());
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli({"--help"}).code == 0);
    const auto sub = run_cli({"verify", "--help"});
    CHECK(sub.code == 0);
}
