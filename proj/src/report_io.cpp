#include "mil/report_io.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace mil {

using nlohmann::json;

json graded_to_json(const PiGradedValue &value) {
    json terms = json::array();
    for (const auto &[half_exp, coeff] : value.terms()) {
        terms.push_back(json::array({half_exp, coeff.to_fraction_string()}));
    }
    return terms;
}

PiGradedValue graded_from_json(const json &j) {
    PiGradedValue value;
    for (const auto &entry : j) {
        value += PiGradedValue::monomial(Rational::parse(entry.at(1).get<std::string>()),
                                         entry.at(0).get<int>());
    }
    return value;
}

json report_to_json(const IdentityReport &report) {
    json j;
    j["identity"] = std::string(identity_tag(report.id));
    j["n"] = report.n;
    j["p"] = report.p ? json(report.p->to_fraction_string()) : json(nullptr);
    j["lhs"] = graded_to_json(report.lhs);
    j["rhs"] = graded_to_json(report.rhs);
    j["equal"] = report.equal;
    j["approx_lhs"] = report.lhs.approx();
    j["approx_rhs"] = report.rhs.approx();
    const auto note = identity_note(report.id);
    if (!note.empty()) j["note"] = std::string(note);
    return j;
}

IdentityReport report_from_json(const json &j) {
    IdentityReport report;
    report.id = identity_from_tag(j.at("identity").get<std::string>());
    report.n = j.at("n").get<unsigned>();
    if (!j.at("p").is_null()) report.p = Rational::parse(j.at("p").get<std::string>());
    report.lhs = graded_from_json(j.at("lhs"));
    report.rhs = graded_from_json(j.at("rhs"));
    report.equal = j.at("equal").get<bool>();
    report.residual = report.lhs - report.rhs;
    return report;
}

json tally_to_json(const SeriesTally &tally) {
    const Rational content = series_target_content(tally.n);
    json j;
    j["identity"] = std::string(identity_tag(IdentityId::Remark2Series));
    j["n"] = tally.n;
    j["p"] = nullptr;
    // lhs: the raw partial sum (normalized fields times the target content);
    // rhs: the exact limit, content * pi.
    const PiGradedValue lhs{tally.partial_sum * content};
    const PiGradedValue rhs = PiGradedValue::monomial(content, 2);
    j["lhs"] = graded_to_json(lhs);
    j["rhs"] = graded_to_json(rhs);
    j["equal"] = series_brackets_pi(tally);
    j["approx_lhs"] = lhs.approx();
    j["approx_rhs"] = rhs.approx();
    j["terms_used"] = tally.terms_used;
    j["last_term"] = tally.last_term.to_fraction_string();
    j["tail_bound"] = tally.tail_bound.to_fraction_string();
    const auto note = identity_note(IdentityId::Remark2Series);
    if (!note.empty()) j["note"] = std::string(note);
    return j;
}

json sample_to_json(const SampleStats &stats) {
    json j;
    j["statistic"] = std::string(statistic_tag(stats.statistic));
    j["n"] = stats.n;
    j["p"] = stats.p ? json(stats.p->to_fraction_string()) : json(nullptr);
    j["samples"] = stats.samples;
    j["mean"] = stats.mean;
    j["std_error"] = stats.std_error;
    j["exact_target"] = stats.exact_target;
    j["z_score"] = stats.z_score;
    return j;
}

namespace {

std::string csv_quote(const std::string &field) {
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::string report_csv_header() {
    return "identity,n,p,lhs,rhs,equal,approx_lhs,approx_rhs,note";
}

std::string report_to_csv_row(const json &record) {
    std::ostringstream row;
    row << record.at("identity").get<std::string>() << ',';
    row << record.at("n").get<long>() << ',';
    row << (record.at("p").is_null() ? "" : record.at("p").get<std::string>()) << ',';
    row << csv_quote(record.at("lhs").dump()) << ',';
    row << csv_quote(record.at("rhs").dump()) << ',';
    row << (record.at("equal").get<bool>() ? "true" : "false") << ',';
    row.precision(17);
    row << record.at("approx_lhs").get<double>() << ',';
    row << record.at("approx_rhs").get<double>() << ',';
    row << (record.contains("note") ? csv_quote(record.at("note").get<std::string>()) : "");
    return row.str();
}

}  // namespace mil
