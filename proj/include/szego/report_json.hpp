#ifndef SZEGO_REPORT_JSON_HPP
#define SZEGO_REPORT_JSON_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "szego/algebra.hpp"
#include "szego/identities.hpp"

// JSON bindings for identity reports. Complex numbers are always {re, im}
// pairs of decimal doubles; parse(serialize(report)) reproduces the report
// exactly (doubles round-trip through the shortest-representation printer).

namespace szego {

using json = nlohmann::json;

inline json to_json(const cdouble& c)
{
    return json{{"re", c.real()}, {"im", c.imag()}};
}

inline cdouble complex_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("re") || !j.contains("im") ||
        !j["re"].is_number() || !j["im"].is_number()) {
        throw invalid_spec("complex values must be {re, im} objects with numeric fields");
    }
    return cdouble(j["re"].get<double>(), j["im"].get<double>());
}

inline json to_json(const run_policy& p)
{
    return json{{"theta_tolerance", p.trunc.target_tolerance},
                {"max_radius", p.trunc.max_radius},
                {"ring_radius", p.ring_radius},
                {"contour_samples", p.contour_samples},
                {"seed", p.seed}};
}

inline run_policy run_policy_from_json(const json& j)
{
    run_policy p;
    if (j.contains("theta_tolerance")) p.trunc.target_tolerance = j["theta_tolerance"].get<double>();
    if (j.contains("max_radius")) p.trunc.max_radius = j["max_radius"].get<int>();
    if (j.contains("ring_radius")) p.ring_radius = j["ring_radius"].get<double>();
    if (j.contains("contour_samples")) p.contour_samples = j["contour_samples"].get<int>();
    if (j.contains("seed")) p.seed = j["seed"].get<std::uint64_t>();
    p.trunc.validate();
    return p;
}

inline json to_json(const instance_record& r)
{
    json inputs = json::array(); // ordered, so round-trips preserve the record
    for (const auto& [name, value] : r.inputs) {
        inputs.push_back(json{{"name", name}, {"value", to_json(value)}});
    }
    json j{{"inputs", inputs},
           {"lhs", to_json(r.lhs)},
           {"rhs", to_json(r.rhs)},
           {"abs_error", r.abs_error},
           {"error", r.error}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline instance_record instance_record_from_json(const json& j)
{
    instance_record r;
    for (const json& in : j.at("inputs")) {
        r.inputs.emplace_back(in.at("name").get<std::string>(), complex_from_json(in.at("value")));
    }
    r.lhs = complex_from_json(j.at("lhs"));
    r.rhs = complex_from_json(j.at("rhs"));
    r.abs_error = j.at("abs_error").get<double>();
    r.error = j.at("error").get<double>();
    if (j.contains("note")) r.note = j["note"].get<std::string>();
    return r;
}

inline json to_json(const identity_report& rep)
{
    json records = json::array();
    for (const instance_record& r : rep.records) records.push_back(to_json(r));
    return json{{"identity_name", rep.identity_name},
                {"instances", rep.instances},
                {"max_abs_error", rep.max_abs_error},
                {"max_rel_error", rep.max_rel_error},
                {"tolerance", rep.tolerance},
                {"passed", rep.passed},
                {"seed", rep.seed},
                {"policy", to_json(rep.policy)},
                {"records", records}};
}

inline identity_report report_from_json(const json& j)
{
    identity_report rep;
    rep.identity_name = j.at("identity_name").get<std::string>();
    rep.instances = j.at("instances").get<int>();
    rep.max_abs_error = j.at("max_abs_error").get<double>();
    rep.max_rel_error = j.at("max_rel_error").get<double>();
    rep.tolerance = j.at("tolerance").get<double>();
    rep.passed = j.at("passed").get<bool>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.policy = run_policy_from_json(j.at("policy"));
    for (const json& r : j.at("records")) rep.records.push_back(instance_record_from_json(r));
    return rep;
}

inline json to_json(const std::vector<identity_report>& reports)
{
    json arr = json::array();
    for (const identity_report& r : reports) arr.push_back(to_json(r));
    return arr;
}

inline bool operator==(const instance_record& a, const instance_record& b)
{
    return a.inputs == b.inputs && a.lhs == b.lhs && a.rhs == b.rhs && a.abs_error == b.abs_error &&
           a.error == b.error && a.note == b.note;
}

inline bool operator==(const run_policy& a, const run_policy& b)
{
    return a.trunc.target_tolerance == b.trunc.target_tolerance && a.trunc.max_radius == b.trunc.max_radius &&
           a.ring_radius == b.ring_radius && a.contour_samples == b.contour_samples && a.seed == b.seed;
}

inline bool operator==(const identity_report& a, const identity_report& b)
{
    return a.identity_name == b.identity_name && a.instances == b.instances &&
           a.max_abs_error == b.max_abs_error && a.max_rel_error == b.max_rel_error &&
           a.tolerance == b.tolerance && a.passed == b.passed && a.seed == b.seed && a.policy == b.policy &&
           a.records == b.records;
}

} // namespace szego

#endif
