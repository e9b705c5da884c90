// Command-line front end: evaluate theta functions, prime forms, Szegő
// kernels and diagonal expansions, run the identity verification suites,
// and freeze high-precision regression fixtures.
//
// Exit codes: 0 success / all suites passed, 1 verification failure,
// 2 invalid spec, 3 runtime evaluation error.

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "szego/curve.hpp"
#include "szego/expansions.hpp"
#include "szego/identities.hpp"
#include "szego/kernels.hpp"
#include "szego/report_json.hpp"
#include "szego/theta.hpp"

using szego::cdouble;
using szego::json;

namespace {

const char* error_kind(const szego::error& e)
{
    if (dynamic_cast<const szego::on_theta_divisor*>(&e)) return "OnThetaDivisor";
    if (dynamic_cast<const szego::diagonal_pole*>(&e)) return "DiagonalPole";
    if (dynamic_cast<const szego::truncation_budget_exceeded*>(&e)) return "TruncationBudgetExceeded";
    if (dynamic_cast<const szego::pole_at_lattice_point*>(&e)) return "PoleAtLatticePoint";
    if (dynamic_cast<const szego::degenerate_fiber*>(&e)) return "DegenerateFiber";
    if (dynamic_cast<const szego::zero_not_simple*>(&e)) return "ZeroNotSimple";
    if (dynamic_cast<const szego::aliasing_detected*>(&e)) return "AliasingDetected";
    if (dynamic_cast<const szego::sample_too_close_to_singularity*>(&e)) return "SampleTooCloseToSingularity";
    if (dynamic_cast<const szego::not_symmetric*>(&e)) return "NotSymmetric";
    if (dynamic_cast<const szego::im_not_positive_definite*>(&e)) return "ImaginaryPartNotPositiveDefinite";
    if (dynamic_cast<const szego::non_finite*>(&e)) return "NonFinite";
    if (dynamic_cast<const szego::invalid_spec*>(&e)) return "InvalidSpec";
    return "Error";
}

void print_error(const char* kind, const std::string& message)
{
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

cdouble parse_complex(const std::string& s)
{
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw szego::invalid_spec("expected a complex value as RE,IM: " + s);
    try {
        std::size_t a = 0, b = 0;
        const double re = std::stod(s.substr(0, comma), &a);
        const double im = std::stod(s.substr(comma + 1), &b);
        if (a != comma || b != s.size() - comma - 1) throw std::invalid_argument(s);
        return cdouble(re, im);
    } catch (const std::exception&) {
        throw szego::invalid_spec("could not parse complex value: " + s);
    }
}

// ---------------------------------------------------------------------------
// Run specification

struct suite_selection {
    std::string name;
    std::optional<double> tolerance;
    std::optional<int> instances;
};

struct runspec {
    std::string curve_kind = "torus";
    cdouble tau{0.0, 1.0};
    std::vector<szego::bundle_point> bundle;
    std::vector<suite_selection> suites; // empty: the default set for the curve
    szego::run_policy policy;
    std::string output = "report.json";
};

szego::run_policy policy_from_env()
{
    szego::run_policy p;
    if (const char* path = std::getenv("SZEGO_POLICY")) {
        std::ifstream in(path);
        if (!in) throw szego::invalid_spec(std::string("cannot read policy file from SZEGO_POLICY: ") + path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw szego::invalid_spec(std::string("policy file is not valid JSON: ") + e.what());
        }
        p = szego::run_policy_from_json(j);
    }
    return p;
}

runspec parse_runspec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw szego::invalid_spec("cannot read run spec: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw szego::invalid_spec(std::string("run spec is not valid JSON: ") + e.what());
    }

    runspec rs;
    rs.policy = policy_from_env();
    try {
        if (j.contains("curve")) {
            const json& c = j["curve"];
            rs.curve_kind = c.value("kind", std::string("torus"));
            if (rs.curve_kind != "torus" && rs.curve_kind != "sphere") {
                throw szego::invalid_spec("curve.kind must be \"torus\" or \"sphere\"");
            }
            if (c.contains("tau")) rs.tau = szego::complex_from_json(c["tau"]);
        }
        if (j.contains("bundle")) {
            for (const json& z : j["bundle"].value("z", json::array())) {
                rs.bundle.emplace_back(szego::complex_from_json(z));
            }
        }
        if (j.contains("suites")) {
            for (const json& s : j["suites"]) {
                suite_selection sel;
                sel.name = s.at("name").get<std::string>();
                if (s.contains("tolerance")) sel.tolerance = s["tolerance"].get<double>();
                if (s.contains("instances")) sel.instances = s["instances"].get<int>();
                rs.suites.push_back(std::move(sel));
            }
        }
        if (j.contains("policy")) rs.policy = szego::run_policy_from_json(j["policy"]);
        if (j.contains("output")) rs.output = j["output"].get<std::string>();
    } catch (const json::exception& e) {
        throw szego::invalid_spec(std::string("malformed run spec: ") + e.what());
    }
    return rs;
}

// Modulus validation failures on user-supplied values are spec errors.
szego::riemann_matrix tau_from(const cdouble& t)
{
    try {
        return szego::riemann_matrix_g1(t);
    } catch (const szego::invalid_spec&) {
        throw;
    } catch (const szego::error& e) {
        throw szego::invalid_spec(std::string("invalid tau: ") + e.what());
    }
}

szego::curve_model curve_of(const runspec& rs)
{
    if (rs.curve_kind == "sphere") return szego::curve_model::sphere();
    return szego::curve_model::torus(tau_from(rs.tau));
}

// ---------------------------------------------------------------------------
// Suites

std::vector<szego::identity_report> run_one_suite(const runspec& rs, const suite_selection& sel)
{
    using namespace szego;
    const curve_model curve = curve_of(rs);
    const run_policy& rp = rs.policy;
    const bool torus = curve.is_torus();

    auto bundle_or_random = [&](int default_rank) {
        if (!rs.bundle.empty()) return decomposable_bundle(rs.bundle);
        if (!torus) return decomposable_bundle({bundle_point(0.0)});
        sampler rng(rp.seed ^ 0x9e3779b97f4a7c15ull);
        std::vector<bundle_point> pts;
        for (int i = 0; i < default_rank; ++i) pts.push_back(rng.bundle_off_divisor(curve.tau(), rp.trunc));
        return decomposable_bundle(std::move(pts));
    };
    auto fn = [&] {
        return torus ? test_function::weierstrass_shifted(point_on_curve(0.3))
                     : test_function::sphere_coordinate();
    };

    if (sel.name == "composition") {
        const double tol = sel.tolerance.value_or(torus ? 1e-8 : 1e-13);
        return {verify_composition_identity(curve, bundle_or_random(1), fn(), sel.instances.value_or(100), rp, tol)};
    }
    if (sel.name == "degenerate") {
        return verify_degenerate_identity(curve, bundle_or_random(1), fn(), sel.instances.value_or(30), rp,
                                          sel.tolerance.value_or(1e-7));
    }
    if (sel.name == "determinant") {
        if (!torus) throw invalid_spec("suite 'determinant' requires a torus");
        auto rep = verify_determinant_theorem(curve, {1, 2, 3}, sel.instances.value_or(100), rp,
                                              sel.tolerance.value_or(1e-9));
        return {std::move(rep), verify_determinant_near_divisor(curve, rp)};
    }
    if (sel.name == "residue") {
        if (!torus) throw invalid_spec("suite 'residue' requires a torus");
        return {verify_residue_normalization(curve, sel.instances.value_or(100), rp,
                                             sel.tolerance.value_or(1e-8), {1, 2, 3}, rs.bundle)};
    }
    if (sel.name == "two-delta") {
        if (!torus) throw invalid_spec("suite 'two-delta' requires a torus");
        const int n = sel.instances.value_or(100);
        return {verify_two_delta(curve, n, rp, sel.tolerance.value_or(1e-7)),
                verify_torsor_difference(curve, std::max(1, n / 2), rp)};
    }
    if (sel.name == "three-delta") {
        if (!torus) throw invalid_spec("suite 'three-delta' requires a torus");
        return {verify_three_delta(curve, sel.instances.value_or(10), rp, sel.tolerance.value_or(1e-7))};
    }
    if (sel.name == "divisor") {
        if (!torus) throw invalid_spec("suite 'divisor' requires a torus");
        return {verify_divisor_behavior(curve, rp)};
    }
    throw invalid_spec("unknown suite: " + sel.name);
}

std::vector<suite_selection> default_suites(const runspec& rs)
{
    if (rs.curve_kind == "sphere") return {{"composition", {}, {}}, {"degenerate", {}, {}}};
    return {{"composition", {}, {}}, {"degenerate", {}, {}}, {"determinant", {}, {}},
            {"residue", {}, {}},     {"two-delta", {}, {}},  {"three-delta", {}, {}},
            {"divisor", {}, {}}};
}

int cmd_verify(const std::string& spec_path, const std::optional<std::string>& output_override)
{
    runspec rs = parse_runspec(spec_path);
    if (output_override) rs.output = *output_override;
    std::vector<suite_selection> suites = rs.suites.empty() ? default_suites(rs) : rs.suites;

    // Validate every suite name before evaluating anything.
    for (const suite_selection& sel : suites) {
        static const char* known[] = {"composition", "degenerate", "determinant", "residue",
                                      "two-delta",   "three-delta", "divisor"};
        bool ok = false;
        for (const char* k : known) ok = ok || sel.name == k;
        if (!ok) throw szego::invalid_spec("unknown suite: " + sel.name);
    }

    std::vector<szego::identity_report> reports;
    for (const suite_selection& sel : suites) {
        for (auto& rep : run_one_suite(rs, sel)) reports.push_back(std::move(rep));
    }

    std::ofstream out(rs.output);
    if (!out) throw szego::invalid_spec("cannot write report to " + rs.output);
    out << szego::to_json(reports).dump(2) << "\n";

    bool all_passed = true;
    for (const auto& rep : reports) {
        all_passed = all_passed && rep.passed;
        std::printf("%s %-24s instances=%-4d max_rel_error=%.6g tolerance=%.3g\n",
                    rep.passed ? "PASS" : "FAIL", rep.identity_name.c_str(), rep.instances,
                    rep.max_rel_error, rep.tolerance);
    }
    std::printf("report written to %s\n", rs.output.c_str());
    return all_passed ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Fixture freezing (extended-precision oracle mode)

using cldouble = std::complex<long double>;

cldouble theta_hp(cdouble z, const szego::riemann_matrix& tau, const szego::truncation_policy& pol,
                  int dz, int mult)
{
    szego::theta_request req({z}, tau);
    if (dz > 0) req.deriv_z = {dz};
    req.policy = pol;
    return szego::theta_highprec(req, mult);
}

cldouble theta1_hp(cdouble u, const szego::riemann_matrix& tau, const szego::truncation_policy& pol,
                   int dz, int mult)
{
    szego::theta_request req({u}, tau, szego::theta_char({0.5}, {0.5}));
    if (dz > 0) req.deriv_z = {dz};
    req.policy = pol;
    return -szego::theta_highprec(req, mult);
}

json complex_json(cldouble v)
{
    return json{{"re", static_cast<double>(v.real())}, {"im", static_cast<double>(v.imag())}};
}

int cmd_freeze_fixtures(const std::string& spec_path, const std::optional<std::string>& output_override,
                        int radius_multiplier)
{
    runspec rs = parse_runspec(spec_path);
    if (rs.curve_kind != "torus") throw szego::invalid_spec("freeze-fixtures requires a torus curve");
    std::string output = output_override.value_or("fixtures.json");

    const szego::riemann_matrix tau = tau_from(rs.tau);
    const szego::truncation_policy& pol = rs.policy.trunc;
    const int m = radius_multiplier;

    const cldouble t0 = theta_hp(0.0, tau, pol, 0, m);
    const cldouble t1p = theta1_hp(0.0, tau, pol, 1, m);
    const cldouble t1ppp = theta1_hp(0.0, tau, pol, 3, m);

    const cdouble u(0.3, 0.0);
    const cldouble w0 = theta1_hp(u, tau, pol, 0, m);
    const cldouble w1 = theta1_hp(u, tau, pol, 1, m);
    const cldouble w2 = theta1_hp(u, tau, pol, 2, m);
    const cldouble w3 = theta1_hp(u, tau, pol, 3, m);
    const cldouble r = w1 / w0;
    const cldouble p_rel = r * r - w2 / w0;
    const cldouble p_prime = -(w3 / w0 - 3.0L * w2 * w1 / (w0 * w0) + 2.0L * r * r * r);

    const cdouble zs(0.37, 0.21), xs(0.1, 0.0), ys(0.45, 0.0);
    const cldouble prime = theta1_hp(ys - xs, tau, pol, 0, m) / t1p;
    const cldouble szego_sample = theta_hp(zs + (ys - xs), tau, pol, 0, m) / (theta_hp(zs, tau, pol, 0, m) * prime);

    szego::theta_request base({cdouble(0, 0)}, tau);
    base.policy = pol;
    base.policy.target_tolerance = std::min(pol.target_tolerance, 1e-30);

    // Date stamp for provenance; value comparisons never read it.
    char datebuf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(datebuf, sizeof datebuf, "%Y-%m-%d", &tm_utc);

    json out{{"metadata",
              {{"oracle_radius_multiplier", m},
               {"oracle_base_radius", szego::planned_radius(base)},
               {"oracle_tail_target", 1e-30},
               {"date", datebuf},
               {"seed", rs.policy.seed},
               {"tau", szego::to_json(rs.tau)},
               {"policy", szego::to_json(rs.policy)}}},
             {"fixtures",
              {{"theta_at_zero", complex_json(t0)},
               {"theta1_prime_at_zero", complex_json(t1p)},
               {"theta1_triple_prime_at_zero", complex_json(t1ppp)},
               {"c1_offset", complex_json(-t1ppp / (6.0L * t1p))},
               {"p_rel_at_0p3", complex_json(p_rel)},
               {"p_prime_rel_at_0p3", complex_json(p_prime)},
               {"szego_at_sample", complex_json(szego_sample)}}}};

    std::ofstream f(output);
    if (!f) throw szego::invalid_spec("cannot write fixtures to " + output);
    f << out.dump(2) << "\n";
    std::printf("fixtures written to %s\n", output.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// Point evaluations

struct eval_options {
    std::string tau = "0,1";
    std::string z = "0,0";
    std::string chr;
    std::string curve = "torus";
    std::string x = "0,0";
    std::string y = "0,0";
    std::string bundle = "0,0";
    double ring_radius = szego::default_ring_radius;
    int samples = szego::default_contour_samples;
    szego::truncation_policy pol;
};

szego::curve_model eval_curve(const eval_options& o)
{
    if (o.curve == "sphere") return szego::curve_model::sphere();
    if (o.curve == "torus") return szego::curve_model::torus(tau_from(parse_complex(o.tau)));
    throw szego::invalid_spec("--curve must be sphere or torus");
}

int cmd_eval_theta(const eval_options& o)
{
    const auto tau = tau_from(parse_complex(o.tau));
    szego::theta_char chi = szego::theta_char::zero(1);
    if (!o.chr.empty()) {
        const cdouble ab = parse_complex(o.chr);
        chi = szego::theta_char({ab.real()}, {ab.imag()});
    }
    szego::theta_request req({parse_complex(o.z)}, tau, chi);
    req.policy = o.pol;
    std::cout << szego::to_json(szego::theta(req)).dump() << "\n";
    return 0;
}

int cmd_eval_prime_form(const eval_options& o)
{
    const auto curve = eval_curve(o);
    const cdouble v = szego::prime_form(parse_complex(o.x), parse_complex(o.y), curve, o.pol);
    std::cout << szego::to_json(v).dump() << "\n";
    return 0;
}

int cmd_eval_szego(const eval_options& o)
{
    const auto curve = eval_curve(o);
    const cdouble v = szego::szego_line(parse_complex(o.x), parse_complex(o.y),
                                        szego::bundle_point(parse_complex(o.bundle)), curve, o.pol);
    std::cout << szego::to_json(v).dump() << "\n";
    return 0;
}

int cmd_eval_expansion(const eval_options& o)
{
    const auto curve = eval_curve(o);
    const auto d = szego::expand_diagonal(parse_complex(o.x), szego::bundle_point(parse_complex(o.bundle)),
                                          curve, o.pol, o.ring_radius, o.samples);
    std::cout << json{{"c_minus1", szego::to_json(d.c_minus1)},
                      {"c0", szego::to_json(d.c0)},
                      {"c1", szego::to_json(d.c1)}}
                     .dump()
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Theta functions, prime forms and Szegő kernels on explicit curve models"};
    app.require_subcommand(1);

    eval_options eo;
    try {
        eo.pol = policy_from_env().trunc;
    } catch (const szego::error& e) {
        print_error(error_kind(e), e.what());
        return 2;
    }

    CLI::App* eval = app.add_subcommand("eval", "evaluate a single quantity, printed as JSON {re, im}");
    eval->require_subcommand(1);
    auto add_policy_flags = [&](CLI::App* c) {
        c->add_option("--theta-tolerance", eo.pol.target_tolerance, "absolute tail bound for theta sums");
        c->add_option("--max-radius", eo.pol.max_radius, "hard cap on the lattice radius");
    };

    CLI::App* ev_theta = eval->add_subcommand("theta", "theta[a,b](z, tau)");
    ev_theta->add_option("--tau", eo.tau, "modulus as RE,IM")->required();
    ev_theta->add_option("--z", eo.z, "argument as RE,IM")->required();
    ev_theta->add_option("--char", eo.chr, "characteristic as A,B with entries 0 or 0.5");
    add_policy_flags(ev_theta);

    CLI::App* ev_prime = eval->add_subcommand("prime-form", "prime form E(x, y)");
    ev_prime->add_option("--curve", eo.curve, "sphere or torus");
    ev_prime->add_option("--tau", eo.tau, "torus modulus as RE,IM");
    ev_prime->add_option("--x", eo.x)->required();
    ev_prime->add_option("--y", eo.y)->required();
    add_policy_flags(ev_prime);

    CLI::App* ev_szego = eval->add_subcommand("szego", "Szegő kernel s(x, y) for a line bundle");
    ev_szego->add_option("--curve", eo.curve, "sphere or torus");
    ev_szego->add_option("--tau", eo.tau, "torus modulus as RE,IM");
    ev_szego->add_option("--x", eo.x)->required();
    ev_szego->add_option("--y", eo.y)->required();
    ev_szego->add_option("--L", eo.bundle, "bundle point z as RE,IM");
    add_policy_flags(ev_szego);

    CLI::App* ev_exp = eval->add_subcommand("expansion", "diagonal Laurent data (c_-1, c0, c1)");
    ev_exp->add_option("--curve", eo.curve, "sphere or torus");
    ev_exp->add_option("--tau", eo.tau, "torus modulus as RE,IM");
    ev_exp->add_option("--x", eo.x, "base point");
    ev_exp->add_option("--L", eo.bundle, "bundle point z as RE,IM");
    ev_exp->add_option("--ring-radius", eo.ring_radius, "contour radius");
    ev_exp->add_option("--samples", eo.samples, "contour sample count");
    add_policy_flags(ev_exp);

    std::string spec_path;
    std::optional<std::string> output_override;
    std::string output_flag;
    int radius_multiplier = 10;

    CLI::App* verify = app.add_subcommand("verify", "run identity suites from a run spec, write a JSON report");
    verify->add_option("spec", spec_path, "run spec JSON file")->required();
    verify->add_option("--output", output_flag, "override the report output path");

    CLI::App* freeze = app.add_subcommand("freeze-fixtures", "write high-precision fixture values");
    freeze->add_option("spec", spec_path, "run spec JSON file")->required();
    freeze->add_option("--output", output_flag, "fixture output path");
    freeze->add_option("--radius-multiplier", radius_multiplier, "oracle radius multiplier (default 10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("InvalidSpec", e.what());
        return 2;
    }
    if (!output_flag.empty()) output_override = output_flag;

    try {
        if (eval->parsed()) {
            if (ev_theta->parsed()) return cmd_eval_theta(eo);
            if (ev_prime->parsed()) return cmd_eval_prime_form(eo);
            if (ev_szego->parsed()) return cmd_eval_szego(eo);
            if (ev_exp->parsed()) return cmd_eval_expansion(eo);
        }
        if (verify->parsed()) return cmd_verify(spec_path, output_override);
        if (freeze->parsed()) return cmd_freeze_fixtures(spec_path, output_override, radius_multiplier);
    } catch (const szego::invalid_spec& e) {
        print_error("InvalidSpec", e.what());
        return 2;
    } catch (const szego::error& e) {
        print_error(error_kind(e), e.what());
        return 3;
    } catch (const json::exception& e) {
        print_error("InvalidSpec", e.what());
        return 2;
    }
    return 2;
}
