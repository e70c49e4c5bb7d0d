// qmod: expand q-series, check identities, verify transformation laws.
#include "qmod/identities.hpp"
#include "qmod/nahm.hpp"
#include "qmod/transforms.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace qmod;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    std::string target;
    int order = 0;  // 0: command default
    long prec = 192;
    std::vector<std::string> taus;
    std::string format = "text";
    int jobs = 1;
    std::string filter;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt_log10(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << x;
    return os.str();
}

json echo(const std::vector<std::string>& argv) {
    json a = json::array();
    for (const auto& s : argv) a.push_back(s);
    return a;
}

void emit(const json& body, const json& timing, const Options& o, const std::string& text) {
    if (o.format == "json") {
        json out = body;
        out["timing"] = timing;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// expand -----------------------------------------------------------------

int cmd_expand(const Options& o, const std::vector<std::string>& argv) {
    const int order = o.order > 0 ? o.order : 20;
    if (order > kMaxIdentityOrder) throw std::invalid_argument("order above " + std::to_string(kMaxIdentityOrder));
    auto t0 = Clock::now();
    PuiseuxSeries s;
    std::string kind;
    const bool is_file = std::filesystem::is_regular_file(o.target);
    if (is_file || (!o.target.empty() && o.target.front() == '{')) {
        auto q = parse_quadruple_json(is_file ? read_file(o.target) : o.target);
        s = nahm_sum(q, Frac(order));
        kind = "quadruple";
    } else {
        s = expand_family(parse_family(o.target), Frac(order));
        kind = "family";
    }
    const double wall = seconds_since(t0);
    json body{{"schema", 1}, {"command", echo(argv)}, {"input", o.target}, {"kind", kind}, {"order", order}};
    json terms = json::array();
    for (const auto& [e, c] : s.terms())
        if (e < Frac(order)) terms.push_back({{"exponent", e.str()}, {"coefficient", c.str()}});
    body["terms"] = terms;
    body["verdict"] = "ok";
    std::ostringstream text;
    for (const auto& [e, c] : s.terms())
        if (e < Frac(order)) text << e.str() << ": " << c.str() << "\n";
    text << "+ O(q^" << order << ")\n";
    emit(body, {{"total_seconds", wall}}, o, text.str());
    return 0;
}

// check ------------------------------------------------------------------

int cmd_check(const Options& o, const std::vector<std::string>& argv) {
    std::vector<std::string> names;
    if (o.target == "all") {
        for (const auto& c : registry_identities()) names.push_back(c.name);
    } else {
        find_identity(o.target);
        names.push_back(o.target);
    }
    std::optional<Frac> T;
    if (o.order > 0) {
        if (o.order > kMaxIdentityOrder) throw std::invalid_argument("order above " + std::to_string(kMaxIdentityOrder));
        T = Frac(o.order);
    }
    std::vector<IdentityResult> res(names.size());
    std::vector<double> wall(names.size());
    std::vector<std::string> err(names.size());
    auto t0 = Clock::now();
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, o.jobs))
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto ti = Clock::now();
        try {
            res[i] = check_identity(names[i], T);
        } catch (const std::exception& e) {
            err[i] = e.what();
        }
        wall[i] = seconds_since(ti);
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!err[i].empty()) throw std::runtime_error(names[i] + ": " + err[i]);

    bool all = true;
    json cases = json::array(), times = json::object();
    std::ostringstream text;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& r = res[i];
        const auto& c = find_identity(r.name);
        all = all && r.pass;
        json j{{"name", r.name},  {"anchor", c.anchor}, {"status", status_str(r.status)},
               {"order", r.order.str()}, {"pass", r.pass}, {"verdict", r.verdict}};
        if (r.exponent) j["mismatch"] = {{"exponent", r.exponent->str()}, {"left", r.left_coeff}, {"right", r.right_coeff}};
        cases.push_back(j);
        times[r.name] = wall[i];
        text << (r.pass ? "PASS " : "FAIL ") << std::left << std::setw(28) << r.name << r.verdict;
        if (r.exponent) text << " (left " << r.left_coeff << ", right " << r.right_coeff << ")";
        text << "\n";
    }
    text << (all ? "all " : "NOT all ") << names.size() << " identities hold\n";
    json body{{"schema", 1}, {"command", echo(argv)}, {"cases", cases}, {"verdict", all ? "pass" : "fail"}};
    emit(body, {{"total_seconds", seconds_since(t0)}, {"cases", times}}, o, text.str());
    return all ? 0 : 1;
}

// transform --------------------------------------------------------------

const char* expect_str(Expectation e) { return e == Expectation::Pass ? "pass" : "fail"; }

int cmd_transform(const Options& o, const std::vector<std::string>& argv) {
    if (o.prec < 64) throw std::invalid_argument("precision below 64 bits");
    std::vector<const TransformCase*> cases;
    if (o.target == "all") {
        for (const auto& c : registry_transform_cases()) cases.push_back(&c);
    } else {
        cases.push_back(&find_transform_case(o.target));
    }
    const auto taus = o.taus.empty() ? default_sample_points() : o.taus;
    for (const auto& t : taus) parse_tau_exact(t);  // reject bad points before any work

    std::vector<TransformReport> reps(cases.size());
    std::vector<double> wall(cases.size());
    std::vector<std::string> err(cases.size());
    auto t0 = Clock::now();
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, o.jobs))
    for (std::size_t i = 0; i < cases.size(); ++i) {
        auto ti = Clock::now();
        try {
            reps[i] = verify_transform(*cases[i], taus, static_cast<mpfr_prec_t>(o.prec));
        } catch (const std::exception& e) {
            err[i] = e.what();
        }
        wall[i] = seconds_since(ti);
    }
    for (std::size_t i = 0; i < cases.size(); ++i)
        if (!err[i].empty()) throw std::runtime_error(cases[i]->name + ": " + err[i]);

    bool all = true;
    json jc = json::array(), times = json::object();
    std::ostringstream text;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = *cases[i];
        const auto& rep = reps[i];
        all = all && rep.ok();
        json rows = json::array();
        for (const auto& r : rep.rows) {
            json jr{{"rule", r.kind},
                    {"tau", r.tau},
                    {"expect", expect_str(r.expect)},
                    {"log10_residual", std::round(r.log10_residual * 10) / 10},
                    {"converged", r.converged},
                    {"ok", r.ok}};
            if (!r.diagnosis.empty()) jr["diagnosis"] = r.diagnosis;
            rows.push_back(jr);
            std::string tag;
            if (r.expect == Expectation::Fail) tag = r.ok ? "EXPECTED-FAIL" : "UNEXPECTED-PASS";
            else tag = r.ok ? "PASS" : "FAIL";
            text << std::left << std::setw(16) << tag << std::setw(14) << c.name << std::setw(10) << r.kind
                 << std::setw(14) << r.tau << "log10 residual " << fmt_log10(r.log10_residual);
            if (!r.diagnosis.empty()) text << "  [" << r.diagnosis << "]";
            text << "\n";
        }
        jc.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"level", c.level},
                      {"precision_bits", o.prec},
                      {"ok", rep.ok()},
                      {"rules", rows}});
        times[c.name] = wall[i];
    }
    text << (all ? "all " : "NOT all ") << cases.size() << " transformation cases behave as expected\n";
    json body{{"schema", 1}, {"command", echo(argv)}, {"cases", jc}, {"verdict", all ? "pass" : "fail"}};
    emit(body, {{"total_seconds", seconds_since(t0)}, {"cases", times}}, o, text.str());
    return all ? 0 : 1;
}

// list -------------------------------------------------------------------

int cmd_list(const Options& o, const std::vector<std::string>& argv) {
    json items = json::array();
    std::ostringstream text;
    if (o.target == "identities") {
        for (const auto* c : list_identities(o.filter)) {
            json tags = json::array();
            for (const auto& t : c->tags) tags.push_back(t);
            items.push_back({{"name", c->name},
                             {"anchor", c->anchor},
                             {"status", status_str(c->status)},
                             {"ring", c->conductor == 1 ? "Q" : "Q(zeta_" + std::to_string(c->conductor) + ")"},
                             {"rank", c->rank},
                             {"default_order", c->default_order},
                             {"tags", tags}});
            text << std::left << std::setw(28) << c->name << std::setw(13) << status_str(c->status) << std::setw(6)
                 << c->default_order << c->anchor << "\n";
        }
    } else if (o.target == "transforms") {
        for (const auto& c : registry_transform_cases()) {
            if (!o.filter.empty() && c.name.find(o.filter) == std::string::npos) continue;
            json rules = json::array();
            for (const auto& r : c.rules)
                rules.push_back({{"kind", r.kind},
                                 {"map", r.left.str()},
                                 {"matrix_shape", {r.matrix.rows(), r.matrix.cols()}},
                                 {"expect", expect_str(r.expect)}});
            json comps = json::array();
            for (const auto& x : c.components) comps.push_back(x.label);
            items.push_back({{"name", c.name},
                             {"anchor", c.anchor},
                             {"level", c.level},
                             {"components", comps},
                             {"rules", rules}});
            text << std::left << std::setw(14) << c.name << "level " << std::setw(4) << c.level << "dim "
                 << std::setw(4) << c.components.size() << c.anchor << "\n";
        }
    } else {
        throw std::invalid_argument("list takes 'identities' or 'transforms'");
    }
    json body{{"schema", 1}, {"command", echo(argv)}, {"kind", o.target}, {"items", items}};
    emit(body, json::object(), o, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-series identities and modular transformations"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--jobs", o.jobs, "parallel cases")->check(CLI::PositiveNumber);
    };
    auto* expand = app.add_subcommand("expand", "expand a sum family or a quadruple JSON file");
    expand->add_option("spec", o.target, "family string (\"AG k=2 i=2\") or quadruple JSON file")->required();
    expand->add_option("--order", o.order, "truncation order")->check(CLI::PositiveNumber);
    add_common(expand);

    auto* check = app.add_subcommand("check", "check identities exactly");
    check->add_option("name", o.target, "identity name or 'all'")->required();
    check->add_option("--order", o.order, "override the default order")->check(CLI::PositiveNumber);
    add_common(check);

    auto* transform = app.add_subcommand("transform", "verify transformation laws numerically");
    transform->add_option("name", o.target, "case name or 'all'")->required();
    transform->add_option("--prec", o.prec, "working precision in bits (>= 64)");
    transform->add_option("--tau", o.taus, "sample point a/b+c/d*i, repeatable");
    add_common(transform);

    auto* list = app.add_subcommand("list", "print a catalog");
    list->add_option("kind", o.target, "identities or transforms")->required();
    list->add_option("--filter", o.filter, "proved, conjectural, cyclotomic, or a name/tag substring");
    add_common(list);

    CLI11_PARSE(app, argc, argv);
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (*expand) return cmd_expand(o, args);
        if (*check) return cmd_check(o, args);
        if (*transform) return cmd_transform(o, args);
        return cmd_list(o, args);
    } catch (const QuadrupleParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "not positive definite: pivot " << e.index << " is " << e.pivot.get_str() << "\n";
    } catch (const std::out_of_range& e) {
        std::cerr << "unknown name: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
}
