#include "fourcalc/io.hpp"

#include "fourcalc/error.hpp"

#include <fstream>
#include <sstream>

namespace fourcalc::io {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

double number_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError(std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
}

std::vector<double> number_list(const Json& j, const char* key) {
    if (!j.contains(key)) return {};
    if (!j[key].is_array()) throw ConfigError(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string csv_number(double v) { return format_double(v); }

}  // namespace

Json to_json(const FourierCoefficients& c) {
    Json j;
    j["L"] = c.L();
    j["a0"] = c.a0();
    j["a"] = c.a_values();
    j["b"] = c.b_values();
    return j;
}

FourierCoefficients coefficients_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("coefficients must be a JSON object");
    try {
        return FourierCoefficients(number_field(j, "L"), number_field(j, "a0"), number_list(j, "a"),
                                   number_list(j, "b"));
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
}

FourierCoefficients read_coefficients(const std::string& path) {
    return coefficients_from_json(parse_json(read_file(path), path));
}

std::string coefficients_csv(const FourierCoefficients& c) {
    std::string out = "n,a_n,b_n\n";
    out += "0," + csv_number(c.a0()) + ",\n";
    for (int n = 1; n <= c.N(); ++n)
        out += std::to_string(n) + "," + csv_number(c.a(n)) + "," + csv_number(c.b(n)) + "\n";
    return out;
}

Json to_json(const IntegralEstimate& e) {
    Json j;
    j["value"] = e.value;
    j["converged"] = e.converged;
    j["levels"] = e.levels;
    j["cells"] = e.cells;
    j["last_delta"] = e.last_delta;
    if (e.bounds) j["bounds"] = {{"m", e.bounds->m}, {"M", e.bounds->M}, {"grid", e.bounds->grid}};
    return j;
}

Json to_json(const ParamEnv& env) {
    Json j = Json::object();
    for (const auto& [name, value] : env.values()) j[name] = value;
    return j;
}

Json to_json(const DerivativeCheckReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["samples"] = r.sample_count;
    j["max_rel_deviation"] = r.max_rel_deviation;
    j["worst_x"] = r.worst_x;
    j["worst_env"] = to_json(r.worst_env);
    j["steps"] = r.steps;
    return j;
}

Json to_json(const ParamConstraints& c) {
    Json params = Json::array();
    for (const auto& p : c.params)
        params.push_back({{"name", p.name}, {"integer", p.integer}, {"lo", p.lo}, {"hi", p.hi}, {"nonzero", p.nonzero}});
    Json nonzero = Json::array();
    for (const auto& e : c.nonzero) nonzero.push_back(to_string(e));
    return Json{{"params", params}, {"nonzero", nonzero}};
}

ParamConstraints constraints_from_json(const Json& j) {
    ParamConstraints c;
    if (j.is_null()) return c;
    if (!j.is_object()) throw ConfigError("constraints must be an object");
    if (j.contains("params")) {
        for (const auto& p : j["params"]) {
            ParamSpec spec;
            if (!p.contains("name") || !p["name"].is_string()) throw ConfigError("parameter spec needs a name");
            spec.name = p["name"].get<std::string>();
            spec.integer = p.value("integer", false);
            spec.lo = p.value("lo", spec.lo);
            spec.hi = p.value("hi", spec.hi);
            spec.nonzero = p.value("nonzero", false);
            c.params.push_back(spec);
        }
    }
    if (j.contains("nonzero")) {
        for (const auto& e : j["nonzero"]) {
            if (!e.is_string()) throw ConfigError("nonzero conditions must be expression strings");
            c.nonzero.push_back(parse_expr(e.get<std::string>()));
        }
    }
    return c;
}

std::vector<AntiderivativeSpec> read_registry_specs(const std::string& path) {
    const Json doc = parse_json(read_file(path), path);
    if (!doc.is_array()) throw ConfigError(path + ": registry must be a JSON array");
    std::vector<AntiderivativeSpec> specs;
    for (const auto& e : doc) {
        if (!e.is_object() || !e.contains("name") || !e.contains("f") || !e.contains("g") || !e.contains("domain"))
            throw ConfigError(path + ": entry needs name, f, g, domain");
        const auto& dom = e["domain"];
        if (!dom.is_array() || dom.size() != 2 || !dom[0].is_number() || !dom[1].is_number())
            throw ConfigError(path + ": domain must be [lo, hi]");
        specs.push_back({e["name"].get<std::string>(), e["f"].get<std::string>(), e["g"].get<std::string>(),
                         dom[0].get<double>(), dom[1].get<double>(),
                         constraints_from_json(e.value("constraints", Json()))});
    }
    return specs;
}

Json to_json(const AntiderivativeEntry& e) {
    Json j;
    j["name"] = e.name;
    j["f"] = to_string(e.f);
    j["g"] = to_string(e.g);
    j["domain"] = {e.domain.lo(), e.domain.hi()};
    j["constraints"] = to_json(e.constraints);
    j["verified"] = e.verified;
    j["verification"] = {{"tol", e.verification.tol},
                         {"envs_checked", e.verification.envs_checked},
                         {"max_rel_deviation", e.verification.max_rel_deviation},
                         {"worst_env", to_json(e.verification.worst_env)},
                         {"worst_x", e.verification.worst_x}};
    return j;
}

Json to_json(const AntiderivativeRegistry& r) {
    Json j = Json::array();
    for (const auto& e : r.entries()) j.push_back(to_json(e));
    return j;
}

Json to_json(const FtcReport& r) {
    Json steps = Json::array();
    for (const auto& s : r.steps) steps.push_back({{"name", s.name}, {"status", to_string(s.status)}, {"detail", s.detail}});
    Json j;
    j["value"] = r.value ? Json(*r.value) : Json();
    j["quadrature"] = r.quadrature ? Json(*r.quadrature) : Json();
    j["quadrature_converged"] = r.quadrature_converged;
    j["cross_check_delta"] = r.cross_check_delta;
    j["confidence"] = r.confidence == Confidence::High ? "high" : "downgraded";
    j["steps"] = steps;
    return j;
}

Json to_json(const OrthogonalityCheck& c) {
    Json j;
    j["status"] = to_string(c.status);
    j["closed_form"] = c.closed_form;
    j["quadrature"] = c.quadrature;
    j["delta"] = c.delta;
    return j;
}

Json to_json(const SumRuleReport& r) {
    Json j;
    j["status"] = to_string(r.status);
    j["terms"] = r.terms;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["delta"] = r.delta;
    j["ftc1"] = {{"pass", r.ftc1_pass}, {"samples", r.ftc1_samples}, {"max_deviation", r.ftc1_max_deviation}};
    return j;
}

namespace {

Json violation_json(const std::optional<MonotoneViolation>& v) {
    if (!v) return Json();
    return Json{{"x", v->x}, {"N", v->N}};
}

}  // namespace

Json to_json(const MonotoneReport& r) {
    Json j;
    j["verdict"] = to_string(r.verdict);
    j["increasing"] = r.increasing;
    j["decreasing"] = r.decreasing;
    j["increasing_violation"] = violation_json(r.increasing_violation);
    j["decreasing_violation"] = violation_json(r.decreasing_violation);
    return j;
}

Json to_json(const ConvergenceReport& r) {
    Json ladder = Json::array();
    for (const auto& p : r.ladder) ladder.push_back({{"N", p.N}, {"sup_dev", p.sup_dev}, {"argmax_x", p.argmax_x}});
    Json j;
    j["sequence"] = r.sequence;
    j["limit"] = r.limit;
    j["domain"] = {r.dom.lo(), r.dom.hi()};
    j["grid"] = r.grid;
    j["ladder"] = ladder;
    j["pointwise"] = to_string(r.pointwise);
    j["pointwise_failures"] = r.pointwise_failures;
    j["uniform"] = to_string(r.uniform);
    j["fitted_decay"] = r.fitted_decay;
    j["threshold"] = r.threshold;
    if (r.monotone) j["monotone"] = to_json(*r.monotone);
    if (r.dini) j["dini"] = {{"state", to_string(r.dini->state)},
                             {"preconditions_met", r.dini->preconditions_met},
                             {"failed_preconditions", r.dini->failed_preconditions}};
    if (r.limit_continuity)
        j["limit_continuity"] = {{"verdict", to_string(r.limit_continuity->verdict)},
                                 {"terms_continuous", r.limit_continuity->terms_continuous},
                                 {"inconsistent", r.limit_continuity->inconsistent}};
    j["invariants_hold"] = r.invariants_hold();
    return j;
}

Json to_json(const InfiniteSumRuleReport& r) {
    Json rungs = Json::array();
    for (const auto& g : r.rungs)
        rungs.push_back({{"N", g.N}, {"A", g.A}, {"B", g.B}, {"delta", g.delta}, {"converged", g.converged}});
    Json j;
    j["status"] = to_string(r.status);
    j["rungs"] = rungs;
    j["cross_index"] = r.cross_index;
    j["stable"] = r.stable;
    return j;
}

std::string ladder_csv(const ConvergenceReport& r) {
    std::string out = "N,sup_dev\n";
    for (const auto& p : r.ladder) out += std::to_string(p.N) + "," + csv_number(p.sup_dev) + "\n";
    return out;
}

}  // namespace fourcalc::io
