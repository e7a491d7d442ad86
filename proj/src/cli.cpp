#include "fourcalc/cli.hpp"

#include "fourcalc/converge.hpp"
#include "fourcalc/error.hpp"
#include "fourcalc/fourier.hpp"
#include "fourcalc/ftc.hpp"
#include "fourcalc/io.hpp"
#include "fourcalc/riemann.hpp"
#include "fourcalc/symdiff.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <sstream>

namespace fourcalc::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

Format parse_format(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "text") return Format::Text;
    throw ConfigError("format must be json, csv or text, got '" + s + "'");
}

double parse_config_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' needs a number, got '" + value + "'");
    }
}

/// A constant expression such as "2.5", "pi" or "-pi/2".
double number_arg(const std::string& text, const std::string& what) {
    const Expr e = parse_expr(text);
    if (depends_on_x(e) || !free_params(e).empty()) throw ArgumentError(what + " must be a constant, got '" + text + "'");
    return eval_expr(e, 0.0, ParamEnv{});
}

Interval domain_arg(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ArgumentError("domain must be 'a,b', got '" + text + "'");
    return Interval(number_arg(text.substr(0, comma), "domain start"), number_arg(text.substr(comma + 1), "domain end"));
}

ParamEnv params_arg(const std::vector<std::string>& items) {
    ParamEnv env;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            part = trim(part);
            if (part.empty()) continue;
            const auto eq = part.find('=');
            if (eq == std::string::npos) throw ArgumentError("parameter must be name=value, got '" + part + "'");
            env.bind(trim(part.substr(0, eq)), number_arg(trim(part.substr(eq + 1)), "parameter value"));
        }
    }
    return env;
}

std::vector<long> ladder_arg(const std::string& text) {
    std::vector<long> Ns;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        try {
            std::size_t used = 0;
            Ns.push_back(std::stol(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ArgumentError("N ladder entries must be integers, got '" + part + "'");
        }
    }
    return Ns;
}

void flatten(const io::Json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
        return;
    }
    if (j.is_array() && std::any_of(j.begin(), j.end(), [](const io::Json& v) { return v.is_structured(); })) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
        return;
    }
    out += prefix + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
}

std::string as_text(const io::Json& j) {
    std::string out;
    flatten(j, "", out);
    return out;
}

struct Result {
    std::string output;
    int code = kPass;
};

Result render(const io::Json& j, Format format, int code, const std::string* csv = nullptr) {
    switch (format) {
        case Format::Json:
            return {io::dump(j), code};
        case Format::Text:
            return {as_text(j), code};
        case Format::Csv:
            if (!csv) throw ArgumentError("csv output is not available for this command");
            return {*csv, code};
    }
    return {};
}

}  // namespace

Config parse_config(const std::string& text) {
    Config c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "tolerance") {
            const double t = parse_config_number(key, value);
            if (!(t > 0)) throw ConfigError("tolerance must be positive");
            c.tolerance = t;
        } else if (key == "grid") {
            const double g = parse_config_number(key, value);
            if (g < 16 || g != static_cast<int>(g)) throw ConfigError("grid must be an integer >= 16");
            c.grid = static_cast<int>(g);
        } else if (key == "refine_cap") {
            const double r = parse_config_number(key, value);
            if (r < 1 || r > 40 || r != static_cast<int>(r)) throw ConfigError("refine_cap must be an integer in [1, 40]");
            c.refine_cap = static_cast<int>(r);
        } else if (key == "format") {
            c.format = parse_format(value);
        } else if (key == "registry") {
            c.registry = value;
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return c;
}

Config load_config(const std::string& path) { return parse_config(io::read_file(path)); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symbolic-numeric calculus checks", "fourcalc"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string format_name;
    std::optional<double> tol;
    std::vector<std::string> params;
    app.add_option("--config", config_path, "key=value config file (default: $FOURCALC_CONFIG)");
    app.add_option("--format", format_name, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--tol", tol, "tolerance for the check");
    app.add_option("--params", params, "parameter bindings name=value")->take_all();

    std::string expr_text, g_text, domain_text;
    auto* diff = app.add_subcommand("diff", "differentiate and simplify");
    diff->add_option("EXPR", expr_text)->required();

    auto* checkderiv = app.add_subcommand("checkderiv", "check numerically that F = G'");
    checkderiv->add_option("F", expr_text)->required();
    checkderiv->add_option("G", g_text)->required();
    checkderiv->add_option("--domain", domain_text)->required();

    std::string ftc_name;
    auto* integrate = app.add_subcommand("integrate", "definite integral by refined Riemann sums");
    integrate->add_option("EXPR", expr_text)->required();
    integrate->add_option("--domain", domain_text)->required();
    integrate->add_option("--ftc", ftc_name, "evaluate through a registered antiderivative");

    std::string kind_text, L_text;
    int m = 0, n = 0;
    bool numeric_check = false;
    auto* orthog = app.add_subcommand("orthog", "closed-form orthogonality integral over [-L, L]");
    orthog->add_option("KIND", kind_text)->required();
    orthog->add_option("m", m)->required();
    orthog->add_option("n", n)->required();
    orthog->add_option("L", L_text)->required();
    orthog->add_flag("--check", numeric_check, "also compare against quadrature");

    auto* fourier = app.add_subcommand("fourier", "Fourier coefficients");
    fourier->require_subcommand(1);
    int N = 0;
    auto* coeffs = fourier->add_subcommand("coeffs", "coefficients of EXPR over [-L, L]");
    coeffs->add_option("EXPR", expr_text)->required();
    coeffs->add_option("--L", L_text)->required();
    coeffs->add_option("--N", N)->required()->check(CLI::NonNegativeNumber);
    std::string file1, file2, at_text;
    auto* synth = fourier->add_subcommand("synth", "evaluate a Fourier sum");
    synth->add_option("COEFFS", file1)->required();
    synth->add_option("--at", at_text)->required();
    auto* unique = fourier->add_subcommand("unique", "compare two coefficient sets");
    unique->add_option("C1", file1)->required();
    unique->add_option("C2", file2)->required();

    auto* converge = app.add_subcommand("converge", "convergence diagnostics for a function sequence");
    converge->require_subcommand(1);
    std::string index = "n", ns_text, limit_text, mode = "partial";
    long first = 0;
    int grid = 0;
    std::vector<CLI::App*> converge_cmds;
    const std::pair<const char*, const char*> converge_names[] = {
        {"uniform", "sup deviation ladder and verdicts"},
        {"dini", "uniform report plus monotonicity and Dini preconditions"},
        {"sumrule", "integral of the series against the series of integrals"}};
    for (const auto& [name, about] : converge_names) {
        auto* c = converge->add_subcommand(name, about);
        c->add_option("TEMPLATE", expr_text)->required();
        c->add_option("--index", index);
        c->add_option("--domain", domain_text)->required();
        c->add_option("--Ns", ns_text, "ascending, comma separated");
        c->add_option("--first", first, "first index");
        c->add_option("--mode", mode, "partial (S_N) or term (f_N)")->check(CLI::IsMember({"partial", "term"}));
        c->add_option("--limit", limit_text, "limit expression (default: reference partial sum)");
        c->add_option("--grid", grid);
        converge_cmds.push_back(c);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    Result result;
    try {
        Config config;
        if (config_path.empty())
            if (const char* env = std::getenv("FOURCALC_CONFIG"); env && *env) config_path = env;
        if (!config_path.empty()) config = load_config(config_path);
        const Format format = format_name.empty() ? config.format : parse_format(format_name);
        auto tolerance = [&](double fallback) { return tol ? *tol : config.tolerance.value_or(fallback); };
        if (tol && !(*tol > 0)) throw ArgumentError("--tol must be positive");
        const ParamEnv env = params_arg(params);

        if (*diff) {
            const Expr e = parse_expr(expr_text);
            const Expr d = differentiate(e);
            io::Json j;
            j["expr"] = to_string(e);
            j["derivative"] = to_string(d);
            j["simplified"] = to_string(simplify(d));
            result = format == Format::Text ? Result{j["simplified"].get<std::string>() + "\n", kPass}
                                            : render(j, format, kPass);
        } else if (*checkderiv) {
            const auto report =
                check_derivative(parse_expr(expr_text), parse_expr(g_text), domain_arg(domain_text), env, tolerance(1e-6));
            result = render(io::to_json(report), format, report.pass ? kPass : kFail);
        } else if (*integrate) {
            const Expr f = parse_expr(expr_text);
            const Interval dom = domain_arg(domain_text);
            if (ftc_name.empty()) {
                RefineOptions o;
                o.tol = tolerance(1e-10);
                o.max_doublings = config.refine_cap;
                const auto est = integrate_refine(f, dom, env, o);
                result = render(io::to_json(est), format, est.converged ? kPass : kInconclusive);
            } else {
                AntiderivativeRegistry registry = builtin_registry();
                if (!config.registry.empty())
                    for (const auto& spec : io::read_registry_specs(config.registry))
                        registry.add(register_antiderivative(spec.name, parse_expr(spec.f), parse_expr(spec.g),
                                                             Interval(spec.lo, spec.hi), spec.constraints));
                const auto entry = registry.find(ftc_name);
                if (!entry) throw ArgumentError("no antiderivative named '" + ftc_name + "'");
                if (!(normalize(f) == normalize(entry->f)))
                    throw ArgumentError("EXPR does not match the integrand of '" + ftc_name + "': " + to_string(entry->f));
                FtcOptions o;
                if (tol || config.tolerance) o.quadrature_tol = tolerance(o.quadrature_tol);
                const auto report = ftc2_evaluate(*entry, dom.lo(), dom.hi(), env, o);
                int code = kPass;
                if (!report.value)
                    code = kFail;
                else if (!report.quadrature_converged)
                    code = kInconclusive;
                else if (!report.cross_check_ok())
                    code = kFail;
                result = render(io::to_json(report), format, code);
            }
        } else if (*orthog) {
            const auto kind = parse_ortho_kind(kind_text);
            if (!kind) throw ArgumentError("KIND must be sin-sin, cos-cos or sin-cos");
            const double L = number_arg(L_text, "L");
            const auto v = orthogonality_integral(*kind, m, n, L);
            io::Json j;
            j["value"] = v.value();
            j["case"] = v.case_label;
            int code = kPass;
            if (numeric_check) {
                const auto c = orthogonality_numeric_check(*kind, m, n, L, tolerance(1e-6));
                j["check"] = io::to_json(c);
                code = c.status == CheckStatus::Pass ? kPass : c.status == CheckStatus::Fail ? kFail : kInconclusive;
            }
            result = render(j, format, code);
        } else if (*coeffs) {
            const auto nc = coeffs_numeric(parse_expr(expr_text), env, number_arg(L_text, "L"), N, tolerance(1e-6));
            if (!nc.converged)
                err << "warning: " << nc.failed_components << " coefficient integral(s) did not converge\n";
            const std::string csv = io::coefficients_csv(nc.coeffs);
            result = render(io::to_json(nc.coeffs), format, nc.converged ? kPass : kInconclusive, &csv);
        } else if (*synth) {
            const auto c = io::read_coefficients(file1);
            const double x = number_arg(at_text, "--at");
            io::Json j;
            j["x"] = x;
            j["value"] = fourier_sum_eval(c, x);
            result = render(j, format, kPass);
        } else if (*unique) {
            const double t = tolerance(1e-6);
            const bool equal = uniqueness_check(io::read_coefficients(file1), io::read_coefficients(file2), t);
            io::Json j;
            j["equal"] = equal;
            j["tol"] = t;
            result = format == Format::Text ? Result{equal ? "equal\n" : "different\n", equal ? kPass : kFail}
                                            : render(j, format, equal ? kPass : kFail);
        } else if (*converge) {
            const Interval dom = domain_arg(domain_text);
            const auto seq = FunctionSequence::from_text(expr_text, index, first, mode == "partial", 100'000'000);
            ConvergenceOptions o;
            o.grid = grid > 0 ? grid : config.grid;
            if (!ns_text.empty()) o.Ns = ladder_arg(ns_text);
            const LimitSpec limit = limit_text.empty() ? LimitSpec::reference() : LimitSpec::symbolic(parse_expr(limit_text));
            if (*converge_cmds[0]) {
                const auto r = uniform_report(seq, limit, dom, env, o);
                const std::string csv = io::ladder_csv(r);
                const bool ok = r.uniform == Verdict::Yes && r.invariants_hold();
                result = render(io::to_json(r), format, ok ? kPass : kFail, &csv);
            } else if (*converge_cmds[1]) {
                const auto r = dini_report(seq, limit, dom, env, o);
                const std::string csv = io::ladder_csv(r);
                const bool ok = r.dini->state == DiniState::Confirmed && r.invariants_hold();
                result = render(io::to_json(r), format, ok ? kPass : kFail, &csv);
            } else {
                // evidence always comes from the default ladder, which is long enough to show decay
                ConvergenceOptions evidence_options = o;
                evidence_options.Ns = ConvergenceOptions{}.Ns;
                const auto evidence = dini_report(seq, limit, dom, env, evidence_options);
                const auto r = infinite_sum_rule_check(seq, dom, env, o.Ns, tolerance(1e-6), evidence);
                io::Json j = io::to_json(r);
                j["evidence"] = {{"uniform", to_string(evidence.uniform)}, {"dini", to_string(evidence.dini->state)}};
                const int code = r.status == CheckStatus::Pass ? kPass
                                 : r.status == CheckStatus::Fail ? kFail
                                                                 : kInconclusive;
                result = render(j, format, code);
            }
        }
    } catch (const BindingError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConstraintError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        // contract violations and evaluation failures are mathematical outcomes
        err << "failed: " << e.what() << "\n";
        return kFail;
    }
    out << result.output;
    out.flush();
    return result.code;
}

}  // namespace fourcalc::cli
