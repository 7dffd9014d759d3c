#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kroner/bgg.hpp"
#include "kroner/elasticity.hpp"
#include "kroner/errors.hpp"
#include "kroner/json_io.hpp"
#include "kroner/pathintegral.hpp"
#include "kroner/suites.hpp"

namespace {

using namespace kroner;

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

/// Raised for bad user input; maps to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return true;
    }
    std::ofstream f(path, std::ios::binary);
    f << text;
    return bool(f);
}

// verify ---------------------------------------------------------------------------

int cmd_verify(const VerifyConfig& cfg, const std::string& report_path, bool quiet) {
    try {
        cfg.validate();
    } catch (const PreconditionError& e) {
        throw InputError(e.what());
    }
    const VerifyOutcome out = run_verify(cfg);
    if (!write_text(report_path, out.report.dump(2) + "\n")) throw InputError("cannot write report to " + report_path);
    if (!quiet && report_path != "-") {
        for (const auto& id : out.report["identities"])
            if (id["status"] != "pass")
                std::cerr << "FAIL " << id["name"].get<std::string>() << "\n     " << id["counterexample"].get<std::string>() << "\n";
        const auto& s = out.report["summary"];
        std::cerr << "verify dim=" << cfg.dim << " max-degree=" << cfg.max_degree << ": " << s["passed"] << "/" << s["total"]
                  << " identities pass, signs " << (s["signs_resolved"].get<bool>() ? "resolved" : "unresolved") << "\n";
    }
    return out.pass ? 0 : kExitFail;
}

// derive ---------------------------------------------------------------------------

struct Target {
    OperatorId id;
    int dim;
    std::size_t index;
    std::optional<std::string> slot;
};

Target lookup_target(const std::string& name) {
    OperatorId id;
    try {
        id = parse_operator_id(name);
    } catch (const ParseError&) {
        throw InputError("unknown target '" + name + "' (expected P1, P2, P3, P1_2D or P2_2D)");
    }
    switch (id) {
        case OperatorId::P1: return {id, 3, 0, kSlotP1};
        case OperatorId::P2: return {id, 3, 1, kSlotP2};
        case OperatorId::P3: return {id, 3, 2, kSlotP3};
        case OperatorId::P1_2D: return {id, 2, 0, std::nullopt};
        case OperatorId::P2_2D: return {id, 2, 1, kSlotP2_2D};
        default: throw InputError("target '" + name + "' is not a derived operator (expected P1, P2, P3, P1_2D or P2_2D)");
    }
}

int cmd_derive(const std::string& target, const std::string& format) {
    if (format != "text" && format != "json") throw InputError("format must be text or json");
    const Target t = lookup_target(target);
    const LinOpExpr& op = derived(t.dim).operators.at(t.index);
    const SignReport& rep = sign_report(t.dim);
    const std::optional<int> sigma = t.slot ? rep.sign(*t.slot) : std::nullopt;

    if (format == "json") {
        nlohmann::json j;
        j["target"] = to_string(t.id);
        j["dim"] = t.dim;
        j["expression"] = op.render();
        j["formula"] = op.render_formula();
        j["tree"] = op.to_json();
        j["closed_form"] = closed_form_text(t.id, std::nullopt);
        j["closed_form_resolved"] = t.slot && !sigma ? nlohmann::json(nullptr) : nlohmann::json(closed_form_text(t.id, sigma));
        j["slot"] = t.slot ? nlohmann::json(*t.slot) : nlohmann::json(nullptr);
        j["sigma"] = sigma ? nlohmann::json(*sigma) : nlohmann::json(nullptr);
        j["conventions"] = convention_set();
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "target:       " << to_string(t.id) << " (" << t.dim << "D)\n"
              << "derived:      " << op.render() << "\n"
              << "expanded:     " << op.render_formula() << "\n"
              << "closed form:  " << closed_form_text(t.id, std::nullopt) << "\n";
    if (!t.slot) {
        std::cout << "sign slot:    none\n";
    } else if (sigma) {
        std::cout << "sign slot:    " << *t.slot << " = " << (*sigma > 0 ? "+1" : "-1") << "\n"
                  << "resolved:     " << closed_form_text(t.id, sigma) << "\n";
    } else {
        std::cout << "sign slot:    " << *t.slot << " unresolved\n";
    }
    std::cout << "conventions:  " << convention_set() << "\n";
    return 0;
}

// recover --------------------------------------------------------------------------

/// max |incompatibility(E)| on a 5-point-per-axis grid over the path's bounding box.
double incompatibility_residual(const TensorField& e, const PathSpec& path) {
    const TensorField r = incompatibility(e);
    if (r.is_zero()) return 0.0;
    const int n = path.dim();
    std::vector<double> lo(path.vertices().front()), hi(lo);
    for (const auto& v : path.vertices())
        for (int k = 0; k < n; ++k) {
            lo[std::size_t(k)] = std::min(lo[std::size_t(k)], v[std::size_t(k)]);
            hi[std::size_t(k)] = std::max(hi[std::size_t(k)], v[std::size_t(k)]);
        }
    constexpr int m = 5;
    double worst = 0;
    std::vector<int> idx(std::size_t(n), 0);
    std::vector<double> pt(std::size_t(n), 0.0);
    while (true) {
        for (int k = 0; k < n; ++k)
            pt[std::size_t(k)] = lo[std::size_t(k)] + (hi[std::size_t(k)] - lo[std::size_t(k)]) * idx[std::size_t(k)] / (m - 1);
        for (const auto& p : r.entries()) worst = std::max(worst, std::abs(p.evaluate(std::span<const double>(pt))));
        int k = 0;
        while (k < n && ++idx[std::size_t(k)] == m) idx[std::size_t(k++)] = 0;
        if (k == n) break;
    }
    return worst;
}

/// The straight path and a two-segment detour with the same end points.
std::vector<PathSpec> comparison_paths(const PathSpec& path) {
    const auto& a = path.start();
    const auto& b = path.end();
    std::vector<PathSpec> out{path};
    if (a == b) return out;
    out.push_back(PathSpec::straight(a, b));
    std::vector<double> mid(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) mid[k] = 0.5 * (a[k] + b[k]);
    std::size_t flat = 0;
    for (std::size_t k = 1; k < a.size(); ++k)
        if (std::abs(b[k] - a[k]) < std::abs(b[flat] - a[flat])) flat = k;
    mid[flat] += 1.0;
    out.push_back(PathSpec({a, mid, b}));
    return out;
}

int cmd_recover(const std::string& strain_file, const std::string& path_file, int quad_order, int subdivisions,
                std::optional<double> independence_tol, bool at_vertices, const std::string& output) {
    TensorField e;
    std::optional<PathSpec> path;
    QuadSpec quad{quad_order, subdivisions};
    try {
        e = symmetric_field_from_json(read_json_file(strain_file));
        path = path_from_json(read_json_file(path_file));
        quad.validate();
    } catch (const std::exception& ex) {
        throw InputError(ex.what());
    }
    if (e.shape() != Shape::matrix) throw InputError("strain must be a matrix field");
    if (e.dim() != path->dim()) throw InputError("strain and path dimensions differ");
    if (independence_tol && !(*independence_tol >= 0)) throw InputError("independence tolerance must be non-negative");

    const StrainSource src = StrainSource::polynomial(e);
    const double residual = incompatibility_residual(e, *path);
    std::optional<double> deviation;
    if (independence_tol) deviation = path_independence(src, comparison_paths(*path), quad);

    const int n = path->dim();
    std::ostringstream csv;
    csv << "point";
    for (int k = 1; k <= n; ++k) csv << ",x" << k;
    for (int k = 1; k <= n; ++k) csv << ",u" << k;
    csv << ",error_estimate,finite_difference,inc_residual,independence_deviation\n";
    const auto& verts = path->vertices();
    auto row = [&](const std::string& label, const PathSpec& p) {
        const RecoveryResult r = cesaro_volterra_estimate(src, p, quad);
        csv << label;
        for (double c : p.end()) csv << "," << format_double(c);
        for (double u : r.displacement) csv << "," << format_double(u);
        csv << "," << format_double(r.error_estimate) << "," << (r.finite_difference ? "true" : "false") << ","
            << format_double(residual) << "," << (deviation ? format_double(*deviation) : "") << "\n";
    };
    if (at_vertices)
        for (std::size_t i = 1; i + 1 < verts.size(); ++i)
            row("vertex" + std::to_string(i), PathSpec(std::vector<std::vector<double>>(verts.begin(), verts.begin() + long(i) + 1)));
    row("end", *path);
    if (!write_text(output, csv.str())) throw InputError("cannot write " + output);

    if (deviation && *deviation > *independence_tol) {
        std::cerr << "path independence check failed: deviation " << format_double(*deviation) << " > "
                  << format_double(*independence_tol) << "\n";
        return kExitFail;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homotopy operators for the elasticity complex: verification, derivation and displacement recovery"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "kroner 0.1.0");

    VerifyConfig cfg;
    std::string report = "conformance_report.json";
    bool quiet = false;
    auto* verify = app.add_subcommand("verify", "Run the exact identity suites and write a conformance report");
    verify->add_option("--dim", cfg.dim, "Dimension (2 or 3)")->required();
    verify->add_option("--max-degree", cfg.max_degree, "Maximal polynomial degree of the probe basis")->capture_default_str();
    verify->add_option("--seed", cfg.seed, "Seed for random spot checks")->capture_default_str();
    verify->add_option("--report", report, "Report path ('-' for stdout)")->capture_default_str();
    verify->add_option("--jobs", cfg.jobs, "Worker threads per suite")->capture_default_str();
    verify->add_flag("--quiet", quiet, "No summary on stderr");

    std::string target, format = "text";
    auto* derive = app.add_subcommand("derive", "Print a derived operator with its closed form and resolved sign");
    derive->add_option("--target", target, "P1, P2, P3, P1_2D or P2_2D")->required();
    derive->add_option("--format", format, "text or json")->capture_default_str();

    std::string strain_file, path_file, output = "-";
    int quad_order = 8, subdivisions = 1;
    std::optional<double> tol;
    bool at_vertices = false;
    auto* recover = app.add_subcommand("recover", "Recover the displacement from a strain by the Cesàro-Volterra path integral");
    recover->add_option("--strain", strain_file, "Strain field JSON")->required();
    recover->add_option("--path", path_file, "Path JSON")->required();
    recover->add_option("--quad-order", quad_order, "Gauss-Legendre points per segment")->capture_default_str();
    recover->add_option("--subdivisions", subdivisions, "Sub-intervals per segment")->capture_default_str();
    recover->add_option("--check-independence", tol, "Fail when straight/detour/given paths differ by more than TOL");
    recover->add_flag("--at-vertices", at_vertices, "Also emit rows at interior vertices");
    recover->add_option("--output", output, "CSV path ('-' for stdout)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*verify) return cmd_verify(cfg, report, quiet);
        if (*derive) return cmd_derive(target, format);
        if (*recover) return cmd_recover(strain_file, path_file, quad_order, subdivisions, tol, at_vertices, output);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitInput;
}
