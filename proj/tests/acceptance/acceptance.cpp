// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <sys/wait.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kroner/diffcalc.hpp"
#include "kroner/elasticity.hpp"
#include "kroner/json_io.hpp"
#include "kroner/pathintegral.hpp"
#include "kroner/suites.hpp"
#include "oracles.hpp"

using namespace kroner;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
using Verts = std::vector<std::vector<double>>;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Tally {
    std::size_t identities = 0, probes = 0;
    std::vector<std::string> failed;
    void add(const std::vector<IdentityResult>& rs, const std::string& prefix = "") {
        for (const auto& r : rs) {
            ++identities;
            probes += r.probes;
            if (!r.pass) failed.push_back(prefix + r.name);
        }
    }
    bool ok() const { return failed.empty(); }
    std::string summary() const {
        std::ostringstream os;
        os << identities << " identities, " << probes << " probes";
        if (!failed.empty()) {
            os << "; failing:";
            for (const auto& f : failed) os << ' ' << f;
        }
        return os.str();
    }
};

int failures = 0;

void report(int ac, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << "AC" << ac << ' ' << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
}

std::string timing(double secs, double limit) {
    std::ostringstream os;
    os.precision(3);
    os << secs << " s (limit " << limit << " s)";
    return os.str();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

std::string fmt_vec(const std::vector<double>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s + ")";
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

struct Run {
    int code;
    std::string output;
};

Run run(const std::string& cmd) {
    Run r{-1, {}};
    FILE* p = popen((cmd + " 2>&1").c_str(), "r");
    if (!p) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.output.append(buf, n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string q(const std::string& s) { return "'" + s + "'"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

void ac1() {
    const auto t0 = Clock::now();
    Tally t;
    for (int dim : {2, 3}) t.add(derham_suite(dim, 6), std::to_string(dim) + "D:");
    const double s = since(t0);
    report(1, t.ok() && s <= 30, "de Rham suite, dims 2 and 3, degree ≤ 6: " + t.summary() + ", " + timing(s, 30));
}

void ac2() {
    const auto t0 = Clock::now();
    Tally t;
    for (int dim : {2, 3}) t.add(bgg_suite(dim, 5), std::to_string(dim) + "D:");
    const double s = since(t0);
    report(2, t.ok() && s <= 30, "BGG suite, degree ≤ 5: " + t.summary() + ", " + timing(s, 30));
}

void ac3() {
    const auto t0 = Clock::now();
    Tally t;
    t.add(elasticity_identities(derived_elasticity_ops(3), "derived", 6), "3D:");
    t.add(elasticity_identities(derived_elasticity_ops(2), "derived", 8), "2D:");
    const double s = since(t0);
    report(3, t.ok() && s <= 60, "derived elasticity identities (3D ≤ 6, 2D ≤ 8): " + t.summary() + ", " + timing(s, 60));
}

void ac4(const fs::path& workdir) {
    const SignReport& r3 = sign_report(3);
    const SignReport& r2 = sign_report(2);
    Tally t;
    for (int dim : {2, 3}) t.add(conformance_suite(dim, 6), std::to_string(dim) + "D:");
    const nlohmann::json j{{"dim3", r3.to_json()}, {"dim2", r2.to_json()}};
    std::ofstream(workdir / "sign_report.json") << j.dump(2) << '\n';
    const bool unique = r3.resolved() && r3.assignments_matching == 1 && r2.resolved() && r2.assignments_matching == 1;
    std::ostringstream os;
    os << "σ = (" << *r3.sign(kSlotP1) << ", " << *r3.sign(kSlotP2) << ", " << *r3.sign(kSlotP3) << ") unique of "
       << r3.assignments_tested << ", σ₂' = " << *r2.sign(kSlotP2_2D) << " unique of " << r2.assignments_tested
       << "; conformance " << t.summary() << "; report " << (workdir / "sign_report.json").string();
    report(4, unique && t.ok(), os.str());
}

void ac5() {
    Tally t;
    t.add(complex_suite(derived_elasticity_ops(3), "derived", 6), "3D:");
    t.add(complex_suite(derived_elasticity_ops(2), "derived", 6), "2D:");
    t.add(koszul_suite(6, 42));
    report(5, t.ok(), "complex and Koszul suites, r ≤ 6: " + t.summary());
}

void ac6() {
    Tally t;
    t.add(preservation_suite(derived_elasticity_ops(3), "derived", 6));
    t.add(preservation_suite(printed_elasticity_ops(3), "printed", 6));
    report(6, t.ok(), "polynomial preservation, r ≤ 6: " + t.summary());
}

std::vector<double> eval_field(const TensorField& u, const std::vector<double>& x) {
    std::vector<double> out;
    for (const auto& c : u.entries()) out.push_back(c.evaluate(std::span<const double>(x)));
    return out;
}

PathSpec random_polyline(const std::vector<double>& end, SplitMix64& rng) {
    Verts v{{0, 0, 0}};
    const int inner = int(rng.uniform_int(1, 3));
    for (int i = 0; i < inner; ++i) v.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    v.push_back(end);
    return PathSpec(v);
}

std::vector<TensorField> compatible_strains() {
    SplitMix64 rng(7);
    std::vector<TensorField> out;
    for (int i = 0; i < 20; ++i) out.push_back(def_op(random_vector_field(3, 5, rng)));
    return out;
}

void ac7() {
    const auto t0 = Clock::now();
    const QuadSpec quad{8, 1};
    SplitMix64 rng(77);
    double recov = 0, indep = 0;
    for (const auto& e : compatible_strains()) {
        const auto src = StrainSource::polynomial(e);
        const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        recov = std::max(recov, max_abs_diff(cesaro_volterra(src, PathSpec::straight({0, 0, 0}, x), quad), eval_field(p1(e), x)));
        std::vector<PathSpec> paths;
        for (int k = 0; k < 3; ++k) paths.push_back(random_polyline(x, rng));
        indep = std::max(indep, path_independence(src, paths, quad));
    }
    const TensorField hand = oracle::mat({"0", "x2", "0", "x2", "0", "0", "0", "0", "0"}, 3, true);
    const double hv = max_abs_diff(cesaro_volterra(StrainSource::polynomial(hand), PathSpec::straight({0, 0, 0}, {1, 2, 3}), quad),
                                   {4, 0, 0});
    const double s = since(t0);
    const bool pass = recov <= 1e-10 && indep <= 1e-10 && hv <= 1e-12 && s <= 10;
    report(7, pass,
           "recovery vs p1 max " + fmt(recov) + " (≤ 1e-10), independence max " + fmt(indep) + " (≤ 1e-10), (x₂²,0,0) at (1,2,3) error " +
               fmt(hv) + " (≤ 1e-12), " + timing(s, 10));
}

void incompatible_eval(const double* y, double* e, double* de) {
    std::fill(e, e + 9, 0.0);
    std::fill(de, de + 27, 0.0);
    e[8] = y[1] * y[1];
    de[1 * 9 + 8] = 2 * y[1];
}

void ac8() {
    double compat = 0;
    SplitMix64 rng(88);
    for (const auto& e : compatible_strains()) {
        const auto src = StrainSource::polynomial(e);
        for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {0, 2}}) compat = std::max(compat, norm(defect_loop(src, unit_square_loop(3, a, b))));
        Verts v{{0, 0, 0}};
        for (int i = 0; i < 3; ++i) v.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
        v.push_back({0, 0, 0});
        compat = std::max(compat, norm(defect_loop(src, PathSpec(v))));
    }
    const TensorField bad = oracle::mat({"0", "0", "0", "0", "0", "0", "0", "0", "x2^2"}, 3, true);
    const auto src = StrainSource::polynomial(bad);
    const Verts sq12{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0}};
    const auto ref = oracle::cv_simpson(3, incompatible_eval, sq12, {0, 0, 0});
    const auto val = defect_loop(src, unit_square_loop(3, 0, 1));
    const double rel = max_abs_diff(val, ref) / std::max(norm(ref), 1e-300);
    const bool positive = norm(val) > 0;
    const bool matches = norm(ref) > 0 && rel <= 1e-6;
    const auto side = defect_loop(src, unit_square_loop(3, 1, 2));
    report(8, compat <= 1e-10 && positive && matches,
           "compatible loops max " + fmt(compat) + " (≤ 1e-10); diag(0,0,x₂²) x₁-x₂ unit square " + fmt_vec(val) + ", oracle " +
               fmt_vec(ref) + ", |loop| > 0 " + (positive ? "yes" : "no") + "; x₂-x₃ unit square " + fmt_vec(side));
}

void ac9(const std::string& cli, const fs::path& data, const fs::path& workdir) {
    std::vector<std::string> bad;
    auto expect = [&](const std::string& label, const std::string& args, int code, const std::string& needle = "") {
        const Run r = run(q(cli) + " " + args);
        if (r.code != code || (!needle.empty() && r.output.find(needle) == std::string::npos))
            bad.push_back(label + " exit " + std::to_string(r.code) + " (want " + std::to_string(code) + ")");
        return r;
    };
    const std::string w = workdir.string(), d = data.string();
    expect("verify 2D", "verify --dim 2 --max-degree 6 --quiet --report " + q(w + "/v2.json"), 0);
    expect("verify degree -1", "verify --dim 3 --max-degree -1 --report " + q(w + "/neg.json"), 2);
    expect("verify dim 4", "verify --dim 4 --report " + q(w + "/d4.json"), 2);
    expect("derive P9", "derive --target P9", 2);
    expect("derive P2", "derive --target P2", 0);
    expect("recover nonsymmetric", "recover --strain " + q(d + "/strain_nonsym.json") + " --path " + q(d + "/path_straight_123.json"),
           2, "entry 1,2");
    expect("recover malformed", "recover --strain " + q(d + "/malformed.json") + " --path " + q(d + "/path_straight_123.json"), 2);
    expect("recover compatible", "recover --strain " + q(d + "/strain_def_x2sq.json") + " --path " + q(d + "/path_straight_123.json"),
           0, "end,1,2,3,4,");
    expect("recover dependent",
           "recover --strain " + q(d + "/strain_incompatible.json") + " --path " + q(d + "/path_diag_110.json") +
               " --check-independence 1e-10",
           1);

    // Determinism: reports agree outside "timing" regardless of thread count.
    bool same = true;
    for (unsigned jobs : {1u, 3u})
        expect("verify jobs " + std::to_string(jobs),
               "verify --dim 2 --max-degree 4 --quiet --jobs " + std::to_string(jobs) + " --report " + q(w + "/det" + std::to_string(jobs) + ".json"),
               0);
    try {
        auto a = nlohmann::json::parse(slurp(workdir / "det1.json"));
        auto b = nlohmann::json::parse(slurp(workdir / "det3.json"));
        a.erase("timing");
        b.erase("timing");
        same = a == b;
    } catch (const std::exception&) {
        same = false;
    }
    if (!same) bad.push_back("verify report differs between --jobs 1 and --jobs 3");
    const Run d1 = run(q(cli) + " derive --target P1 --format json"), d2 = run(q(cli) + " derive --target P1 --format json");
    if (d1.output != d2.output) bad.push_back("derive output differs between runs");

    const auto t0 = Clock::now();
    const Run def = run(q(cli) + " verify --dim 3 --quiet --report " + q(w + "/defaults.json"));
    const double s = since(t0);
    std::string failing;
    if (def.code != 0) {
        bad.push_back("verify --dim 3 on defaults exit " + std::to_string(def.code) + " (want 0)");
        try {
            for (const auto& id : nlohmann::json::parse(slurp(workdir / "defaults.json"))["identities"])
                if (id["status"] != "pass") failing += " " + id["name"].get<std::string>();
        } catch (const std::exception&) {
        }
    }
    std::string detail = "exit-code contract and report determinism";
    if (bad.empty()) {
        detail += " hold; defaults verify " + fmt(s) + " s";
    } else {
        for (const auto& b : bad) detail += "; " + b;
        if (!failing.empty()) detail += "; failing identities:" + failing;
    }
    report(9, bad.empty(), detail);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria runner"};
    std::string cli, data, workdir = "acceptance_work";
    app.add_option("--cli", cli, "path to the kroner executable")->required();
    app.add_option("--data", data, "directory with test JSON inputs")->required();
    app.add_option("--workdir", workdir, "scratch directory for reports");
    CLI11_PARSE(app, argc, argv);
    fs::create_directories(workdir);

    const auto t0 = Clock::now();
    ac1();
    ac2();
    ac3();
    ac4(workdir);
    ac5();
    ac6();
    ac7();
    ac8();
    ac9(cli, data, workdir);
    std::cout << (9 - failures) << "/9 criteria pass (" << fmt(since(t0)) << " s)" << std::endl;
    return failures == 0 ? 0 : 1;
}
