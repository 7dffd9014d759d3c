#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kroner/probes.hpp"
#include "kroner/tensor_field.hpp"

namespace kroner {

/// Outcome of one identity checked over a probe family.
struct IdentityResult {
    std::string name;
    bool pass = true;
    std::size_t probes = 0;
    /// First failing probe (lowest index), always set when pass is false.
    std::optional<std::string> counterexample;
    double seconds = 0.0;

    nlohmann::json to_json(bool with_timing = true) const;
};

using FieldOp = std::function<TensorField(const TensorField&)>;

/// 3D: {P1, P2, P3}; 2D: {P1, P2}.
struct ElasticityOps {
    int dim = 3;
    std::vector<FieldOp> p;
};

/// Operators from the bgg derivation, evaluated through their expression trees.
ElasticityOps derived_elasticity_ops(int dim);
/// Closed forms with the resolved signs.
ElasticityOps printed_elasticity_ops(int dim);

/// d² = 0, κ² = 0, 𝔭² = 0, 𝔭d + d𝔭 = id and (dκ + κd) = (r+k)·id, scalar forms of every degree.
std::vector<IdentityResult> derham_suite(int dim, int max_degree, unsigned jobs = 1);
/// dS + Sd = 0, 𝒜² = 0 and the 𝒜ℬ homotopy identity on W-valued monomial forms.
std::vector<IdentityResult> bgg_suite(int dim, int max_degree, unsigned jobs = 1);
/// Homotopy identities of the elasticity complex on the monomial basis.
std::vector<IdentityResult> elasticity_identities(const ElasticityOps& ops, const std::string& label, int max_degree,
                                                  unsigned jobs = 1);
/// Printed (σ-resolved) operators equal the derived ones on the monomial basis.
std::vector<IdentityResult> conformance_suite(int dim, int max_degree, unsigned jobs = 1);
/// 𝒫₁𝒫₂ = 0 and 𝒫₂𝒫₃ = 0 (3D) or 𝒫₁𝒫₂ = 0 (2D).
std::vector<IdentityResult> complex_suite(const ElasticityOps& ops, const std::string& label, int max_degree, unsigned jobs = 1);
/// K_i^r equals P_i on H_r for r ≤ max_r, Koszul complex property and K₂ duality.
std::vector<IdentityResult> koszul_suite(int max_r, std::uint64_t seed, unsigned jobs = 1);
/// Degree maps H_r → H_{r+1}, H_{r+2}, H_{r+1} for r ≤ max_r.
std::vector<IdentityResult> preservation_suite(const ElasticityOps& ops, const std::string& label, int max_r, unsigned jobs = 1);
/// The elasticity identities on seeded random polynomial fields.
std::vector<IdentityResult> random_spot_checks(int dim, int max_degree, std::uint64_t seed, int count, unsigned jobs = 1);

struct VerifyConfig {
    int dim = 3;
    int max_degree = 6;
    std::uint64_t seed = 42;
    unsigned jobs = 1;
    /// Throws PreconditionError on dim ∉ {2,3}, max_degree < 0 or jobs = 0.
    void validate() const;
};

struct VerifyOutcome {
    bool pass = true;
    /// Everything except wall-clock data lives outside "timing".
    nlohmann::json report;
};

/// Every suite for one dimension, plus the sign report and convention set.
VerifyOutcome run_verify(const VerifyConfig& cfg);

/// Runs `test` on every probe; the first failure in probe order is reported.
template <class T>
IdentityResult check_probes(const std::string& name, const std::vector<T>& probes,
                            const std::function<std::optional<std::string>(const T&)>& test, unsigned jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    IdentityResult r;
    r.name = name;
    r.probes = probes.size();
    const auto out = parallel_map<std::optional<std::string>>(
        probes.size(), jobs, [&](std::size_t i) { return test(probes[i]); });
    for (const auto& o : out)
        if (o) {
            r.pass = false;
            r.counterexample = *o;
            break;
        }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace kroner
