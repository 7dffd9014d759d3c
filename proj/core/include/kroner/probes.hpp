#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "kroner/tensor_field.hpp"

namespace kroner {

/// SplitMix64 seed expansion: state += 0x9e3779b97f4a7c15, then the
/// xor-shift-multiply finalizer. Streams for sub-tasks are derived with
/// `split(tag)` so results never depend on scheduling.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    std::uint64_t operator()() { return next(); }
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t(0); }

    /// Integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    /// Double in [lo, hi).
    double uniform(double lo, double hi);
    SplitMix64 split(std::uint64_t tag) const;

private:
    std::uint64_t state_;
};

/// Polynomial of total degree ≤ max_degree with small random rational coefficients.
Poly random_poly(int dim, int max_degree, SplitMix64& rng, int min_degree = 0);
TensorField random_vector_field(int dim, int max_degree, SplitMix64& rng, int min_degree = 0);
TensorField random_symmetric_field(int dim, int max_degree, SplitMix64& rng, int min_degree = 0);

/// Evaluates fn(0..n-1) on up to `jobs` threads; out[i] = fn(i) regardless of
/// completion order. The first exception (lowest index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned jobs, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errs(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(jobs, unsigned(n)));
    auto run = [&](unsigned w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace kroner
