#include "kroner/probes.hpp"

#include "kroner/errors.hpp"

namespace kroner {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::int64_t SplitMix64::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw PreconditionError("empty integer range");
    const std::uint64_t span = std::uint64_t(hi - lo) + 1;
    if (span == 0) return std::int64_t(next());
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = max() - max() % span;
    std::uint64_t r;
    do r = next();
    while (r >= limit);
    return lo + std::int64_t(r % span);
}

double SplitMix64::uniform(double lo, double hi) {
    const double u = double(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

SplitMix64 SplitMix64::split(std::uint64_t tag) const {
    SplitMix64 g(state_ ^ (tag * 0xd1b54a32d192ed03ULL));
    return SplitMix64(g.next());
}

Poly random_poly(int dim, int max_degree, SplitMix64& rng, int min_degree) {
    Poly p(dim);
    for (const auto& e : Poly::monomials_up_to(dim, max_degree)) {
        if (total_degree(e) < min_degree) continue;
        if (rng.uniform_int(0, 2) == 0) continue;
        Rat c(long(rng.uniform_int(-9, 9)), long(rng.uniform_int(1, 4)));
        c.canonicalize();
        p += Poly::monomial(dim, e, c);
    }
    return p;
}

TensorField random_vector_field(int dim, int max_degree, SplitMix64& rng, int min_degree) {
    std::vector<Poly> c;
    for (int i = 0; i < dim; ++i) c.push_back(random_poly(dim, max_degree, rng, min_degree));
    return TensorField::vector(std::move(c));
}

TensorField random_symmetric_field(int dim, int max_degree, SplitMix64& rng, int min_degree) {
    std::vector<Poly> e(std::size_t(dim * dim), Poly(dim));
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            e[std::size_t(i * dim + j)] = random_poly(dim, max_degree, rng, min_degree);
            e[std::size_t(j * dim + i)] = e[std::size_t(i * dim + j)];
        }
    return TensorField::matrix(dim, std::move(e), Symmetry::symmetric);
}

}  // namespace kroner
