#include <doctest.h>

#include <set>
#include <stdexcept>

#include "kroner/probes.hpp"

using namespace kroner;

namespace {

std::uint64_t splitmix_ref(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("SplitMix64 stream") {
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    std::uint64_t s = 99;
    SplitMix64 a(99);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == splitmix_ref(s));
}

TEST_CASE("uniform draws stay in range") {
    SplitMix64 rng(5);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto k = rng.uniform_int(-3, 3);
        CHECK((k >= -3 && k <= 3));
        seen.insert(k);
        const double u = rng.uniform(-1, 2);
        CHECK((u >= -1 && u < 2));
    }
    CHECK(seen.size() == 7);
    CHECK(rng.uniform_int(4, 4) == 4);
}

TEST_CASE("split streams are deterministic and distinct") {
    const SplitMix64 root(42);
    SplitMix64 a = root.split(1), b = root.split(1), c = root.split(2);
    const auto va = a.next();
    CHECK(va == b.next());
    CHECK(va != c.next());
    SplitMix64 r1(7), r2(7);
    CHECK(random_symmetric_field(3, 3, r1) == random_symmetric_field(3, 3, r2));
}

TEST_CASE("random fields respect degree bounds") {
    SplitMix64 rng(6);
    for (int i = 0; i < 20; ++i) {
        CHECK(random_poly(3, 4, rng).degree() <= 4);
        const TensorField s = random_symmetric_field(3, 3, rng, 3);
        CHECK(s.symmetry() == Symmetry::symmetric);
        CHECK((s.is_zero() || s.is_homogeneous(3)));
    }
}

TEST_CASE("parallel_map keeps input order") {
    for (unsigned jobs : {1u, 2u, 4u, 16u}) {
        const auto out = parallel_map<std::size_t>(37, jobs, [](std::size_t i) { return i * i; });
        REQUIRE(out.size() == 37);
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
    }
    CHECK(parallel_map<int>(0, 4, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("parallel_map rethrows the lowest-index failure") {
    for (unsigned jobs : {1u, 3u}) {
        try {
            (void)parallel_map<int>(10, jobs, [](std::size_t i) -> int {
                if (i == 7 || i == 4) throw std::runtime_error("fail " + std::to_string(i));
                return 0;
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "fail 4");
        }
    }
}
